"""
Named relations: the builtins plus entries read from a registry file.

Registry syntax, one entry per line:

    # comment
    NAME = 0 1 1 ; 0 1 0 ; 0 0 1 ; 0 0 0

Rows are separated by ';'. Later entries override earlier ones, builtins included.
"""
import logging
import re
from pathlib import Path
from typing import Dict, Iterator, Optional, Tuple, Union

from src.relations.builtin import builtin_relations
from src.relations.relations import Relation, parse_relation
from src.utils.errors import InputError, ParseError

logger = logging.getLogger(__name__)

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_'\-]*$")


class RelationRegistry:
    def __init__(self, relations: Optional[Dict[str, Relation]] = None):
        self._relations: Dict[str, Relation] = dict(builtin_relations())
        if relations:
            self._relations.update(relations)

    def register(self, name: str, relation: Relation):
        if not _NAME.match(name):
            raise InputError(f"Invalid relation name {name!r}")
        if name in self._relations:
            logger.info(f"Relation {name} overridden")
        self._relations[name] = relation

    def get(self, name: str) -> Relation:
        try:
            return self._relations[name]
        except KeyError:
            known = ", ".join(self.names())
            raise InputError(f"Unknown relation {name!r} (known: {known})")

    def names(self) -> Tuple[str, ...]:
        return tuple(sorted(self._relations))

    def items(self) -> Iterator[Tuple[str, Relation]]:
        for name in self.names():
            yield name, self._relations[name]

    def __contains__(self, name: str) -> bool:
        return name in self._relations

    def __len__(self) -> int:
        return len(self._relations)


def parse_registry(text: str, registry: Optional[RelationRegistry] = None) -> RelationRegistry:
    registry = registry or RelationRegistry()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("Expected 'NAME = matrix'", row=lineno)
        name, matrix = (part.strip() for part in line.split("=", 1))
        if not _NAME.match(name):
            raise ParseError(f"Invalid relation name {name!r}", row=lineno)
        try:
            relation = parse_relation(matrix)
        except ParseError as e:
            raise ParseError(f"Relation {name}: {e}", row=lineno)
        registry.register(name, relation)
    return registry


def load_registry(path: Optional[Union[str, Path]] = None) -> RelationRegistry:
    """The builtin registry, extended by the file at `path` when given."""
    registry = RelationRegistry()
    if path is None:
        return registry
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Error reading relation registry {path}: {str(e)}")
        raise InputError(f"Cannot read relation registry {path}: {e.strerror}") from e
    parse_registry(text, registry)
    logger.info(f"Loaded relation registry {path} ({len(registry)} relations)")
    return registry
