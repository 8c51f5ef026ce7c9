"""
Formal models of analogy over {0,1}: 4-ary relations read as "a is to b as c is to d".
"""
import logging
from dataclasses import dataclass
from itertools import product
from math import prod
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from src.relations.builtin import builtin_relations
from src.relations.registry import RelationRegistry
from src.relations.relations import (
    Constraint,
    Relation,
    extend_consequent,
    solutions,
    tuple_of,
)
from src.utils.config import load_settings
from src.utils.errors import CapabilityError, InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnalogyModel:
    name: str
    relation: Relation

    def __post_init__(self):
        if self.relation.arity != 4:
            raise InputError(f"Model {self.name} must be 4-ary, got arity {self.relation.arity}")

    def holds(self, a: int, b: int, c: int, d: int) -> bool:
        return (a, b, c, d) in self.relation


def builtin_models() -> Tuple[AnalogyModel, ...]:
    return tuple(AnalogyModel(name, r) for name, r in builtin_relations().items())


def model_from_registry(registry: RelationRegistry, name: str) -> AnalogyModel:
    return AnalogyModel(name, registry.get(name))


# Postulates

POSTULATES = (
    "reflexivity",
    "symmetry",
    "central_permutation",
    "internal_reversal",
    "extreme_permutation",
    "strong_reflexivity",
    "strong_inner_reflexivity",
    "uniqueness",
)

# coordinate i of the image is coordinate perm[i] of a:b::c:d
_PERMUTATIONS = {
    "symmetry": (2, 3, 0, 1),               # c:d::a:b
    "central_permutation": (0, 2, 1, 3),    # a:c::b:d
    "internal_reversal": (1, 0, 3, 2),      # b:a::d:c
    "extreme_permutation": (3, 1, 2, 0),    # d:b::c:a
}


def postulate_violated(name: str, relation: Relation, witness: Sequence[int]) -> bool:
    """Whether `witness` refutes the named postulate for the relation.

    Witnesses are member quadruples, except for reflexivity (the missing quadruple
    (a, a, b, b)) and uniqueness (a prefix (a, b, c) with two completions).
    """
    witness = tuple(witness)
    if name == "reflexivity":
        return (len(witness) == 4 and witness[0] == witness[1] and witness[2] == witness[3]
                and witness not in relation)
    if name == "uniqueness":
        return len(witness) == 3 and len(solutions(relation, *witness)) == 2
    if witness not in relation:
        return False
    a, b, c, d = witness
    if name in _PERMUTATIONS:
        return tuple(witness[p] for p in _PERMUTATIONS[name]) not in relation
    if name == "strong_reflexivity":
        return a == c and d != b
    if name == "strong_inner_reflexivity":
        return a == b and d != c
    raise InputError(f"Unknown postulate {name!r}")


def _candidates(name: str, relation: Relation):
    if name == "reflexivity":
        return sorted(((a, a, b, b) for a, b in product((0, 1), repeat=2)),
                      key=lambda t: t[0] + 4 * t[2])
    if name == "uniqueness":
        return [tuple_of(p, 3) for p in range(8)]
    return relation.tuples()


class PostulateReport(BaseModel):
    model: str
    verdicts: Dict[str, bool]
    witnesses: Dict[str, List[int]]

    def failed(self) -> List[str]:
        return [name for name in POSTULATES if not self.verdicts[name]]


def check_postulates(model: AnalogyModel) -> PostulateReport:
    """Exhaustive audit; the witness of a failure is the first refuting candidate in code order."""
    verdicts, witnesses = {}, {}
    for name in POSTULATES:
        witness = next((t for t in _candidates(name, model.relation)
                        if postulate_violated(name, model.relation, t)), None)
        verdicts[name] = witness is None
        if witness is not None:
            witnesses[name] = list(witness)
    report = PostulateReport(model=model.name, verdicts=verdicts, witnesses=witnesses)
    logger.debug(f"Postulates of {model.name}: failed {report.failed()}")
    return report


# Equations

def _check_vectors(a: Sequence[int], b: Sequence[int], c: Sequence[int]):
    if not len(a) == len(b) == len(c):
        raise InputError(f"Vectors of unequal length: {len(a)}, {len(b)}, {len(c)}")
    for vector in (a, b, c):
        for bit in vector:
            if bit not in (0, 1):
                raise InputError(f"Vector entry is not a bit: {bit!r}")


def solve_components(model: AnalogyModel, a: Sequence[int], b: Sequence[int],
                     c: Sequence[int]) -> Tuple[FrozenSet[int], ...]:
    """Componentwise solution sets of a : b :: c : x."""
    _check_vectors(a, b, c)
    return tuple(solutions(model.relation, ai, bi, ci) for ai, bi, ci in zip(a, b, c))


def solution_count(components: Sequence[FrozenSet[int]]) -> int:
    return prod(len(s) for s in components)


def solve_vector(model: AnalogyModel, a: Sequence[int], b: Sequence[int], c: Sequence[int],
                 cap: Optional[int] = None) -> FrozenSet[Tuple[int, ...]]:
    """All x with a_i : b_i :: c_i : x_i in every component; empty if one component is unsolvable."""
    components = solve_components(model, a, b, c)
    cap = load_settings().solution_cap if cap is None else cap
    count = solution_count(components)
    if count > cap:
        raise CapabilityError(f"{count} solutions exceed the cap {cap}; use solve_components")
    return frozenset(product(*(sorted(s) for s in components)))


def analogical_constraint(src: AnalogyModel, dst: AnalogyModel) -> Constraint:
    return Constraint(src.relation, extend_consequent(dst.relation))
