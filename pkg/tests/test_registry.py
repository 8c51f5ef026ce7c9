import pytest

from src.relations.registry import RelationRegistry, load_registry, parse_registry
from src.relations.relations import Relation
from src.utils.errors import InputError, ParseError

REGISTRY_TEXT = """
# identity on pairs
EQ2 = 0 1 ; 0 1
R5 = 0 1 ; 0 1 ; 0 1 ; 0 1   # override
"""


def test_builtins_preloaded():
    registry = RelationRegistry()
    assert registry.names() == ("R1", "R2", "R3", "R4", "R5")
    assert len(registry.get("R1")) == 12


def test_parse_registry_adds_and_overrides():
    registry = parse_registry(REGISTRY_TEXT)
    assert registry.get("EQ2") == Relation.from_tuples(2, [(0, 0), (1, 1)])
    assert len(registry.get("R5")) == 2
    assert "R4" in registry


def test_unknown_name():
    with pytest.raises(InputError):
        RelationRegistry().get("R9")


def test_invalid_name():
    with pytest.raises(InputError):
        RelationRegistry().register("9lives", Relation.full(1))


@pytest.mark.parametrize("text, row", [
    ("EQ2 = 0 1 ; 0 1\nBROKEN\n", 2),
    ("\n\nBAD = 0 1 ; 0\n", 3),
    ("1X = 0\n", 1),
])
def test_malformed_lines(text, row):
    with pytest.raises(ParseError) as e:
        parse_registry(text)
    assert e.value.row == row


def test_load_registry_from_file(tmp_path):
    path = tmp_path / "relations.txt"
    path.write_text(REGISTRY_TEXT, encoding="utf-8")
    registry = load_registry(path)
    assert "EQ2" in registry
    assert load_registry(None).names() == ("R1", "R2", "R3", "R4", "R5")


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_registry(tmp_path / "missing.txt")
