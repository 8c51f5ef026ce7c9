"""
Named families of Boolean functions and the classifier over their inclusion chain.

    C   constants
    N   constants and negated projections
    I   constants and projections
    Ω(1) constants, projections and negated projections
    L   affine functions
    J   projections
    ALL every function
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, FrozenSet, Tuple

from src.boolfun.boolfun import (
    TruthTable,
    full_mask,
    is_affine,
    projection_code,
)
from src.utils.config import enumeration_cap
from src.utils.errors import CapabilityError, InputError

logger = logging.getLogger(__name__)

OTHER = "OTHER"


class FamilyName(str, Enum):
    C = "C"
    N = "N"
    I = "I"  # noqa: E741
    OMEGA1 = "Ω(1)"
    L = "L"
    J = "J"
    ALL = "ALL"


_ALIASES = {"Omega(1)": FamilyName.OMEGA1, "OMEGA1": FamilyName.OMEGA1, "O1": FamilyName.OMEGA1}


def _constants(arity: int) -> Tuple[int, ...]:
    return (0, full_mask(arity))


def _projections(arity: int) -> Tuple[int, ...]:
    return tuple(projection_code(arity, i) for i in range(arity))


def _negated_projections(arity: int) -> Tuple[int, ...]:
    return tuple(full_mask(arity) ^ p for p in _projections(arity))


def _affine(arity: int) -> Tuple[int, ...]:
    codes = []
    projections = _projections(arity)
    for w in range(1 << arity):
        code = 0
        for i, p in enumerate(projections):
            if (w >> i) & 1:
                code ^= p
        codes.append(code)
        codes.append(code ^ full_mask(arity))
    return tuple(codes)


def _all(arity: int) -> Tuple[int, ...]:
    cap = enumeration_cap()
    if arity > cap:
        raise CapabilityError(f"Enumerating all functions of arity {arity} exceeds the cap {cap}")
    return tuple(range(1 << (1 << arity)))


@dataclass(frozen=True)
class FunctionFamily:
    name: FamilyName
    description: str
    generators: Tuple[Callable[[int], Tuple[int, ...]], ...]
    predicate: Callable[[TruthTable], bool]

    def contains(self, f: TruthTable) -> bool:
        return self.predicate(f)

    def __contains__(self, f: TruthTable) -> bool:
        return self.contains(f)

    def codes(self, arity: int) -> FrozenSet[int]:
        if arity < 0:
            raise InputError("Arity must be non-negative")
        return frozenset(code for generate in self.generators for code in generate(arity))

    def enumerate(self, arity: int) -> Tuple[TruthTable, ...]:
        """The arity-n members in ascending table-code order."""
        return tuple(TruthTable(arity, code) for code in sorted(self.codes(arity)))


def _is_constant(f: TruthTable) -> bool:
    return f.code in _constants(f.arity)


def _is_projection(f: TruthTable) -> bool:
    return f.code in _projections(f.arity)


def _is_negated_projection(f: TruthTable) -> bool:
    return f.code in _negated_projections(f.arity)


FAMILIES = {
    FamilyName.C: FunctionFamily(
        FamilyName.C, "constant functions", (_constants,), _is_constant),
    FamilyName.N: FunctionFamily(
        FamilyName.N, "constants and negated projections", (_constants, _negated_projections),
        lambda f: _is_constant(f) or _is_negated_projection(f)),
    FamilyName.I: FunctionFamily(
        FamilyName.I, "constants and projections", (_constants, _projections),
        lambda f: _is_constant(f) or _is_projection(f)),
    FamilyName.OMEGA1: FunctionFamily(
        FamilyName.OMEGA1, "constants, projections and negated projections",
        (_constants, _projections, _negated_projections),
        lambda f: _is_constant(f) or _is_projection(f) or _is_negated_projection(f)),
    FamilyName.L: FunctionFamily(
        FamilyName.L, "affine functions", (_affine,), is_affine),
    FamilyName.J: FunctionFamily(
        FamilyName.J, "projections", (_projections,), _is_projection),
    FamilyName.ALL: FunctionFamily(
        FamilyName.ALL, "all functions", (_all,), lambda f: True),
}

# Least family first; N and I only meet in C.
_CHAIN = (FamilyName.C, FamilyName.I, FamilyName.N, FamilyName.OMEGA1, FamilyName.L)


def get_family(name: str) -> FunctionFamily:
    if name in _ALIASES:
        return FAMILIES[_ALIASES[name]]
    try:
        return FAMILIES[FamilyName(name)]
    except ValueError:
        raise InputError(f"Unknown function family {name!r}")


def classify_function(f: TruthTable) -> str:
    """Name of the least family of C, N, I, Ω(1), L containing f, else OTHER."""
    for name in _CHAIN:
        if FAMILIES[name].contains(f):
            return name.value
    return OTHER


def classify_codes(arity: int, codes) -> dict:
    """Tally of classify_function over a collection of table codes, keyed by family name."""
    tally = {}
    for code in codes:
        label = classify_function(TruthTable(arity, int(code)))
        tally[label] = tally.get(label, 0) + 1
    return dict(sorted(tally.items()))

