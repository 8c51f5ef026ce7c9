"""
Boolean functions as integer-coded truth tables.

A TruthTable of arity n keeps its 2^n values in the bits of `code`: bit i is the
value at the point whose j-th coordinate is bit j of i (coordinate 1 is the least
significant bit). ANF coefficients use the same layout: bit m is the coefficient of
the monomial whose variables are the set bits of m.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, FrozenSet, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from src.utils.errors import CapabilityError, InputError, ParseError

logger = logging.getLogger(__name__)

MAX_EVAL_ARITY = 24
# int64 codes hold tables of arity <= 5
MAX_BATCH_ARITY = 5
MAX_MINOR_MAPS = 1 << 20
_BATCH_CELLS = 1 << 22


@lru_cache(maxsize=None)
def full_mask(arity: int) -> int:
    return (1 << (1 << arity)) - 1


@lru_cache(maxsize=None)
def projection_code(arity: int, i: int) -> int:
    """Table code of the i-th (0-based) projection of the given arity."""
    half = 1 << i
    code = ((1 << half) - 1) << half
    length = half << 1
    size = 1 << arity
    while length < size:
        code |= code << length
        length <<= 1
    return code


@dataclass(frozen=True)
class TruthTable:
    arity: int
    code: int

    def __post_init__(self):
        if isinstance(self.arity, bool) or not 0 <= self.arity <= MAX_EVAL_ARITY:
            raise InputError(f"Arity must be between 0 and {MAX_EVAL_ARITY}, got {self.arity}")
        if not 0 <= self.code <= full_mask(self.arity):
            raise InputError(f"Table code {self.code} does not fit arity {self.arity}")

    @property
    def size(self) -> int:
        return 1 << self.arity

    @property
    def table(self) -> Tuple[int, ...]:
        return tuple((self.code >> i) & 1 for i in range(self.size))

    def __call__(self, *point: int) -> int:
        return evaluate(self, point)

    def __str__(self) -> str:
        return serialize(self)

    @classmethod
    def from_table(cls, bits: Sequence[int]) -> "TruthTable":
        size = len(bits)
        arity = size.bit_length() - 1
        if size == 0 or 1 << arity != size:
            raise InputError(f"Table length {size} is not a power of two")
        code = 0
        for i, bit in enumerate(bits):
            if bit not in (0, 1):
                raise InputError(f"Table entry {i} is not a bit: {bit!r}")
            code |= bit << i
        return cls(arity, code)

    @classmethod
    def from_callable(cls, arity: int, fn: Callable[..., int]) -> "TruthTable":
        code = 0
        for index in range(1 << arity):
            if fn(*point_of(index, arity)) & 1:
                code |= 1 << index
        return cls(arity, code)

    @classmethod
    def constant(cls, arity: int, value: int) -> "TruthTable":
        return cls(arity, full_mask(arity) if value else 0)

    @classmethod
    def projection(cls, arity: int, i: int) -> "TruthTable":
        if not 0 <= i < arity:
            raise InputError(f"No argument {i} in arity {arity}")
        return cls(arity, projection_code(arity, i))


def sort_key(f: TruthTable) -> Tuple[int, int]:
    return (f.arity, f.code)


def point_of(index: int, arity: int) -> Tuple[int, ...]:
    return tuple((index >> j) & 1 for j in range(arity))


def point_index(point: Sequence[int]) -> int:
    index = 0
    for j, bit in enumerate(point):
        if bit not in (0, 1):
            raise InputError(f"Coordinate {j} is not a bit: {bit!r}")
        index |= bit << j
    return index


def evaluate(f: TruthTable, point: Sequence[int]) -> int:
    if len(point) != f.arity:
        raise InputError(f"Point of length {len(point)} given to a function of arity {f.arity}")
    return (f.code >> point_index(point)) & 1


def table_bits(f: TruthTable) -> np.ndarray:
    """Table entries as a uint8 array of length 2^arity."""
    nbytes = max(1, (f.size + 7) // 8)
    raw = np.frombuffer(f.code.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:f.size]


def serialize(f: TruthTable) -> str:
    digits = max(1, f.size // 4)
    return f"{f.arity}:{f.code:0{digits}x}"


def deserialize(text: str) -> TruthTable:
    """Parse the `arity:hexdigits` form, e.g. `2:8` for conjunction."""
    parts = text.strip().split(":")
    if len(parts) != 2 or not (parts[0].isascii() and parts[0].isdigit()) or not parts[1]:
        raise ParseError(f"Expected 'arity:hexdigits', got {text!r}")
    arity = int(parts[0])
    try:
        code = int(parts[1], 16)
    except ValueError:
        raise ParseError(f"Invalid hex digits in {text!r}")
    if arity > MAX_EVAL_ARITY or code > full_mask(arity):
        raise ParseError(f"Table {text!r} does not fit arity {arity}")
    return TruthTable(arity, code)


# Algebraic normal form

@dataclass(frozen=True)
class AnfPolynomial:
    arity: int
    coefficients: int

    def __post_init__(self):
        if not 0 <= self.coefficients <= full_mask(self.arity):
            raise InputError(f"Coefficients {self.coefficients} do not fit arity {self.arity}")

    def monomials(self) -> Tuple[Tuple[int, ...], ...]:
        """Variable index sets (0-based) of the monomials present, by ascending mask."""
        return tuple(
            tuple(j for j in range(self.arity) if (m >> j) & 1)
            for m in range(1 << self.arity)
            if (self.coefficients >> m) & 1
        )

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.monomials()), default=0)

    def __str__(self) -> str:
        terms = ["".join(f"x{j + 1}" for j in m) or "1" for m in self.monomials()]
        return " + ".join(terms) if terms else "0"


def _mobius(code: int, arity: int) -> int:
    full = full_mask(arity)
    for i in range(arity):
        low = full ^ projection_code(arity, i)
        code ^= (code & low) << (1 << i)
    return code


def anf(f: TruthTable) -> AnfPolynomial:
    return AnfPolynomial(f.arity, _mobius(f.code, f.arity))


def anf_inverse(p: AnfPolynomial) -> TruthTable:
    return TruthTable(p.arity, _mobius(p.coefficients, p.arity))


def degree(f: TruthTable) -> int:
    return anf(f).degree


def is_affine(f: TruthTable) -> bool:
    return degree(f) <= 1


# Negations

def outer_negation(f: TruthTable) -> TruthTable:
    return TruthTable(f.arity, f.code ^ full_mask(f.arity))


def inner_negation(f: TruthTable) -> TruthTable:
    code = f.code
    full = full_mask(f.arity)
    for i in range(f.arity):
        high = projection_code(f.arity, i)
        shift = 1 << i
        code = ((code & high) >> shift) | ((code & (full ^ high)) << shift)
    return TruthTable(f.arity, code)


def dual(f: TruthTable) -> TruthTable:
    return outer_negation(inner_negation(f))


# Composition and minors

class Const(Enum):
    ZERO = 0
    ONE = 1


Assignment = Union[int, Const]


@dataclass(frozen=True)
class MinorMap:
    """Substitution for the arguments of a function: a target argument or a constant."""
    target_arity: int
    assignment: Tuple[Assignment, ...]

    def __post_init__(self):
        for pos, value in enumerate(self.assignment):
            if isinstance(value, Const):
                continue
            if isinstance(value, bool) or not isinstance(value, int):
                raise InputError(f"Assignment {pos} must be an argument index or a Const, got {value!r}")
            if not 0 <= value < self.target_arity:
                raise InputError(f"Assignment {pos} refers to argument {value} of a {self.target_arity}-ary target")

    @property
    def source_arity(self) -> int:
        return len(self.assignment)

    @property
    def is_pure(self) -> bool:
        return not any(isinstance(value, Const) for value in self.assignment)


def compose(g: TruthTable, inner: Sequence[TruthTable], arity: Optional[int] = None) -> TruthTable:
    """g(h1, ..., hn) for n inner functions of a common arity."""
    if len(inner) != g.arity:
        raise InputError(f"{g.arity}-ary function composed with {len(inner)} functions")
    arities = {h.arity for h in inner}
    if arity is None:
        if len(arities) != 1:
            raise InputError("Inner functions must share one arity")
        arity = arities.pop()
    elif arities - {arity}:
        raise InputError(f"Inner functions must all have arity {arity}")
    full = full_mask(arity)
    result = 0
    for s in range(g.size):
        if not (g.code >> s) & 1:
            continue
        term = full
        for j, h in enumerate(inner):
            term &= h.code if (s >> j) & 1 else full ^ h.code
            if not term:
                break
        result |= term
    return TruthTable(arity, result)


def apply_minor(g: TruthTable, m: MinorMap) -> TruthTable:
    if m.source_arity != g.arity:
        raise InputError(f"Minor map for arity {m.source_arity} applied to a {g.arity}-ary function")
    t = m.target_arity
    inner = [
        TruthTable.constant(t, value.value) if isinstance(value, Const) else TruthTable.projection(t, value)
        for value in m.assignment
    ]
    return compose(g, inner, arity=t)


@lru_cache(maxsize=64)
def _minor_index_rows(source_arity: int, target_arity: int, with_constants: bool) -> Tuple[np.ndarray, np.ndarray]:
    """All minor maps as choice rows, and the source point index each target point reads.

    A choice value k < target_arity means "target argument k"; target_arity and
    target_arity + 1 stand for the constants 0 and 1.
    """
    t = target_arity
    options = t + 2 if with_constants else t
    count = options ** source_arity
    if count > MAX_MINOR_MAPS:
        raise CapabilityError(f"{count} minor maps from arity {source_arity} to {t} exceed the cap")
    choices = np.array(list(product(range(options), repeat=source_arity)), dtype=np.int64)
    choices = choices.reshape(count, source_arity)
    points = np.arange(1 << t, dtype=np.int64)
    index = np.zeros((count, 1 << t), dtype=np.int64)
    for j in range(source_arity):
        column = choices[:, j][:, None]
        shift = np.where(column < t, column, 0)
        value = np.where(column < t, (points[None, :] >> shift) & 1, column - t)
        index |= value << j
    return choices, index


def _choice_to_map(choice: np.ndarray, target_arity: int) -> MinorMap:
    t = target_arity
    return MinorMap(t, tuple(int(c) if c < t else Const(int(c) - t) for c in choice))


def _image_codes(f: TruthTable, target_arity: int, with_constants: bool) -> Tuple[np.ndarray, np.ndarray]:
    if target_arity > MAX_BATCH_ARITY:
        raise CapabilityError(f"Minor enumeration supports target arity <= {MAX_BATCH_ARITY}")
    choices, index = _minor_index_rows(f.arity, target_arity, with_constants)
    values = table_bits(f)[index].astype(np.int64)
    weights = np.left_shift(1, np.arange(1 << target_arity, dtype=np.int64))
    return choices, (values * weights).sum(axis=1)


def minors(g: TruthTable, target_arity: int) -> FrozenSet[TruthTable]:
    """All functions f <= g of the target arity (variable substitutions only)."""
    _, codes = _image_codes(g, target_arity, with_constants=False)
    return frozenset(TruthTable(target_arity, int(c)) for c in np.unique(codes))


def i_minors(g: TruthTable, target_arity: int) -> FrozenSet[TruthTable]:
    """All I-minors of g: substitutions mixing argument reuse with the constants 0 and 1."""
    if target_arity < 0:
        raise InputError("Target arity must be non-negative")
    _, codes = _image_codes(g, target_arity, with_constants=True)
    return frozenset(TruthTable(target_arity, int(c)) for c in np.unique(codes))


def find_minor_map(g: TruthTable, f: TruthTable, with_constants: bool = False) -> Optional[MinorMap]:
    """A map taking g to f, or None. The first map in enumeration order is returned."""
    choices, codes = _image_codes(g, f.arity, with_constants)
    hits = np.flatnonzero(codes == f.code)
    if hits.size == 0:
        return None
    return _choice_to_map(choices[hits[0]], f.arity)


def is_minor(f: TruthTable, g: TruthTable) -> bool:
    return find_minor_map(g, f) is not None


def minor_equivalent(f: TruthTable, g: TruthTable) -> bool:
    return is_minor(f, g) and is_minor(g, f)


def has_i_minor_in(codes: np.ndarray, arity: int, targets: Iterable[TruthTable]) -> np.ndarray:
    """For each table code of the given arity, whether one of its I-minors is in targets."""
    targets = list(targets)
    if not targets:
        return np.zeros(len(codes), dtype=bool)
    target_arity = targets[0].arity
    if any(t.arity != target_arity for t in targets):
        raise InputError("Targets must share one arity")
    if arity > MAX_BATCH_ARITY or target_arity > MAX_BATCH_ARITY:
        raise CapabilityError(f"Batched minor search supports arity <= {MAX_BATCH_ARITY}")
    lookup = np.zeros(1 << (1 << target_arity), dtype=bool)
    lookup[[t.code for t in targets]] = True
    _, index = _minor_index_rows(arity, target_arity, True)
    weights = np.left_shift(1, np.arange(1 << target_arity, dtype=np.int64))
    codes = np.asarray(codes, dtype=np.int64)
    chunk = max(1, _BATCH_CELLS // index.size)
    found = np.empty(len(codes), dtype=bool)
    for start in range(0, len(codes), chunk):
        block = codes[start:start + chunk]
        values = (block[:, None, None] >> index[None, :, :]) & 1
        images = (values * weights).sum(axis=2)
        found[start:start + chunk] = lookup[images].any(axis=1)
    return found


def nonaffine_reduction(f: TruthTable) -> Tuple[MinorMap, TruthTable]:
    """Binary non-affine I-minor of a non-affine function.

    A monomial of least degree >= 2 keeps its first two variables as the two
    target arguments; its other variables become 1 and every remaining variable 0.
    """
    p = anf(f)
    candidates = [m for m in p.monomials() if len(m) >= 2]
    if not candidates:
        raise InputError(f"{serialize(f)} is affine")
    monomial = min(candidates, key=lambda m: (len(m), sum(1 << j for j in m)))
    first, second = monomial[0], monomial[1]
    assignment = []
    for j in range(f.arity):
        if j == first:
            assignment.append(0)
        elif j == second:
            assignment.append(1)
        elif j in monomial:
            assignment.append(Const.ONE)
        else:
            assignment.append(Const.ZERO)
    m = MinorMap(2, tuple(assignment))
    return m, apply_minor(f, m)


# Named functions

NAMED_FUNCTIONS: Dict[str, TruthTable] = {
    "0": TruthTable(1, 0b00),
    "1": TruthTable(1, 0b11),
    "id": TruthTable(1, 0b10),
    "not": TruthTable(1, 0b01),
    "and": TruthTable(2, 0x8),
    "or": TruthTable(2, 0xE),
    "nand": TruthTable(2, 0x7),
    "nor": TruthTable(2, 0x1),
    "imp": TruthTable(2, 0xD),
    "nimp": TruthTable(2, 0x2),
    "xor": TruthTable(2, 0x6),
    "iff": TruthTable(2, 0x9),
    "xor3": TruthTable(3, 0x96),
    "median": TruthTable(3, 0xE8),
}


def named(name: str) -> TruthTable:
    try:
        return NAMED_FUNCTIONS[name]
    except KeyError:
        raise InputError(f"Unknown function name {name!r}")


def parse_function(text: str) -> TruthTable:
    """A catalogue name or an `arity:hex` table."""
    if text in NAMED_FUNCTIONS:
        return NAMED_FUNCTIONS[text]
    return deserialize(text)
