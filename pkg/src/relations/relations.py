"""
Finite relations over {0,1}.

A Relation of arity m is a bitmask over the 2^m tuple codes; the tuple
(t1, ..., tm) has code t1 + 2*t2 + ... + 2^(m-1)*tm.
"""
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, Sequence, Tuple

from src.utils.errors import InputError, ParseError

logger = logging.getLogger(__name__)

MAX_RELATION_ARITY = 8


def tuple_code(t: Sequence[int]) -> int:
    code = 0
    for i, bit in enumerate(t):
        if bit not in (0, 1):
            raise InputError(f"Coordinate {i} is not a bit: {bit!r}")
        code |= bit << i
    return code


def tuple_of(code: int, arity: int) -> Tuple[int, ...]:
    return tuple((code >> i) & 1 for i in range(arity))


@dataclass(frozen=True)
class Relation:
    arity: int
    mask: int

    def __post_init__(self):
        if isinstance(self.arity, bool) or not 1 <= self.arity <= MAX_RELATION_ARITY:
            raise InputError(f"Relation arity must be between 1 and {MAX_RELATION_ARITY}, got {self.arity}")
        if not 0 <= self.mask < 1 << (1 << self.arity):
            raise InputError(f"Mask {self.mask:#x} does not fit arity {self.arity}")

    @classmethod
    def from_tuples(cls, arity: int, tuples: Iterable[Sequence[int]]) -> "Relation":
        mask = 0
        for t in tuples:
            if len(t) != arity:
                raise InputError(f"Tuple {tuple(t)} does not have arity {arity}")
            mask |= 1 << tuple_code(t)
        return cls(arity, mask)

    @classmethod
    def full(cls, arity: int) -> "Relation":
        return cls(arity, (1 << (1 << arity)) - 1)

    @classmethod
    def empty(cls, arity: int) -> "Relation":
        return cls(arity, 0)

    def codes(self) -> Tuple[int, ...]:
        return tuple(c for c in range(1 << self.arity) if (self.mask >> c) & 1)

    def tuples(self) -> Tuple[Tuple[int, ...], ...]:
        """Member tuples in ascending code order."""
        return tuple(tuple_of(c, self.arity) for c in self.codes())

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        return iter(self.tuples())

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, t: Sequence[int]) -> bool:
        if len(t) != self.arity:
            return False
        return bool((self.mask >> tuple_code(t)) & 1)

    def issubset(self, other: "Relation") -> bool:
        _same_arity(self, other)
        return self.mask & ~other.mask == 0

    def __str__(self) -> str:
        return format_relation(self)


@dataclass(frozen=True)
class Constraint:
    """A relational constraint: antecedent tuples must map into the consequent."""
    antecedent: Relation
    consequent: Relation

    def __post_init__(self):
        if self.antecedent.arity != self.consequent.arity:
            raise InputError(
                f"Antecedent arity {self.antecedent.arity} differs from consequent arity {self.consequent.arity}"
            )

    @property
    def arity(self) -> int:
        return self.antecedent.arity

    @property
    def signature(self) -> str:
        return f"{self.arity}:{self.antecedent.mask:x}/{self.consequent.mask:x}"


def _same_arity(r: Relation, s: Relation):
    if r.arity != s.arity:
        raise InputError(f"Relations of arity {r.arity} and {s.arity} are not comparable")


def parse_relation(text: str) -> Relation:
    """Parse a 0/1 matrix whose columns are the tuples (rows separated by newlines or ';')."""
    lines = [line.strip() for line in text.replace(";", "\n").splitlines()]
    rows = [line.split() for line in lines if line]
    if not rows:
        raise ParseError("Relation matrix has no rows")
    if len(rows) > MAX_RELATION_ARITY:
        raise ParseError(f"Relation matrix has {len(rows)} rows, at most {MAX_RELATION_ARITY} supported")
    width = len(rows[0])
    for r, row in enumerate(rows, start=1):
        if len(row) != width:
            raise ParseError(f"Ragged matrix: expected {width} entries, got {len(row)}", row=r)
        for c, cell in enumerate(row, start=1):
            if cell not in ("0", "1"):
                raise ParseError(f"Matrix entry {cell!r} is not a bit", row=r, column=c)
    columns = [tuple(int(row[c]) for row in rows) for c in range(width)]
    return Relation.from_tuples(len(rows), columns)


def format_relation(r: Relation) -> str:
    """Matrix text with columns in ascending tuple-code order."""
    codes = r.codes()
    return "\n".join(" ".join(str((c >> i) & 1) for c in codes) for i in range(r.arity))


def negate_relation(r: Relation) -> Relation:
    flip = (1 << r.arity) - 1
    mask = 0
    for c in r.codes():
        mask |= 1 << (c ^ flip)
    return Relation(r.arity, mask)


def permute_coordinates(r: Relation, perm: Sequence[int]) -> Relation:
    """Reorder coordinates: coordinate i of each new tuple is coordinate perm[i] of the old one."""
    if sorted(perm) != list(range(r.arity)):
        raise InputError(f"{tuple(perm)} is not a permutation of {r.arity} coordinates")
    return Relation.from_tuples(r.arity, (tuple(t[p] for p in perm) for t in r.tuples()))


def _require_quaternary(s: Relation):
    if s.arity != 4:
        raise InputError(f"Expected a 4-ary relation, got arity {s.arity}")


def extend_consequent(s: Relation) -> Relation:
    """S together with every quadruple whose 3-prefix has no completion in S."""
    _require_quaternary(s)
    mask = s.mask
    for prefix in range(8):
        if not (s.mask >> prefix) & 1 and not (s.mask >> (prefix + 8)) & 1:
            mask |= (1 << prefix) | (1 << (prefix + 8))
    return Relation(4, mask)


def solutions(s: Relation, a: int, b: int, c: int) -> FrozenSet[int]:
    _require_quaternary(s)
    prefix = tuple_code((a, b, c))
    return frozenset(x for x in (0, 1) if (s.mask >> (prefix + 8 * x)) & 1)


def solvable(s: Relation, a: int, b: int, c: int) -> bool:
    return bool(solutions(s, a, b, c))


def is_relaxation(weaker: Constraint, stronger: Constraint) -> bool:
    """Whether `weaker` has a smaller antecedent and a larger consequent than `stronger`."""
    if weaker.arity != stronger.arity:
        return False
    return (weaker.antecedent.issubset(stronger.antecedent)
            and stronger.consequent.issubset(weaker.consequent))
