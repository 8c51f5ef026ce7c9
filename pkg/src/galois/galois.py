"""
The preservation relation between Boolean functions and relational constraints,
and the two sides of its Galois connection at bounded arity.

A selection is a choice of n antecedent tuples (columns); applying an n-ary f
to it coordinatewise gives the image tuple, which must lie in the consequent.
Selections are reduced to their point-index patterns: coordinate i reads f at
the point formed by the i-th entries of the selected columns.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from src.boolfun.boolfun import TruthTable, evaluate, serialize, table_bits
from src.boolfun.families import classify_codes
from src.database.database import ResultStore
from src.galois import kernels
from src.relations.relations import Constraint, Relation, negate_relation
from src.utils.config import load_settings
from src.utils.errors import CapabilityError, InputError

logger = logging.getLogger(__name__)

MAX_SELECTIONS = 1 << 22
# relation masks must fit the int64 kernels
MAX_KERNEL_RELATION_ARITY = 4
MAX_KERNEL_FUNCTION_ARITY = 5


@dataclass(frozen=True, eq=False)
class SelectionPatterns:
    """Distinct point-index patterns of all n-column selections from a relation."""
    relation: Relation
    arity: int
    patterns: np.ndarray         # (U, m) point index per coordinate
    counts: np.ndarray           # (U,) selections sharing each pattern
    representatives: np.ndarray  # (U, n) column positions of one selection per pattern

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def selection(self, u: int) -> Tuple[Tuple[int, ...], ...]:
        columns = self.relation.tuples()
        return tuple(columns[k] for k in self.representatives[u])


@lru_cache(maxsize=256)
def selection_patterns(relation: Relation, n: int) -> SelectionPatterns:
    if n < 0:
        raise InputError("Function arity must be non-negative")
    codes = np.array(relation.codes(), dtype=np.int64)
    k, m = len(codes), relation.arity
    if k ** n > MAX_SELECTIONS:
        raise CapabilityError(f"{k}^{n} column selections exceed the cap of {MAX_SELECTIONS}")
    if k == 0 and n > 0:
        empty = np.zeros((0, m), dtype=np.int64)
        return SelectionPatterns(relation, n, empty, np.zeros(0, dtype=np.int64),
                                 np.zeros((0, n), dtype=np.int64))
    bits = (codes[:, None] >> np.arange(m, dtype=np.int64)[None, :]) & 1
    selections = np.array(list(product(range(k), repeat=n)), dtype=np.int64).reshape(k ** n, n)
    patterns = np.zeros((k ** n, m), dtype=np.int64)
    for j in range(n):
        patterns |= bits[selections[:, j], :] << j
    unique, first, counts = np.unique(patterns, axis=0, return_index=True, return_counts=True)
    return SelectionPatterns(relation, n, unique, counts.astype(np.int64), selections[first])


def _consequent_lookup(relation: Relation) -> np.ndarray:
    size = 1 << relation.arity
    return np.array([(relation.mask >> t) & 1 for t in range(size)], dtype=np.bool_)


def image_tuple(f: TruthTable, columns: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """f applied coordinatewise to the selected columns."""
    if len(columns) != f.arity:
        raise InputError(f"{f.arity}-ary function applied to {len(columns)} columns")
    m = len(columns[0]) if columns else None
    if m is None:
        raise InputError("Nullary functions need an explicit tuple arity")
    return tuple(evaluate(f, [col[i] for col in columns]) for i in range(m))


@dataclass(frozen=True)
class Witness:
    """A selection of antecedent columns whose image falls outside the consequent."""
    constraint: Constraint
    columns: Tuple[Tuple[int, ...], ...]
    image: Tuple[int, ...]


def check_witness(f: TruthTable, w: Witness) -> bool:
    """Independent re-check that `w` refutes f preserving its constraint."""
    if len(w.columns) != f.arity or any(col not in w.constraint.antecedent for col in w.columns):
        return False
    if f.arity == 0:
        image = tuple([f.code] * w.constraint.arity)
    else:
        image = image_tuple(f, w.columns)
    return image == w.image and image not in w.constraint.consequent


def _witness_at(f: TruthTable, c: Constraint, patterns: SelectionPatterns, u: int) -> Witness:
    image = tuple(int((f.code >> int(p)) & 1) for p in patterns.patterns[u])
    return Witness(c, patterns.selection(u), image)


def preserves(f: TruthTable, c: Constraint) -> Tuple[bool, Optional[Witness]]:
    """Whether f preserves c; on failure, the first violating selection in pattern order."""
    patterns = selection_patterns(c.antecedent, f.arity)
    if patterns.patterns.shape[0] == 0:
        return True, None
    bits = table_bits(f).astype(np.int64)
    weights = np.left_shift(1, np.arange(c.arity, dtype=np.int64))
    images = (bits[patterns.patterns] * weights).sum(axis=1)
    bad = np.flatnonzero(~_consequent_lookup(c.consequent)[images])
    if bad.size == 0:
        return True, None
    return False, _witness_at(f, c, patterns, int(bad[0]))


def preserves_relation(f: TruthTable, r: Relation) -> bool:
    return preserves(f, Constraint(r, r))[0]


def _check_arity(n: int):
    cap = load_settings().max_arity
    if not 0 <= n <= cap:
        raise CapabilityError(f"Function arity {n} is outside the enumeration cap 0..{cap}")


def pol_signature(constraints: Sequence[Constraint]) -> str:
    return "|".join(sorted({c.signature for c in constraints}))


@dataclass(frozen=True, eq=False)
class PolResult:
    """The n-ary polymorphisms of a constraint set, with a witness for every rejection."""
    constraints: Tuple[Constraint, ...]
    arity: int
    member_codes: Tuple[int, ...]
    _violations: Optional[Dict[int, np.ndarray]] = field(default=None, repr=False)

    @property
    def members(self) -> Tuple[TruthTable, ...]:
        return tuple(TruthTable(self.arity, c) for c in self.member_codes)

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.member_codes)

    @property
    def rejected_count(self) -> int:
        return (1 << (1 << self.arity)) - len(self.member_codes)

    def __contains__(self, f: TruthTable) -> bool:
        return f.arity == self.arity and f.code in self.member_set

    def __len__(self) -> int:
        return len(self.member_codes)

    def witness(self, f: TruthTable) -> Optional[Witness]:
        """A violating selection for a rejected f, None for members."""
        if f.arity != self.arity:
            raise InputError(f"Function of arity {f.arity} queried in an arity-{self.arity} result")
        for index, c in enumerate(self.constraints):
            if self._violations is not None:
                u = int(self._violations[index][f.code])
                if u >= 0:
                    return _witness_at(f, c, selection_patterns(c.antecedent, self.arity), u)
                continue
            ok, w = preserves(f, c)
            if not ok:
                return w
        return None


class PolReport(BaseModel):
    constraints: List[str]
    arity: int
    member_count: int
    members: List[str]
    families: Dict[str, int]


def pol(constraints: Iterable[Constraint], n: int, store: Optional[ResultStore] = None,
        names: Optional[Sequence[str]] = None) -> PolResult:
    """Exhaustive n-ary part of Pol of the constraint set."""
    constraints = tuple(constraints)
    if not constraints:
        raise InputError("pol needs at least one constraint")
    _check_arity(n)
    label = ", ".join(names) if names else pol_signature(constraints)
    signature = pol_signature(constraints)
    if store is not None:
        cached = store.get_members(signature, n)
        if cached is not None:
            return PolResult(constraints, n, tuple(cached))

    n_functions = 1 << (1 << n)
    kernels.configure_threads()
    logger.info(f"Enumerating {n_functions} functions of arity {n} against {label}")
    member = np.ones(n_functions, dtype=bool)
    violations = {}
    for index, c in enumerate(constraints):
        patterns = selection_patterns(c.antecedent, n)
        found = kernels.first_violations(n_functions, patterns.patterns, _consequent_lookup(c.consequent))
        violations[index] = found
        member &= found < 0
    codes = tuple(int(code) for code in np.flatnonzero(member))
    logger.info(f"Pol at arity {n} over {label}: {len(codes)} members")
    if store is not None:
        store.put_members(signature, n, codes)
    return PolResult(constraints, n, codes, violations)


def pol_report(result: PolResult, names: Optional[Sequence[str]] = None) -> PolReport:
    return PolReport(
        constraints=list(names) if names else [c.signature for c in result.constraints],
        arity=result.arity,
        member_count=len(result),
        members=[serialize(f) for f in result.members],
        families=classify_codes(result.arity, result.member_codes),
    )


def _relation_arrays(relations: Sequence[Relation]) -> Tuple[np.ndarray, np.ndarray]:
    for r in relations:
        if r.arity > MAX_KERNEL_RELATION_ARITY:
            raise CapabilityError(f"Relations of arity {r.arity} exceed the kernel limit {MAX_KERNEL_RELATION_ARITY}")
    masks = np.array([r.mask for r in relations], dtype=np.int64)
    arities = np.array([r.arity for r in relations], dtype=np.int64)
    return masks, arities


def pol_of_relations(relations: Iterable[Relation], n: int) -> Tuple[TruthTable, ...]:
    """n-ary functions preserving every relation R (read as the constraint (R, R))."""
    relations = tuple(relations)
    _check_arity(n)
    masks, arities = _relation_arrays(relations)
    kernels.configure_threads()
    flags = kernels.polymorphism_flags(1 << (1 << n), n, masks, arities)
    return tuple(TruthTable(n, int(code)) for code in np.flatnonzero(flags))


def inv(functions: Iterable[TruthTable], m: int) -> Tuple[Relation, ...]:
    """All m-ary relations preserved by every given function, by ascending mask."""
    functions = tuple(functions)
    cap = load_settings().max_inv_arity
    if not 1 <= m <= min(cap, MAX_KERNEL_RELATION_ARITY):
        raise CapabilityError(f"Relation arity {m} is outside the enumeration cap 1..{cap}")
    for f in functions:
        if f.arity > MAX_KERNEL_FUNCTION_ARITY:
            raise CapabilityError(f"Function arity {f.arity} exceeds the kernel limit {MAX_KERNEL_FUNCTION_ARITY}")
    masks = np.arange(1 << (1 << m), dtype=np.int64)
    codes = np.array([f.code for f in functions], dtype=np.int64)
    arities = np.array([f.arity for f in functions], dtype=np.int64)
    kernels.configure_threads()
    logger.info(f"Enumerating {len(masks)} relations of arity {m} against {len(functions)} functions")
    flags = kernels.invariant_masks(masks, m, codes, arities)
    return tuple(Relation(m, int(mask)) for mask in np.flatnonzero(flags))


def basic_members(c: Constraint) -> Dict[str, bool]:
    """Membership of 0, 1, id and ¬, decided by relation inclusions alone."""
    r, s = c.antecedent, c.consequent
    empty = r.mask == 0
    return {
        "0": empty or tuple([0] * c.arity) in s,
        "1": empty or tuple([1] * c.arity) in s,
        "id": r.issubset(s),
        "not": negate_relation(r).issubset(s),
    }


def constant_collapse(c: Constraint) -> bool:
    """True when Pol of c is exactly the constants at every arity.

    Requires both constants in and id and ¬ out, plus both constant tuples in the
    antecedent: then any non-constant polymorphism would yield id or ¬ by
    substituting constants and identifying arguments.
    """
    basic = basic_members(c)
    r = c.antecedent
    has_constant_tuples = tuple([0] * c.arity) in r and tuple([1] * c.arity) in r
    return (basic["0"] and basic["1"] and not basic["id"] and not basic["not"]
            and has_constant_tuples)
