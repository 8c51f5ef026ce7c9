"""
Clone generation and the minion / clonoid stability checks, at bounded arity.

The m-ary part of the clone generated by F is the set of m-ary functions reachable
from the m projections by applying members of F pointwise, so each arity is
saturated independently and exactly.
"""
import logging
from dataclasses import dataclass
from math import prod
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.boolfun.boolfun import TruthTable, full_mask, minors, projection_code
from src.boolfun.families import FAMILIES, FamilyName, FunctionFamily
from src.utils.errors import CapabilityError

logger = logging.getLogger(__name__)

MAX_CLONE_ARITY = 4
MAX_CLONE_WORK = 1 << 31
_CHUNK = 1 << 20

FunctionSets = Mapping[int, Iterable[TruthTable]]
FamilyLike = Union[FunctionFamily, FunctionSets]
Codes = Union[int, np.ndarray]


def compose_codes(g: TruthTable, operands: Sequence[np.ndarray], arity: int) -> np.ndarray:
    """g applied to aligned arrays of m-ary table codes, one array per argument."""
    full = np.int64(full_mask(arity))
    shape = operands[0].shape if operands else ()
    result = np.zeros(shape, dtype=np.int64)
    for s in range(g.size):
        if not (g.code >> s) & 1:
            continue
        term = np.full(shape, full, dtype=np.int64)
        for j, op in enumerate(operands):
            term &= op if (s >> j) & 1 else ~op & full
        result |= term
    return result


def _tuples(pools: Sequence[np.ndarray]) -> Iterator[List[np.ndarray]]:
    """Cartesian product of the pools in row-major order, as aligned flat columns of at most _CHUNK rows."""
    shape = [len(p) for p in pools]
    total = prod(shape)
    for start in range(0, total, _CHUNK):
        index = np.unravel_index(np.arange(start, min(start + _CHUNK, total), dtype=np.int64), shape)
        yield [pool[i] for pool, i in zip(pools, index)]


# Post's five maximal clones, as predicates over table codes (ints or int64 arrays).

def _preserves_zero(arity: int, codes: Codes):
    return (codes & 1) == 0


def _preserves_one(arity: int, codes: Codes):
    return ((codes >> ((1 << arity) - 1)) & 1) == 1


def _is_monotone(arity: int, codes: Codes):
    ok = codes == codes
    for p in range(1 << arity):
        for j in range(arity):
            if not (p >> j) & 1:
                ok = ok & (((codes >> p) & 1) <= ((codes >> (p | 1 << j)) & 1))
    return ok


def _is_self_dual(arity: int, codes: Codes):
    size = 1 << arity
    ok = codes == codes
    for p in range(size):
        ok = ok & (((codes >> p) & 1) != ((codes >> (size - 1 - p)) & 1))
    return ok


def _is_affine(arity: int, codes: Codes):
    affine = FAMILIES[FamilyName.L].codes(arity)
    if isinstance(codes, np.ndarray):
        return np.isin(codes, np.fromiter(affine, dtype=np.int64))
    return codes in affine


_MAXIMAL_CLONES = (_preserves_zero, _preserves_one, _is_monotone, _is_self_dual, _is_affine)


def _ceiling(functions: Sequence[TruthTable], m: int) -> np.ndarray:
    """m-ary members of every maximal clone containing all of `functions`."""
    codes = np.arange(1 << (1 << m), dtype=np.int64)
    ceiling = np.ones(codes.size, dtype=bool)
    for member in _MAXIMAL_CLONES:
        if all(member(g.arity, g.code) for g in functions):
            ceiling &= member(m, codes)
    return ceiling


def _essential(g: TruthTable) -> TruthTable:
    """g restricted to the arguments it depends on."""
    keep = [
        i for i in range(g.arity)
        if any(((g.code >> p) & 1) != ((g.code >> (p ^ (1 << i))) & 1) for p in range(g.size))
    ]
    if len(keep) == g.arity:
        return g
    code = 0
    for q in range(1 << len(keep)):
        p = sum(((q >> t) & 1) << i for t, i in enumerate(keep))
        code |= ((g.code >> p) & 1) << q
    return TruthTable(len(keep), code)


def _saturate(functions: Sequence[TruthTable], m: int) -> np.ndarray:
    """m-ary part of the clone: generators are composed over every tuple of found functions.

    Found functions are taken as new arguments in discovery order, a batch at a time,
    against those already taken. The search stops early once it reaches the
    intersection of the maximal clones containing the generators, which bounds the clone.
    """
    size = 1 << (1 << m)
    target = int(_ceiling(functions, m).sum())
    seen = np.zeros(size, dtype=bool)
    found = np.zeros(size, dtype=np.int64)
    count = 0

    def add(codes: np.ndarray) -> None:
        nonlocal count
        new = np.unique(codes[~seen[codes]])
        seen[new] = True
        found[count:count + new.size] = new
        count += new.size

    reduced = {_essential(g) for g in functions}
    start = [projection_code(m, i) for i in range(m)]
    start += [full_mask(m) if g.code else 0 for g in reduced if g.arity == 0]
    add(np.array(start, dtype=np.int64))
    operations = sorted((g for g in reduced if g.arity > 0), key=lambda g: (g.arity, g.code))
    if not operations:
        return np.flatnonzero(seen)
    widest = max(g.arity for g in operations)

    done = 0
    work = 0
    while done < count < target:
        step = max(1, _CHUNK // max(1, count ** (widest - 1)))
        batch = found[done:min(count, done + step)].copy()
        done += batch.size
        taken = found[:done].copy()
        for g in operations:
            for p in range(g.arity):
                work += batch.size * taken.size ** (g.arity - 1)
                if work > MAX_CLONE_WORK:
                    raise CapabilityError(
                        f"Clone generation at arity {m} exceeds {MAX_CLONE_WORK} compositions "
                        f"after {count} functions"
                    )
                pools = [taken] * g.arity
                pools[p] = batch
                for columns in _tuples(pools):
                    add(compose_codes(g, columns, m))
                    if count == target:
                        return np.flatnonzero(seen)
    logger.debug(f"Arity {m} saturated with {count} functions after {work} compositions")
    return np.flatnonzero(seen)


def clone_generate(functions: Iterable[TruthTable], max_arity: int) -> Dict[int, FrozenSet[TruthTable]]:
    """Arity 1..max_arity parts of the clone generated by the given functions."""
    if not 1 <= max_arity <= MAX_CLONE_ARITY:
        raise CapabilityError(f"Clone generation supports arities 1..{MAX_CLONE_ARITY}, got {max_arity}")
    functions = tuple(functions)
    return {
        m: frozenset(TruthTable(m, int(c)) for c in _saturate(functions, m))
        for m in range(1, max_arity + 1)
    }


def _codes_by_arity(k: FamilyLike, max_arity: int) -> Dict[int, np.ndarray]:
    if isinstance(k, FunctionFamily):
        return {m: np.array(sorted(k.codes(m)), dtype=np.int64) for m in range(1, max_arity + 1)}
    return {
        m: np.array(sorted({f.code for f in k.get(m, ())}), dtype=np.int64)
        for m in range(1, max_arity + 1)
    }


def minion_violation(k: FunctionSets, max_arity: int) -> Optional[Tuple[TruthTable, TruthTable]]:
    """A pair (f, g) with f in K and its minor g outside K, or None."""
    sets = _codes_by_arity(k, max_arity)
    for n in range(1, max_arity + 1):
        for code in sets[n]:
            f = TruthTable(n, int(code))
            for t in range(1, max_arity + 1):
                members = set(sets[t].tolist())
                for g in sorted(minors(f, t), key=lambda h: h.code):
                    if g.code not in members:
                        return f, g
    return None


def is_minion_closed(k: FunctionSets, max_arity: int) -> bool:
    return minion_violation(k, max_arity) is None


@dataclass(frozen=True)
class ClonoidViolation:
    side: str                          # "right" (K C1) or "left" (C2 K)
    outer: TruthTable
    inner: Tuple[TruthTable, ...]
    result: TruthTable


def _first_outside(g: TruthTable, pools: Sequence[np.ndarray], m: int,
                   lookup: np.ndarray) -> Optional[Tuple[Tuple[int, ...], int]]:
    for columns in _tuples(pools):
        codes = compose_codes(g, columns, m)
        bad = np.flatnonzero(~lookup[codes])
        if bad.size:
            i = int(bad[0])
            return tuple(int(col[i]) for col in columns), int(codes[i])
    return None


def clonoid_violation(k: FunctionSets, c1: Optional[FamilyLike], c2: Optional[FamilyLike],
                      max_arity: int) -> Optional[ClonoidViolation]:
    """First failure of K C1 ⊆ K or C2 K ⊆ K at arities 1..max_arity; None skips a side."""
    if not 1 <= max_arity <= MAX_CLONE_ARITY:
        raise CapabilityError(f"Stability checks support arities 1..{MAX_CLONE_ARITY}, got {max_arity}")
    sets = _codes_by_arity(k, max_arity)
    lookups = {}
    for m, codes in sets.items():
        lookup = np.zeros(1 << (1 << m), dtype=bool)
        lookup[codes] = True
        lookups[m] = lookup

    if c1 is not None:
        right = _codes_by_arity(c1, max_arity)
        for n in range(1, max_arity + 1):
            for code in sets[n]:
                f = TruthTable(n, int(code))
                for m in range(1, max_arity + 1):
                    hit = _first_outside(f, [right[m]] * n, m, lookups[m])
                    if hit:
                        inner, result = hit
                        return ClonoidViolation("right", f, tuple(TruthTable(m, c) for c in inner),
                                                TruthTable(m, result))
    if c2 is not None:
        left = _codes_by_arity(c2, max_arity)
        for a in range(1, max_arity + 1):
            for code in left[a]:
                h = TruthTable(a, int(code))
                for m in range(1, max_arity + 1):
                    hit = _first_outside(h, [sets[m]] * a, m, lookups[m])
                    if hit:
                        inner, result = hit
                        return ClonoidViolation("left", h, tuple(TruthTable(m, c) for c in inner),
                                                TruthTable(m, result))
    return None


def is_clonoid_stable(k: FunctionSets, c1: Optional[FamilyLike], c2: Optional[FamilyLike],
                      max_arity: int) -> bool:
    return clonoid_violation(k, c1, c2, max_arity) is None
