"""
Compiled preservation kernels over integer-coded truth tables.

Function codes are int64 table codes (bit p = value at point index p); relation
masks are int64 bitmasks over tuple codes, so relations here have arity <= 5.
"""
import logging

import numba
import numpy as np
from numba import njit, prange

from src.utils.config import load_settings

logger = logging.getLogger(__name__)


def configure_threads() -> int:
    """Apply ANALOGY_WORKERS (0 = all available) to numba and return the thread count."""
    workers = load_settings().workers
    available = numba.config.NUMBA_NUM_THREADS
    threads = available if workers == 0 else min(workers, available)
    numba.set_num_threads(threads)
    logger.debug(f"Using {threads} numba threads")
    return threads


@njit(parallel=True, cache=True)
def first_violations(n_functions, patterns, consequent):
    """Index of the first pattern each function code maps outside `consequent`, or -1.

    patterns[u, i] is the point index read at coordinate i by selection pattern u;
    consequent[t] tells whether tuple code t is allowed.
    """
    out = np.full(n_functions, -1, dtype=np.int64)
    n_patterns, m = patterns.shape
    for code in prange(n_functions):
        for u in range(n_patterns):
            image = 0
            for i in range(m):
                image |= ((code >> patterns[u, i]) & 1) << i
            if not consequent[image]:
                out[code] = u
                break
    return out


@njit(cache=True)
def _relation_preserved(mask, m, code, n):
    size = 1 << m
    members = np.empty(size, dtype=np.int64)
    k = 0
    for t in range(size):
        if (mask >> t) & 1:
            members[k] = t
            k += 1
    if k == 0:
        # a nullary function still has its one empty selection
        return n > 0
    # odometer over all n-column selections
    idx = np.zeros(n, dtype=np.int64)
    preserved = True
    running = True
    while running:
        image = 0
        for i in range(m):
            p = 0
            for j in range(n):
                p |= ((members[idx[j]] >> i) & 1) << j
            image |= ((code >> p) & 1) << i
        if not (mask >> image) & 1:
            preserved = False
            running = False
            continue
        j = 0
        while j < n:
            idx[j] += 1
            if idx[j] < k:
                break
            idx[j] = 0
            j += 1
        if j == n:
            running = False
    return preserved


@njit(parallel=True, cache=True)
def invariant_masks(masks, m, codes, arities):
    """For each m-ary relation mask, whether every function (codes[f], arities[f]) preserves it."""
    out = np.ones(masks.shape[0], dtype=np.bool_)
    for r in prange(masks.shape[0]):
        for f in range(codes.shape[0]):
            if not _relation_preserved(masks[r], m, codes[f], arities[f]):
                out[r] = False
                break
    return out


@njit(parallel=True, cache=True)
def polymorphism_flags(n_functions, n, masks, arities):
    """For each n-ary function code, whether it preserves every relation (masks[r], arities[r])."""
    out = np.ones(n_functions, dtype=np.bool_)
    for code in prange(n_functions):
        for r in range(masks.shape[0]):
            if not _relation_preserved(masks[r], arities[r], code, n):
                out[code] = False
                break
    return out
