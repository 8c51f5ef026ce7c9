"""
Analogical inference over Boolean functions: AP checks, error rates, distance to the
affine functions and label prediction from analogical triples.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel

from src.analogy.analogy import AnalogyModel, analogical_constraint
from src.boolfun.boolfun import TruthTable, full_mask, projection_code, serialize, table_bits
from src.classifier.dataset import Dataset
from src.galois.galois import Witness, preserves, selection_patterns
from src.relations.relations import Relation
from src.utils.config import load_settings
from src.utils.errors import CapabilityError, InputError, TieError

logger = logging.getLogger(__name__)

MAX_AFFINE_ARITY = 20
SAMPLE_CHUNK = 1 << 16
ERROR_EVENT = ("f(d) is not a solution of f(a):f(b)::f(c):x in dst, counted over selections "
               "with (a,b,c,d) in src componentwise and f(a):f(b)::f(c):x solvable in dst")

Quadruple = Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]


def columns_to_quadruple(columns: Sequence[Sequence[int]]) -> Quadruple:
    """Transpose n selected 4-tuples into the input vectors (a, b, c, d)."""
    return tuple(tuple(col[i] for col in columns) for i in range(4))


@dataclass(frozen=True)
class ApVerdict:
    holds: bool
    witness: Optional[Witness] = None

    @property
    def quadruple(self) -> Optional[Quadruple]:
        if self.witness is None:
            return None
        return columns_to_quadruple(self.witness.columns)


def ap_check(f: TruthTable, src: AnalogyModel, dst: AnalogyModel) -> ApVerdict:
    """Whether f is analogy-preserving from src to dst."""
    holds, witness = preserves(f, analogical_constraint(src, dst))
    return ApVerdict(holds, witness)


# Distance to the affine functions

def walsh_spectrum(f: TruthTable) -> np.ndarray:
    """W[u] = sum over x of (-1)^(f(x) + u.x), by the fast Walsh-Hadamard transform."""
    w = 1 - 2 * table_bits(f).astype(np.int64)
    h = 1
    while h < w.size:
        blocks = w.reshape(-1, 2, h)
        w = np.stack((blocks[:, 0, :] + blocks[:, 1, :], blocks[:, 0, :] - blocks[:, 1, :]), axis=1)
        w = w.reshape(-1)
        h <<= 1
    return w


def affine_function(arity: int, u: int, c: int) -> TruthTable:
    """The function x -> u.x + c."""
    code = full_mask(arity) if c else 0
    for i in range(arity):
        if (u >> i) & 1:
            code ^= projection_code(arity, i)
    return TruthTable(arity, code)


def nearest_affine(f: TruthTable) -> Tuple[TruthTable, int, float]:
    """An affine function closest to f in Hamming distance, the distance and its share of 2^n.

    Among equally close functions the least table code wins.
    """
    n = f.arity
    if n > MAX_AFFINE_ARITY:
        raise CapabilityError(f"Nearest affine search supports arity <= {MAX_AFFINE_ARITY}")
    w = walsh_spectrum(f)
    size = 1 << n
    best = int(np.abs(w).max())
    distance = (size - best) // 2
    # candidate (u, c): c = 0 where W[u] is +best, c = 1 where it is -best
    us = np.concatenate((np.flatnonzero(w == best), np.flatnonzero(w == -best))).astype(np.int64)
    cs = np.concatenate((np.zeros(np.count_nonzero(w == best), dtype=np.int64),
                         np.ones(np.count_nonzero(w == -best), dtype=np.int64)))
    # least code: compare from the highest point index down, preferring value 0
    x = size - 1
    while us.size > 1 and x >= 0:
        parity = np.zeros(us.size, dtype=np.int64)
        for b in range(n):
            parity ^= (us >> b) & (x >> b) & 1
        values = parity ^ cs
        if values.min() == 0 and values.max() == 1:
            keep = values == 0
            us, cs = us[keep], cs[keep]
        x -= 1
    g = affine_function(n, int(us[0]), int(cs[0]))
    return g, distance, distance / size


# Error rates

class ErrorReport(BaseModel):
    function: str
    src: str
    dst: str
    mode: str
    quadruples: int
    solvable: int
    violations: int
    rate: float
    rate_exact: str
    degenerate: bool
    seed: Optional[int] = None
    sample_size: Optional[int] = None
    witness: Optional[List[List[int]]] = None
    witness_image: Optional[List[int]] = None
    nearest_affine: str
    distance: int
    epsilon: float
    bound: float
    event: str = ERROR_EVENT

    def fraction(self) -> Fraction:
        return Fraction(self.rate_exact)


def _dst_tables(dst: Relation) -> Tuple[np.ndarray, np.ndarray]:
    """Per prefix code a + 2b + 4c: solvable, and per (prefix, d): is d a solution."""
    member = np.array([(dst.mask >> t) & 1 for t in range(16)], dtype=bool)
    is_solution = np.stack((member[:8], member[8:]), axis=1)
    return is_solution.any(axis=1), is_solution


def _count_events(values: np.ndarray, dst: Relation) -> Tuple[np.ndarray, np.ndarray]:
    """values[:, 0..3] = (f(a), f(b), f(c), f(d)) -> (solvable, error) flags."""
    solvable, is_solution = _dst_tables(dst)
    prefix = values[:, 0] + 2 * values[:, 1] + 4 * values[:, 2]
    ok = solvable[prefix]
    error = ok & ~is_solution[prefix, values[:, 3]]
    return ok, error


def _report(f, src, dst, mode, quadruples, n_solvable, n_errors, witness=None, image=None,
            seed=None, sample_size=None) -> ErrorReport:
    g, distance, epsilon = nearest_affine(f)
    rate = Fraction(n_errors, n_solvable) if n_solvable else Fraction(0)
    return ErrorReport(
        function=serialize(f), src=src.name, dst=dst.name, mode=mode,
        quadruples=quadruples, solvable=n_solvable, violations=n_errors,
        rate=float(rate), rate_exact=str(rate), degenerate=n_solvable == 0,
        seed=seed, sample_size=sample_size,
        witness=[list(v) for v in witness] if witness else None,
        witness_image=list(image) if image else None,
        nearest_affine=serialize(g), distance=distance, epsilon=epsilon, bound=4 * epsilon,
    )


def error_rate(f: TruthTable, src: AnalogyModel, dst: AnalogyModel, mode: str = "exact",
               seed: Optional[int] = None, samples: int = 10000) -> ErrorReport:
    """Share of erroneous analogical inferences made by f, exactly or on seeded samples."""
    if mode == "exact":
        return _exact_error_rate(f, src, dst)
    if mode == "sampled":
        if seed is None:
            raise InputError("Sampled error rates need a seed")
        return _sampled_error_rate(f, src, dst, seed, samples)
    raise InputError(f"Unknown error-rate mode {mode!r}")


def _exact_error_rate(f: TruthTable, src: AnalogyModel, dst: AnalogyModel) -> ErrorReport:
    cap = load_settings().max_arity
    if f.arity > cap:
        raise CapabilityError(f"Exact error rates support arity <= {cap}, got {f.arity}")
    patterns = selection_patterns(src.relation, f.arity)
    bits = table_bits(f).astype(np.int64)
    values = bits[patterns.patterns] if patterns.patterns.size else np.zeros((0, 4), dtype=np.int64)
    ok, error = _count_events(values, dst.relation)
    n_solvable = int(patterns.counts[ok].sum())
    n_errors = int(patterns.counts[error].sum())
    witness = image = None
    if n_errors:
        u = int(np.flatnonzero(error)[0])
        witness = columns_to_quadruple(patterns.selection(u))
        image = tuple(int(v) for v in values[u])
    logger.debug(f"Exact error rate of {serialize(f)} on {src.name}->{dst.name}: {n_errors}/{n_solvable}")
    return _report(f, src, dst, "exact", patterns.total, n_solvable, n_errors, witness, image)


def _sampled_error_rate(f: TruthTable, src: AnalogyModel, dst: AnalogyModel, seed: int,
                        samples: int) -> ErrorReport:
    if samples < 1:
        raise InputError("Sample size must be positive")
    columns = np.array(src.relation.codes(), dtype=np.int64)
    if columns.size == 0:
        return _report(f, src, dst, "sampled", 0, 0, 0, seed=seed, sample_size=samples)
    bits = table_bits(f).astype(np.int64)
    coords = (columns[:, None] >> np.arange(4, dtype=np.int64)[None, :]) & 1
    n = f.arity
    n_solvable = n_errors = 0
    witness = image = None
    chunks = (samples + SAMPLE_CHUNK - 1) // SAMPLE_CHUNK
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(chunks)):
        size = min(SAMPLE_CHUNK, samples - i * SAMPLE_CHUNK)
        rng = np.random.default_rng(child)
        picks = rng.integers(0, columns.size, size=(size, n))
        points = np.zeros((size, 4), dtype=np.int64)
        for j in range(n):
            points |= coords[picks[:, j]] << j
        values = bits[points]
        ok, error = _count_events(values, dst.relation)
        n_solvable += int(ok.sum())
        n_errors += int(error.sum())
        if witness is None and error.any():
            s = int(np.flatnonzero(error)[0])
            witness = columns_to_quadruple([tuple(int(v) for v in coords[k]) for k in picks[s]])
            image = tuple(int(v) for v in values[s])
    return _report(f, src, dst, "sampled", samples, n_solvable, n_errors, witness, image,
                   seed=seed, sample_size=samples)


# Prediction

class Prediction(BaseModel):
    query: List[int]
    outcome: str                # "label", "abstain" or "tie"
    label: Optional[int] = None
    strategy: str
    applicable_triples: int
    votes: Dict[str, int]
    provenance: Optional[List[int]] = None  # record indices of the deciding triple

    @property
    def abstained(self) -> bool:
        return self.outcome == "abstain"


class PredictionBatch(BaseModel):
    src: str
    dst: str
    strategy: str
    predictions: List[Prediction]


def _applicable_triples(known_x: np.ndarray, query: np.ndarray, src: Relation) -> np.ndarray:
    """(a, b, c) index triples, in scan order, with src holding on (a, b, c, query) componentwise."""
    member = np.array([(src.mask >> t) & 1 for t in range(16)], dtype=bool)
    k = known_x.shape[0]
    found = []
    for a in range(k):
        codes = (known_x[a][None, None, :] + 2 * known_x[:, None, :] + 4 * known_x[None, :, :]
                 + 8 * query[None, None, :])
        ok = member[codes].all(axis=2)
        for b, c in np.argwhere(ok):
            found.append((a, int(b), int(c)))
    return np.array(found, dtype=np.int64).reshape(len(found), 3)


def aip_predict(ds: Dataset, query: Sequence[int], src: AnalogyModel, dst: AnalogyModel,
                strategy: str = "majority", allow_known: bool = False) -> Prediction:
    """Infer the label of `query` by solving label equations over analogical triples."""
    if strategy not in ("first", "majority"):
        raise InputError(f"Unknown strategy {strategy!r}")
    query = tuple(query)
    if len(query) != ds.dimension:
        raise InputError(f"Query has {len(query)} attributes, dataset has {ds.dimension}")
    if any(v not in (0, 1) for v in query):
        raise InputError("Query entries must be bits")
    indices = [i for i, r in enumerate(ds.records) if r.known]
    if not allow_known and any(ds.records[i].x == query for i in indices):
        raise InputError(f"Query {query} is a known record; pass allow_known to re-predict it")

    known_x = np.array([ds.records[i].x for i in indices], dtype=np.int64).reshape(len(indices), ds.dimension)
    labels = np.array([ds.records[i].label for i in indices], dtype=np.int64)
    triples = _applicable_triples(known_x, np.array(query, dtype=np.int64), src.relation)
    solvable, is_solution = _dst_tables(dst.relation)
    if len(triples):
        prefix = labels[triples[:, 0]] + 2 * labels[triples[:, 1]] + 4 * labels[triples[:, 2]]
        usable = solvable[prefix]
        triples, prefix = triples[usable], prefix[usable]
    else:
        prefix = np.zeros(0, dtype=np.int64)

    base = dict(query=list(query), strategy=strategy, applicable_triples=len(triples))
    if len(triples) == 0:
        return Prediction(outcome="abstain", votes={}, **base)

    votes = Counter()
    for d in (0, 1):
        votes[d] = int(is_solution[prefix, d].sum())
    tally = {str(d): votes[d] for d in (0, 1) if votes[d]}
    deciding = [int(indices[i]) for i in triples[0]]

    if strategy == "first":
        label = 0 if is_solution[prefix[0], 0] else 1
        return Prediction(outcome="label", label=label, votes=tally, provenance=deciding, **base)

    if votes[0] == votes[1]:
        raise TieError(f"Majority vote tied {votes[0]}:{votes[1]} for query {query}",
                       votes=tally, applicable_triples=len(triples))
    label = 0 if votes[0] > votes[1] else 1
    first_for_label = int(np.flatnonzero(is_solution[prefix, label])[0])
    provenance = [int(indices[i]) for i in triples[first_for_label]]
    return Prediction(outcome="label", label=label, votes=tally, provenance=provenance, **base)


def predict_unknown(ds: Dataset, src: AnalogyModel, dst: AnalogyModel,
                    strategy: str = "majority") -> PredictionBatch:
    """Predictions for every record with an unknown label; ties are recorded, not raised."""
    predictions = []
    for record in ds.unknown_records():
        try:
            predictions.append(aip_predict(ds, record.x, src, dst, strategy))
        except TieError as e:
            logger.info(str(e))
            predictions.append(Prediction(query=list(record.x), outcome="tie", strategy=strategy,
                                          applicable_triples=e.applicable_triples, votes=e.votes))
    return PredictionBatch(src=src.name, dst=dst.name, strategy=strategy, predictions=predictions)


def write_report(report: Union[ErrorReport, PredictionBatch, Prediction, BaseModel]) -> str:
    return report.model_dump_json(indent=2)
