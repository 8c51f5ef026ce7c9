"""
Reproduction of the summary table: for every pair of builtin models (Ri, Rj), the
polymorphisms of (Ri, Rj') must coincide with one named function family.
"""
import logging
import sys
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel
from tqdm import tqdm

from src.analogy.analogy import AnalogyModel, analogical_constraint, builtin_models
from src.boolfun.boolfun import TruthTable, serialize
from src.boolfun.families import get_family
from src.database.database import ResultStore
from src.galois.galois import pol
from src.utils.errors import CapabilityError, InputError

logger = logging.getLogger(__name__)

MODEL_NAMES = ("R1", "R2", "R3", "R4", "R5")

# rows: source model, columns: target model
EXPECTED_ROWS: Dict[str, Tuple[str, ...]] = {
    "R1": ("Ω(1)", "C", "C", "C", "C"),
    "R2": ("Ω(1)", "I", "N", "C", "C"),
    "R3": ("Ω(1)", "N", "I", "C", "C"),
    "R4": ("L", "Ω(1)", "Ω(1)", "L", "L"),
    "R5": ("L", "C", "C", "L", "L"),
}

EXPECTED_TABLE: Dict[Tuple[str, str], str] = {
    (src, dst): family
    for src, row in EXPECTED_ROWS.items()
    for dst, family in zip(MODEL_NAMES, row)
}

MAX_TABLE_ARITY = 4


class WitnessModel(BaseModel):
    function: str
    columns: List[List[int]]
    image: List[int]


class CellVerdict(BaseModel):
    src: str
    dst: str
    expected: str
    counts: Dict[int, int]
    expected_counts: Dict[int, int]
    match: bool
    unexpected_members: Dict[int, List[str]] = {}
    missing_members: Dict[int, List[str]] = {}
    witnesses: List[WitnessModel] = []


class TableVerdict(BaseModel):
    max_arity: int
    cells: List[CellVerdict]
    passed: bool

    def cell(self, src: str, dst: str) -> CellVerdict:
        for c in self.cells:
            if c.src == src and c.dst == dst:
                return c
        raise InputError(f"No cell ({src}, {dst})")


def verify_cell(src: AnalogyModel, dst: AnalogyModel, max_arity: int,
                store: Optional[ResultStore] = None) -> CellVerdict:
    expected = EXPECTED_TABLE[(src.name, dst.name)]
    family = get_family(expected)
    constraint = analogical_constraint(src, dst)
    counts, expected_counts = {}, {}
    unexpected, missing, witnesses = {}, {}, []
    for n in range(1, max_arity + 1):
        result = pol([constraint], n, store=store, names=[f"({src.name},{dst.name}')"])
        wanted = family.codes(n)
        counts[n] = len(result)
        expected_counts[n] = len(wanted)
        extra = sorted(result.member_set - wanted)
        lacking = sorted(wanted - result.member_set)
        if extra:
            unexpected[n] = [serialize(TruthTable(n, c)) for c in extra]
        if lacking:
            missing[n] = [serialize(TruthTable(n, c)) for c in lacking]
            for code in lacking:
                f = TruthTable(n, code)
                w = result.witness(f)
                witnesses.append(WitnessModel(function=serialize(f), columns=[list(col) for col in w.columns],
                                              image=list(w.image)))
    match = not unexpected and not missing
    if not match:
        logger.warning(f"Cell ({src.name},{dst.name}) does not match {expected}")
    return CellVerdict(src=src.name, dst=dst.name, expected=expected, counts=counts,
                       expected_counts=expected_counts, match=match, unexpected_members=unexpected,
                       missing_members=missing, witnesses=witnesses)


def verify_table(max_arity: int, store: Optional[ResultStore] = None, progress: bool = False) -> TableVerdict:
    """Compare Pol(Ri, Rj') with the expected family for all 25 cells at arities 1..max_arity."""
    if max_arity < 1:
        raise InputError("max_arity must be at least 1")
    if max_arity > MAX_TABLE_ARITY:
        raise CapabilityError(f"Table verification supports arity <= {MAX_TABLE_ARITY}, got {max_arity}")
    models = {m.name: m for m in builtin_models()}
    pairs = [(s, d) for s in MODEL_NAMES for d in MODEL_NAMES]
    logger.info(f"Verifying {len(pairs)} cells up to arity {max_arity}")
    cells = [
        verify_cell(models[s], models[d], max_arity, store)
        for s, d in tqdm(pairs, desc="cells", file=sys.stderr, disable=not progress)
    ]
    verdict = TableVerdict(max_arity=max_arity, cells=cells, passed=all(c.match for c in cells))
    logger.info(f"Table verification {'passed' if verdict.passed else 'failed'}")
    return verdict


def format_table(verdict: TableVerdict) -> str:
    width = 8
    lines = ["src\\dst".ljust(width) + "".join(name.ljust(width) for name in MODEL_NAMES)]
    for s in MODEL_NAMES:
        row = s.ljust(width)
        for d in MODEL_NAMES:
            c = verdict.cell(s, d)
            row += (c.expected + ("" if c.match else "!")).ljust(width)
        lines.append(row)
    lines.append(f"arities 1..{verdict.max_arity}: {'PASS' if verdict.passed else 'FAIL'}")
    return "\n".join(lines)
