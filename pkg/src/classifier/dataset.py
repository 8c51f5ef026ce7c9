"""
Binary attribute datasets read from and written to CSV.

Header: attribute columns, then `label`. Attribute cells are `0`/`1`; a label of
`?` marks a record whose label is unknown.
"""
import io
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple, Union

import pandas as pd

from src.boolfun.boolfun import TruthTable, evaluate, point_of
from src.utils.errors import InputError, ParseError

logger = logging.getLogger(__name__)

LABEL_COLUMN = "label"
UNKNOWN = "?"


@dataclass(frozen=True)
class Record:
    x: Tuple[int, ...]
    label: Optional[int]

    @property
    def known(self) -> bool:
        return self.label is not None


@dataclass(frozen=True)
class Dataset:
    dimension: int
    records: Tuple[Record, ...]
    attributes: Tuple[str, ...] = ()

    def __post_init__(self):
        for i, record in enumerate(self.records):
            if len(record.x) != self.dimension:
                raise InputError(f"Record {i} has {len(record.x)} attributes, expected {self.dimension}")
        if not self.attributes:
            object.__setattr__(self, "attributes", tuple(f"x{j + 1}" for j in range(self.dimension)))

    def known_records(self) -> Tuple[Record, ...]:
        return tuple(r for r in self.records if r.known)

    def unknown_records(self) -> Tuple[Record, ...]:
        return tuple(r for r in self.records if not r.known)


def dataset_from_function(f: TruthTable, unknown: Iterable[Sequence[int]] = ()) -> Dataset:
    """Every point of f as a record, with the given points' labels hidden."""
    hidden = {tuple(p) for p in unknown}
    records = []
    for index in range(f.size):
        x = point_of(index, f.arity)
        records.append(Record(x, None if x in hidden else evaluate(f, x)))
    return Dataset(f.arity, tuple(records))


def load_dataset(text: str) -> Dataset:
    try:
        df = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise ParseError("Inconsistent number of columns", row=int(match.group(1)) if match else None) from e
    except pd.errors.EmptyDataError as e:
        raise ParseError("Dataset is empty") from e

    columns = [str(c).strip() for c in df.columns]
    if len(columns) < 2 or columns[-1] != LABEL_COLUMN:
        raise ParseError(f"Header must list attribute columns followed by '{LABEL_COLUMN}'", row=1)
    attributes = tuple(columns[:-1])
    records = []
    for i, row in enumerate(df.itertuples(index=False, name=None)):
        lineno = i + 2
        cells = [str(cell).strip() if isinstance(cell, str) else "" for cell in row]
        for j, cell in enumerate(cells[:-1]):
            if cell not in ("0", "1"):
                raise ParseError(f"Attribute value {cell!r} is not a bit", row=lineno, column=j + 1)
        label = cells[-1]
        if label not in ("0", "1", UNKNOWN):
            raise ParseError(f"Label {label!r} is not 0, 1 or {UNKNOWN}", row=lineno, column=len(cells))
        records.append(Record(tuple(int(c) for c in cells[:-1]),
                              None if label == UNKNOWN else int(label)))
    logger.debug(f"Loaded dataset with {len(records)} records over {len(attributes)} attributes")
    return Dataset(len(attributes), tuple(records), attributes)


def read_dataset(path: Union[str, Path]) -> Dataset:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Error reading dataset {path}: {str(e)}")
        raise InputError(f"Cannot read dataset {path}: {e.strerror}") from e
    return load_dataset(text)


def write_dataset(ds: Dataset) -> str:
    rows = [list(r.x) + [UNKNOWN if r.label is None else r.label] for r in ds.records]
    df = pd.DataFrame(rows, columns=list(ds.attributes) + [LABEL_COLUMN])
    return df.to_csv(index=False, lineterminator="\n")
