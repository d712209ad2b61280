"""Raw regression datasets and csv loading."""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd

from smcselect.parser.errors import DataLoadError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RawDataset:
    """Response vector and covariate columns before expansion."""

    response_name: str
    y: np.ndarray
    names: Tuple[str, ...]
    X: np.ndarray

    def __post_init__(self) -> None:
        y = np.asarray(self.y, dtype=float).ravel()
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if y.shape[0] < 2:
            raise ValueError(f"Need at least 2 observations, got {y.shape[0]}")
        if X.shape != (y.shape[0], len(self.names)):
            raise ValueError(
                f"Covariate matrix has shape {X.shape}, expected ({y.shape[0]}, {len(self.names)})"
            )
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(X))):
            raise ValueError("Dataset contains missing or non-finite values")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "names", tuple(self.names))

    @property
    def m(self) -> int:
        return int(self.y.shape[0])

    @property
    def p(self) -> int:
        return len(self.names)

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.names.index(name)]

    def with_log_response(self) -> "RawDataset":
        """Same covariates, response replaced by its logarithm."""
        if np.any(self.y <= 0):
            raise ValueError(f"Response '{self.response_name}' is not strictly positive")
        return RawDataset(f"lg_{self.response_name}", np.log(self.y), self.names, self.X)

    def select(self, names: Tuple[str, ...]) -> "RawDataset":
        """Covariate subset in the given order."""
        idx = [self.names.index(n) for n in names]
        return RawDataset(self.response_name, self.y, tuple(names), self.X[:, idx])


def load_csv(path: Union[str, Path], response: str) -> RawDataset:
    """
    Load a comma separated numeric table with a header row.

    The response column is extracted, every other column becomes a
    covariate in file order.

    Raises:
        DataLoadError: missing file, malformed table, non-numeric or missing
            cell (named by row and column), absent response column.
    """
    path = Path(path)
    if not path.exists():
        raise DataLoadError(f"File not found: {path}")

    try:
        table = pd.read_csv(
            path,
            sep=",",
            header=None,
            quoting=csv.QUOTE_NONE,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError:
        raise DataLoadError("File is empty", path)
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataLoadError(f"Malformed csv: {e}", path)

    names = [str(n).strip() for n in table.iloc[0]]
    seen = set()
    for name in names:
        if not name:
            raise DataLoadError("Empty column name in header", path)
        if name in seen:
            raise DataLoadError(f"Duplicate column name '{name}'", path)
        seen.add(name)
    if response not in names:
        raise DataLoadError(
            f"Response column '{response}' not found (columns: {', '.join(names)})", path
        )

    body = table.iloc[1:].reset_index(drop=True)
    body.columns = names
    values = body.apply(lambda col: pd.to_numeric(col.str.strip(), errors="coerce"))
    numeric = values.to_numpy(dtype=float)
    bad = ~np.isfinite(numeric)
    if bad.any():
        r, c = np.argwhere(bad)[0]
        cell = body.iat[r, c]
        what = "Missing value" if not isinstance(cell, str) or not cell.strip() else (
            f"Non-numeric value '{cell.strip()}'"
        )
        raise DataLoadError(what, path, row=int(r) + 1, column=names[c])
    if numeric.shape[0] < 2:
        raise DataLoadError(f"Need at least 2 data rows, found {numeric.shape[0]}", path)

    covariates = tuple(n for n in names if n != response)
    j = names.index(response)
    X = np.delete(numeric, j, axis=1)
    logger.debug("Loaded %s: m=%d, p=%d", path.name, numeric.shape[0], len(covariates))
    return RawDataset(response, numeric[:, j], covariates, X)
