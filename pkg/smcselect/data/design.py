"""
Expanded design matrices.

``expand_design`` turns raw covariates into the candidate predictors of a
variable-selection problem and records where every column came from, so
that main-effect restrictions can be imposed on interaction columns.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from smcselect.model.expansion import ExpansionSpec

from .dataset import RawDataset

logger = logging.getLogger(__name__)


class DesignError(ValueError):
    """Invalid expansion for the given dataset."""


class ColumnKind(str, Enum):
    CONSTANT = "constant"
    MAIN = "main"
    SQUARE = "square"
    LOG = "log"
    INTERACTION = "interaction"


@dataclass(frozen=True)
class Column:
    """Descriptor of one predictor; ``parents`` index columns of the same design."""

    name: str
    kind: ColumnKind
    parents: Tuple[int, ...] = ()


@dataclass
class DesignMatrix:
    """Observations ``y`` and predictors ``Z`` with column provenance."""

    y: np.ndarray
    Z: np.ndarray
    columns: List[Column]
    dropped: List[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.y = np.asarray(self.y, dtype=float).ravel()
        self.Z = np.asarray(self.Z, dtype=float)
        if self.Z.ndim != 2 or self.Z.shape[0] != self.y.shape[0]:
            raise DesignError(f"Z has shape {self.Z.shape}, expected ({self.y.shape[0]}, d)")
        if self.Z.shape[1] != len(self.columns):
            raise DesignError(
                f"{self.Z.shape[1]} columns but {len(self.columns)} descriptors"
            )
        for k, col in enumerate(self.columns):
            if col.kind == ColumnKind.INTERACTION:
                if len(col.parents) != 2 or not all(0 <= p < k for p in col.parents):
                    raise DesignError(f"Interaction '{col.name}' has invalid parents {col.parents}")

    @property
    def m(self) -> int:
        return int(self.y.shape[0])

    @property
    def d(self) -> int:
        return int(self.Z.shape[1])

    @property
    def names(self) -> List[str]:
        return [c.name for c in self.columns]

    @property
    def constant_index(self) -> Optional[int]:
        for k, col in enumerate(self.columns):
            if col.kind == ColumnKind.CONSTANT:
                return k
        return None

    @property
    def interactions(self) -> Dict[int, Tuple[int, int]]:
        """Interaction column index -> its two parent column indices."""
        out: Dict[int, Tuple[int, int]] = {}
        for k, col in enumerate(self.columns):
            if col.kind == ColumnKind.INTERACTION:
                i, j = col.parents
                out[k] = (i, j)
        return out

    def constraint_triples(self) -> List[Tuple[int, int, int]]:
        """``(i, j, k)`` for every interaction k of non-constant parents i, j."""
        const = self.constant_index
        return [
            (i, j, k)
            for k, (i, j) in self.interactions.items()
            if i != const and j != const
        ]

    @classmethod
    def from_raw(cls, raw: RawDataset) -> "DesignMatrix":
        """Use the covariates unchanged, one main effect each."""
        columns = [Column(name, ColumnKind.MAIN) for name in raw.names]
        return cls(raw.y, raw.X, columns)


def expand_design(raw: RawDataset, spec: ExpansionSpec) -> DesignMatrix:
    """
    Build the candidate predictors described by ``spec``.

    Columns come out as constant, mains, squares, logs, interactions.
    Interactions cover every pair of mains and log columns, in the order of
    that combined list. With ``drop_degenerate`` all-zero columns and exact
    duplicates (after the first occurrence) are removed; interaction parents
    pointing at a removed duplicate are redirected to the kept copy.

    Raises:
        DesignError: unknown or repeated names, log of a non-positive column.
    """
    if len(set(raw.names)) != len(raw.names):
        raise DesignError(f"Duplicate covariate names in {list(raw.names)}")
    for name in list(spec.square_exclude) + list(spec.add_logs):
        if name not in raw.names:
            raise DesignError(f"Unknown covariate '{name}' in expansion")

    names: List[str] = []
    kinds: List[ColumnKind] = []
    parents: List[Tuple[int, ...]] = []
    data: List[np.ndarray] = []

    def add(name: str, kind: ColumnKind, values: np.ndarray, src: Tuple[int, ...] = ()) -> int:
        names.append(name)
        kinds.append(kind)
        parents.append(src)
        data.append(values)
        return len(names) - 1

    if spec.add_constant:
        add("const", ColumnKind.CONSTANT, np.ones(raw.m))

    base: List[int] = []
    for j, name in enumerate(raw.names):
        base.append(add(name, ColumnKind.MAIN, raw.X[:, j]))
    mains = list(base)

    if spec.add_squares:
        for j, name in enumerate(raw.names):
            if name not in spec.square_exclude:
                add(f"{name}^2", ColumnKind.SQUARE, raw.X[:, j] ** 2, (mains[j],))

    for name in spec.add_logs:
        col = raw.column(name)
        if np.any(col <= 0):
            raise DesignError(f"Cannot take the logarithm of non-positive column '{name}'")
        base.append(add(f"lg_{name}", ColumnKind.LOG, np.log(col), (mains[raw.names.index(name)],)))

    if spec.add_interactions:
        for a, b in combinations(base, 2):
            add("*".join(sorted((names[a], names[b]))), ColumnKind.INTERACTION, data[a] * data[b], (a, b))

    if len(set(names)) != len(names):
        repeated = sorted({n for n in names if names.count(n) > 1})
        raise DesignError(f"Expansion produces repeated column names: {', '.join(repeated)}")

    keep = list(range(len(names)))
    remap = {k: k for k in keep}
    dropped: List[str] = []
    if spec.drop_degenerate:
        keep = []
        first_of: Dict[bytes, int] = {}
        for k, values in enumerate(data):
            if not np.any(values):
                dropped.append(names[k])
                logger.info("Dropping all-zero column '%s'", names[k])
                continue
            key = np.ascontiguousarray(values).tobytes()
            if key in first_of:
                remap[k] = first_of[key]
                dropped.append(names[k])
                logger.info(
                    "Dropping column '%s', duplicate of '%s'", names[k], names[first_of[key]]
                )
                continue
            first_of[key] = k
            keep.append(k)

    position = {k: pos for pos, k in enumerate(keep)}
    columns = []
    for k in keep:
        src = tuple(position[remap[p]] for p in parents[k] if remap.get(p) in position)
        kind = kinds[k]
        if kind == ColumnKind.INTERACTION and (len(src) != 2 or src[0] == src[1]):
            # Parents collapsed onto one column: the product is that column squared.
            kind = ColumnKind.SQUARE if len(set(src)) == 1 else ColumnKind.MAIN
            src = src[:1]
        columns.append(Column(names[k], kind, tuple(sorted(src))))

    Z = np.column_stack([data[k] for k in keep]) if keep else np.empty((raw.m, 0))
    design = DesignMatrix(raw.y, Z, columns, dropped)
    logger.debug("Expanded %d covariates into d=%d predictors", raw.p, design.d)
    return design
