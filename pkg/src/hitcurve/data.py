"""Labeled samples, the grouped partition table, and CSV ingestion."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray

from hitcurve.errors import (
    DegenerateClass,
    EmptyDataset,
    MalformedInput,
    NonBinaryLabel,
    NonFiniteScore,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class LabeledSample:
    """One subject: a test score (higher = more disease-like) and a 0/1 label."""

    score: float
    label: int

    def __post_init__(self) -> None:
        if not math.isfinite(self.score):
            raise NonFiniteScore(f"score must be finite, got {self.score!r}")
        if self.label not in (0, 1):
            raise NonBinaryLabel(f"label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True, eq=False)
class PartitionTable:
    """Subjects grouped by distinct score, highest score first.

    Attributes:
        scores: Distinct scores, strictly decreasing
        S: Subjects per group
        Z: Class-1 subjects per group
        Zbar: Class-0 subjects per group
    """

    scores: NDArray[np.float64]
    S: NDArray[np.int64]
    Z: NDArray[np.int64]
    Zbar: NDArray[np.int64]

    def __post_init__(self) -> None:
        if len(self.scores) == 0:
            raise EmptyDataset("a partition table needs at least one group")
        if not (len(self.scores) == len(self.S) == len(self.Z) == len(self.Zbar)):
            raise ValueError("scores, S, Z and Zbar must have equal length")
        if np.any(np.diff(self.scores) >= 0):
            raise ValueError("scores must be strictly decreasing")
        if np.any(self.S < 1) or np.any(self.Z < 0) or np.any(self.Zbar < 0):
            raise ValueError("group counts must be nonnegative and every group nonempty")
        if not np.array_equal(self.S, self.Z + self.Zbar):
            raise ValueError("S must equal Z + Zbar in every group")

    @property
    def K(self) -> int:
        return len(self.scores)

    @property
    def n(self) -> int:
        return int(self.S.sum())

    @property
    def n1(self) -> int:
        return int(self.Z.sum())

    @property
    def n0(self) -> int:
        return int(self.Zbar.sum())

    @property
    def pi(self) -> float:
        """Prevalence n1/n."""
        return self.n1 / self.n

    @property
    def d(self) -> NDArray[np.int64]:
        """Cumulative subject counts d(k)."""
        return np.cumsum(self.S)

    @property
    def h(self) -> NDArray[np.int64]:
        """Cumulative class-1 counts h(k)."""
        return np.cumsum(self.Z)

    def require_both_classes(self) -> None:
        """Raise DegenerateClass unless n1 >= 1 and n0 >= 1."""
        if self.n1 == 0:
            raise DegenerateClass("no class-1 subjects (n1 = 0)")
        if self.n0 == 0:
            raise DegenerateClass("no class-0 subjects (n0 = 0)")

    @classmethod
    def from_arrays(cls, scores: ArrayLike, labels: ArrayLike) -> "PartitionTable":
        """Group subject-level scores and labels by exact score equality.

        Raises:
            EmptyDataset: If there are no subjects
            NonFiniteScore: If a score is NaN or infinite
            NonBinaryLabel: If a label is not 0 or 1
        """
        x = np.asarray(scores, dtype=np.float64).ravel()
        y = np.asarray(labels).ravel()
        if x.size == 0:
            raise EmptyDataset("dataset is empty")
        if x.shape != y.shape:
            raise ValueError(f"got {x.size} scores but {y.size} labels")
        if not np.all(np.isfinite(x)):
            bad = int(np.flatnonzero(~np.isfinite(x))[0])
            raise NonFiniteScore(f"score at position {bad} is not finite: {x[bad]!r}")
        binary = (y == 0) | (y == 1)
        if not np.all(binary):
            bad = int(np.flatnonzero(~binary)[0])
            raise NonBinaryLabel(f"label at position {bad} is not 0 or 1: {y[bad]!r}")

        distinct, group = np.unique(x, return_inverse=True)
        positive = y == 1
        K = len(distinct)
        S = np.bincount(group, minlength=K)
        Z = np.bincount(group[positive], minlength=K)
        return cls(
            scores=distinct[::-1].copy(),
            S=S[::-1].astype(np.int64),
            Z=Z[::-1].astype(np.int64),
            Zbar=(S - Z)[::-1].astype(np.int64),
        )

    @classmethod
    def from_counts(
        cls, scores: ArrayLike, cases: ArrayLike, controls: ArrayLike
    ) -> "PartitionTable":
        """Build a table from grouped counts, e.g. rating-scale data.

        Groups may be given in any order; empty groups are dropped.

        Raises:
            EmptyDataset: If all counts are zero
            MalformedInput: If scores repeat or counts are negative
        """
        x = np.asarray(scores, dtype=np.float64).ravel()
        z = np.asarray(cases, dtype=np.int64).ravel()
        zbar = np.asarray(controls, dtype=np.int64).ravel()
        if not np.all(np.isfinite(x)):
            raise NonFiniteScore("grouped scores must be finite")
        if np.any(z < 0) or np.any(zbar < 0):
            raise MalformedInput("group counts must be nonnegative")
        order = np.argsort(-x, kind="stable")
        x, z, zbar = x[order], z[order], zbar[order]
        if np.any(np.diff(x) == 0):
            raise MalformedInput("grouped scores must be distinct")
        keep = (z + zbar) > 0
        if not np.any(keep):
            raise EmptyDataset("all group counts are zero")
        return cls(scores=x[keep], S=(z + zbar)[keep], Z=z[keep], Zbar=zbar[keep])


def partition(samples: Sequence[LabeledSample]) -> PartitionTable:
    """Partition subjects into groups of equal score, ordered by decreasing score.

    Raises:
        EmptyDataset: If ``samples`` is empty
    """
    if len(samples) == 0:
        raise EmptyDataset("dataset is empty")
    scores = np.fromiter((s.score for s in samples), dtype=np.float64, count=len(samples))
    labels = np.fromiter((s.label for s in samples), dtype=np.int64, count=len(samples))
    return PartitionTable.from_arrays(scores, labels)


def to_samples(scores: ArrayLike, labels: ArrayLike) -> list[LabeledSample]:
    """Pair up score and label arrays."""
    return [
        LabeledSample(score=float(s), label=int(y))
        for s, y in zip(np.asarray(scores), np.asarray(labels), strict=True)
    ]


@dataclass
class ScoreColumns:
    """Parsed contents of a subject-level CSV file.

    Attributes:
        labels: Class labels, one per row
        columns: Successfully parsed score columns, in file order
        problems: Error message per score column that could not be parsed
    """

    labels: NDArray[np.int64]
    columns: dict[str, NDArray[np.float64]] = field(default_factory=dict)
    problems: dict[str, str] = field(default_factory=dict)

    def column(self, name: str) -> NDArray[np.float64]:
        """Get one score column, raising its parse error if it had one."""
        if name in self.problems:
            raise MalformedInput(self.problems[name])
        return self.columns[name]


def _read_frame(path: Path) -> pd.DataFrame:
    """Read every cell as text, indexed by 1-based file line (header is line 1)."""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=False)
    except pd.errors.EmptyDataError:
        raise MalformedInput(f"{path} is empty")
    except pd.errors.ParserError as e:
        raise MalformedInput(f"cannot parse {path}: {e}")
    frame.columns = [str(c).strip() for c in frame.columns]
    frame = frame.fillna("")
    frame.index = frame.index + 2
    blank = (frame == "").all(axis=1)
    return frame[~blank]


def _parse_labels(raw: pd.Series) -> NDArray[np.int64]:
    text = raw.str.strip()
    for line, value in zip(text.index.tolist(), text):
        if value not in ("0", "1"):
            raise MalformedInput(f"label {value!r} is not 0 or 1", line=line)
    return text.astype(np.int64).to_numpy()


def _parse_scores(raw: pd.Series, name: str) -> NDArray[np.float64]:
    text = raw.str.strip()
    values = pd.to_numeric(text, errors="coerce").to_numpy(dtype=np.float64)
    for line, cell, value in zip(text.index.tolist(), text, values):
        if cell == "":
            raise MalformedInput(f"column {name!r}: empty score", line=line)
        if math.isnan(value):
            raise MalformedInput(f"column {name!r}: score {cell!r} is not numeric", line=line)
        if not math.isfinite(value):
            raise MalformedInput(f"column {name!r}: score {cell!r} is not finite", line=line)
    return values


def read_scores(
    path: Path, label_col: str = "label", score_cols: Sequence[str] | None = None
) -> ScoreColumns:
    """Read a CSV file with a header, one label column and score columns.

    Label problems and missing columns are fatal. A score column that fails
    to parse is recorded in ``problems`` so callers can skip it.

    Args:
        path: CSV file
        label_col: Name of the 0/1 label column
        score_cols: Score columns to read (default: every other column)

    Raises:
        MalformedInput: On missing columns, bad labels, or an empty file
    """
    frame = _read_frame(path)
    if label_col not in frame.columns:
        raise MalformedInput(f"label column {label_col!r} not found in {path}")
    if frame.empty:
        raise EmptyDataset(f"{path} has no data rows")

    if score_cols is None:
        score_cols = [c for c in frame.columns if c != label_col]
    missing = [c for c in score_cols if c not in frame.columns]
    if missing:
        raise MalformedInput(f"score column(s) not found: {', '.join(missing)}")
    if not score_cols:
        raise MalformedInput(f"{path} has no score columns")

    parsed = ScoreColumns(labels=_parse_labels(frame[label_col]))
    for name in score_cols:
        try:
            parsed.columns[name] = _parse_scores(frame[name], name)
        except MalformedInput as e:
            logger.debug("Column %s rejected: %s", name, e)
            parsed.problems[name] = str(e)
    return parsed


def read_grouped_counts(path: Path) -> PartitionTable:
    """Read grouped data with columns ``score``, ``cases``, ``controls``.

    Raises:
        MalformedInput: On missing columns or non-integer counts
    """
    frame = _read_frame(path)
    required = ["score", "cases", "controls"]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise MalformedInput(f"grouped input needs column(s): {', '.join(missing)}")
    if frame.empty:
        raise EmptyDataset(f"{path} has no data rows")

    scores = _parse_scores(frame["score"], "score")
    counts = {}
    for name in ("cases", "controls"):
        text = frame[name].str.strip()
        for line, cell in zip(text.index.tolist(), text):
            if not cell.isdigit():
                raise MalformedInput(
                    f"column {name!r}: count {cell!r} is not a nonnegative integer", line=line
                )
        counts[name] = text.astype(np.int64).to_numpy()
    return PartitionTable.from_counts(scores, counts["cases"], counts["controls"])
