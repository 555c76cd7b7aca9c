"""Tests for samples, partition tables and CSV ingestion."""

from pathlib import Path

import numpy as np
import pytest

from hitcurve.data import (
    LabeledSample,
    PartitionTable,
    partition,
    read_grouped_counts,
    read_scores,
    to_samples,
)
from hitcurve.errors import (
    DegenerateClass,
    EmptyDataset,
    MalformedInput,
    NonBinaryLabel,
    NonFiniteScore,
)


def test_partition_without_ties():
    """Every subject gets its own group, highest score first."""
    table = partition(to_samples([4, 3, 2, 1], [1, 0, 1, 0]))

    assert table.K == 4
    assert table.scores.tolist() == [4, 3, 2, 1]
    assert table.S.tolist() == [1, 1, 1, 1]
    assert table.Z.tolist() == [1, 0, 1, 0]
    assert table.Zbar.tolist() == [0, 1, 0, 1]


def test_partition_groups_ties():
    """Equal scores share a group."""
    table = partition(to_samples([2, 2, 1, 1], [1, 0, 1, 0]))

    assert table.K == 2
    assert table.S.tolist() == [2, 2]
    assert table.Z.tolist() == [1, 1]
    assert table.Zbar.tolist() == [1, 1]


def test_partition_all_tied():
    """All-tied scores give one group."""
    table = partition(to_samples([1, 1, 1, 1], [1, 0, 1, 0]))

    assert table.K == 1
    assert table.S.tolist() == [4]
    assert table.Z.tolist() == [2]
    assert table.n1 == 2
    assert table.n0 == 2
    assert table.pi == 0.5


def test_cumulative_counts():
    """d and h are running totals ending at n and n1."""
    table = PartitionTable.from_arrays([4, 3, 2, 1], [1, 0, 1, 0])

    assert table.d.tolist() == [1, 2, 3, 4]
    assert table.h.tolist() == [1, 1, 2, 2]
    assert table.d[-1] == table.n
    assert table.h[-1] == table.n1


def test_partition_invariants_on_random_data():
    """Groups are strictly decreasing and S = Z + Zbar."""
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.integers(1, 40))
        scores = rng.integers(0, 6, size=n).astype(float)
        labels = rng.integers(0, 2, size=n)
        table = PartitionTable.from_arrays(scores, labels)

        assert np.all(np.diff(table.scores) < 0)
        assert np.array_equal(table.S, table.Z + table.Zbar)
        assert table.n == n
        assert table.n1 == int(labels.sum())
        assert table.K == len(np.unique(scores))


def test_partition_rejects_empty():
    """An empty sample list has no table."""
    with pytest.raises(EmptyDataset):
        partition([])


def test_labeled_sample_validation():
    """Scores must be finite and labels 0 or 1."""
    with pytest.raises(NonFiniteScore):
        LabeledSample(score=float("nan"), label=1)
    with pytest.raises(NonBinaryLabel):
        LabeledSample(score=1.0, label=2)


def test_from_arrays_validation():
    """Array input is validated like samples."""
    with pytest.raises(NonFiniteScore):
        PartitionTable.from_arrays([1.0, float("inf")], [0, 1])
    with pytest.raises(NonBinaryLabel):
        PartitionTable.from_arrays([1.0, 2.0], [0, 3])


def test_require_both_classes():
    """A one-class table fails the both-classes check."""
    table = PartitionTable.from_arrays([1.0, 2.0], [1, 1])

    with pytest.raises(DegenerateClass):
        table.require_both_classes()


def test_from_counts_sorts_and_drops_empty_groups():
    """Grouped counts are sorted and empty groups dropped."""
    table = PartitionTable.from_counts([1, 3, 2], [1, 2, 0], [3, 0, 0])

    assert table.scores.tolist() == [3, 1]
    assert table.Z.tolist() == [2, 1]
    assert table.Zbar.tolist() == [0, 3]


def test_from_counts_rejects_duplicate_scores():
    """Each score may appear once in grouped counts."""
    with pytest.raises(MalformedInput):
        PartitionTable.from_counts([1, 1], [1, 0], [0, 1])


def test_from_counts_rejects_all_zero():
    """Grouped counts need at least one subject."""
    with pytest.raises(EmptyDataset):
        PartitionTable.from_counts([1, 2], [0, 0], [0, 0])


def test_read_scores(tmp_path: Path):
    """Labels and every numeric score column are read."""
    path = tmp_path / "scores.csv"
    path.write_text("label,a,b\n1,4,0.9\n0,3,0.1\n1,2,0.8\n0,1,0.2\n")

    data = read_scores(path)

    assert data.labels.tolist() == [1, 0, 1, 0]
    assert list(data.columns) == ["a", "b"]
    assert data.column("a").tolist() == [4.0, 3.0, 2.0, 1.0]
    assert data.problems == {}


def test_read_scores_bad_label_reports_line(tmp_path: Path):
    """A bad label names its file line."""
    path = tmp_path / "scores.csv"
    path.write_text("label,a\n1,4\n2,3\n")

    with pytest.raises(MalformedInput, match="line 3"):
        read_scores(path)


def test_read_scores_records_bad_column(tmp_path: Path):
    """A non-numeric score column is recorded, not fatal."""
    path = tmp_path / "scores.csv"
    path.write_text("label,good,bad\n1,4,x\n0,3,1\n")

    data = read_scores(path)

    assert list(data.columns) == ["good"]
    assert "bad" in data.problems
    assert "line 2" in data.problems["bad"]
    with pytest.raises(MalformedInput):
        data.column("bad")


def test_read_scores_empty_cell(tmp_path: Path):
    """An empty score cell is recorded as a column problem."""
    path = tmp_path / "scores.csv"
    path.write_text("label,a\n1,4\n0,\n")

    data = read_scores(path, score_cols=["a"])

    assert "empty score" in data.problems["a"]


def test_read_scores_missing_columns(tmp_path: Path):
    """Missing label or score columns are errors."""
    path = tmp_path / "scores.csv"
    path.write_text("y,a\n1,4\n")

    with pytest.raises(MalformedInput, match="label column"):
        read_scores(path)
    with pytest.raises(MalformedInput, match="not found"):
        read_scores(path, label_col="y", score_cols=["zzz"])


def test_read_scores_header_only(tmp_path: Path):
    """A header with no rows is an empty dataset."""
    path = tmp_path / "scores.csv"
    path.write_text("label,a\n")

    with pytest.raises(EmptyDataset):
        read_scores(path)


def test_read_grouped_counts(tmp_path: Path):
    """Grouped counts are read into a table."""
    path = tmp_path / "grouped.csv"
    path.write_text("score,cases,controls\n1,1,1\n2,1,1\n")

    table = read_grouped_counts(path)

    assert table.scores.tolist() == [2.0, 1.0]
    assert table.S.tolist() == [2, 2]
    assert table.n1 == 2


def test_read_grouped_counts_rejects_bad_count(tmp_path: Path):
    """A negative count names its file line."""
    path = tmp_path / "grouped.csv"
    path.write_text("score,cases,controls\n1,1,-1\n")

    with pytest.raises(MalformedInput, match="line 2"):
        read_grouped_counts(path)


def test_read_scores_skips_blank_lines(tmp_path: Path):
    """Blank lines are skipped rather than read as rows."""
    path = tmp_path / "scores.csv"
    path.write_text("label,a\n1,4\n\n0,3\n\n")

    data = read_scores(path)

    assert data.labels.tolist() == [1, 0]
    assert data.column("a").tolist() == [4.0, 3.0]


def test_read_scores_line_numbers_count_blank_lines(tmp_path: Path):
    """Error line numbers are file lines, blank lines included."""
    path = tmp_path / "scores.csv"
    path.write_text("label,score\n1,4\n0,3\n\nx,2\n")

    with pytest.raises(MalformedInput, match="line 5"):
        read_scores(path)


def test_read_scores_bad_score_after_blank_line(tmp_path: Path):
    """Score column problems also report file lines."""
    path = tmp_path / "scores.csv"
    path.write_text("label,a\n\n1,4\n\n0,oops\n")

    data = read_scores(path)

    assert "line 5" in data.problems["a"]


def test_read_grouped_counts_line_numbers_count_blank_lines(tmp_path: Path):
    """Grouped count errors report file lines after blank lines."""
    path = tmp_path / "grouped.csv"
    path.write_text("score,cases,controls\n2,1,1\n\n\n1,x,1\n")

    with pytest.raises(MalformedInput, match="line 5"):
        read_grouped_counts(path)
