"""Pairwise agreement between two partitions of the same vertex set.

Every vertex pair is binned as TP (together in both partitions), FP
(together only in the candidate), FN (together only in the reference), or
TN (apart in both); specificity, sensitivity, overlap quality, and the Rand
index follow from the counts. Vacuous 0/0 ratios evaluate to 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PartitionMismatchError

BRUTE_FORCE_LIMIT = 2_000


@dataclass(frozen=True)
class PartitionComparison:
    tp: int
    fp: int
    fn: int
    tn: int
    sp: float
    se: float
    oq: float
    rand: float

    CSV_HEADER = "tp,fp,fn,tn,sp,se,oq,rand"

    def csv_line(self) -> str:
        return (f"{self.tp},{self.fp},{self.fn},{self.tn},"
                f"{_fmt(self.sp)},{_fmt(self.se)},{_fmt(self.oq)},{_fmt(self.rand)}")


def _fmt(x: float) -> str:
    text = f"{x:.6f}".rstrip("0")
    return text + "0" if text.endswith(".") else text


def _ratio(num: int, den: int) -> float:
    return 1.0 if den == 0 else num / den


def _from_counts(tp: int, fp: int, fn: int, tn: int) -> PartitionComparison:
    return PartitionComparison(
        tp=tp, fp=fp, fn=fn, tn=tn,
        sp=_ratio(tp, tp + fp),
        se=_ratio(tp, tp + fn),
        oq=_ratio(tp, tp + fp + fn),
        rand=_ratio(tp + tn, tp + fp + fn + tn),
    )


def _checked_labels(reference, candidate):
    s = np.asarray(reference)
    p = np.asarray(candidate)
    if s.ndim != 1 or p.ndim != 1 or s.shape != p.shape:
        raise PartitionMismatchError(
            f"partitions cover different vertex sets ({s.shape} vs {p.shape})")
    if len(s) < 2:
        raise ValueError("pair counting needs at least two vertices")
    return s, p


def compare_partitions(reference, candidate) -> PartitionComparison:
    """Pair counts via the contingency table over community intersections."""
    s, p = _checked_labels(reference, candidate)
    n = len(s)
    _, si = np.unique(s, return_inverse=True)
    _, pi = np.unique(p, return_inverse=True)
    num_p = int(pi.max()) + 1
    cells = np.bincount(si.astype(np.int64) * num_p + pi.astype(np.int64))

    def same_pairs(counts) -> int:
        return sum(c * (c - 1) // 2 for c in counts.tolist())

    tp = same_pairs(cells)
    tp_fn = same_pairs(np.bincount(si))
    tp_fp = same_pairs(np.bincount(pi))
    total = n * (n - 1) // 2
    fn = tp_fn - tp
    fp = tp_fp - tp
    return _from_counts(tp, fp, fn, total - tp - fp - fn)


def compare_partitions_bruteforce(reference, candidate) -> PartitionComparison:
    """Literal categorization of all n(n-1)/2 pairs; test oracle only."""
    s, p = _checked_labels(reference, candidate)
    n = len(s)
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute-force comparison is limited to n <= {BRUTE_FORCE_LIMIT}")
    iu, ju = np.triu_indices(n, k=1)
    same_s = s[iu] == s[ju]
    same_p = p[iu] == p[ju]
    tp = int(np.count_nonzero(same_s & same_p))
    fn = int(np.count_nonzero(same_s & ~same_p))
    fp = int(np.count_nonzero(~same_s & same_p))
    tn = int(np.count_nonzero(~same_s & ~same_p))
    return _from_counts(tp, fp, fn, tn)
