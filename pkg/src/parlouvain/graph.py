"""Immutable weighted undirected graphs in compressed adjacency (CSR) form.

A stored self loop of weight w contributes 2w to the weighted degree of its
vertex; every other edge appears once in each endpoint's adjacency range.
Duplicate undirected edge records in input files are merged by summing their
weights, and the number of merges is kept on the graph for reporting.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EdgelessGraphError, GraphParseError

log = logging.getLogger(__name__)

EDGE_LIST = "edgelist"
METIS = "metis"
MATRIX_MARKET = "mtx"

_FORMAT_ALIASES = {
    "edgelist": EDGE_LIST,
    "edge-list": EDGE_LIST,
    "el": EDGE_LIST,
    "metis": METIS,
    "matrix-market": MATRIX_MARKET,
    "matrixmarket": MATRIX_MARKET,
    "mtx": MATRIX_MARKET,
}


class Graph:
    """Weighted undirected graph, frozen after construction.

    Attributes:
        num_vertices: n
        num_edges: number of distinct undirected edges, self loops included (M)
        adjacency_offsets: int64 array of length n + 1
        neighbors: int64 array, per-vertex ranges sorted by neighbor id
        weights: float64 array parallel to ``neighbors``
        weighted_degrees: float64 k_i (self loops doubled)
        self_loop_weights: float64 stored self-loop weight per vertex
        total_weight: m = half the sum of weighted degrees
        merged_duplicates: duplicate input records merged during construction
    """

    __slots__ = (
        "num_vertices",
        "num_edges",
        "adjacency_offsets",
        "neighbors",
        "weights",
        "weighted_degrees",
        "self_loop_weights",
        "total_weight",
        "max_degree",
        "merged_duplicates",
    )

    def __init__(self, num_vertices, adjacency_offsets, neighbors, weights,
                 self_loop_weights, merged_duplicates=0):
        self.num_vertices = int(num_vertices)
        self.adjacency_offsets = adjacency_offsets
        self.neighbors = neighbors
        self.weights = weights
        self.self_loop_weights = self_loop_weights
        num_self = int(np.count_nonzero(self_loop_weights))
        self.num_edges = (len(neighbors) + num_self) // 2
        wdeg = np.bincount(
            np.repeat(np.arange(self.num_vertices, dtype=np.int64),
                      np.diff(adjacency_offsets)),
            weights=weights, minlength=self.num_vertices).astype(np.float64,
                                                                 copy=False)
        wdeg += self_loop_weights
        self.weighted_degrees = wdeg
        self.total_weight = float(wdeg.sum() / 2.0)
        degs = np.diff(adjacency_offsets)
        self.max_degree = int(degs.max()) if len(degs) else 0
        self.merged_duplicates = int(merged_duplicates)
        for arr in (self.adjacency_offsets, self.neighbors, self.weights,
                    self.weighted_degrees, self.self_loop_weights):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, u, v, w=None, num_vertices=None, count_merges=True):
        """Build a graph from undirected edge records.

        Records may appear in any order and either orientation; duplicates of
        the same unordered pair are merged by summing weights. Missing weights
        default to 1.
        """
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if w is None:
            w = np.ones(len(u), dtype=np.float64)
        else:
            w = np.asarray(w, dtype=np.float64)
        if not (len(u) == len(v) == len(w)):
            raise ValueError("edge arrays must have equal length")
        if len(u) and (not np.all(np.isfinite(w)) or np.any(w <= 0.0)):
            raise GraphParseError("non-positive weight in edge records")
        if num_vertices is None:
            num_vertices = int(max(u.max(), v.max()) + 1) if len(u) else 0
        n = int(num_vertices)
        if len(u) and (u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n):
            raise ValueError("vertex id out of range")

        a = np.minimum(u, v)
        b = np.maximum(u, v)
        order = np.lexsort((b, a))
        a, b, w = a[order], b[order], w[order]
        if len(a):
            new_run = np.empty(len(a), dtype=bool)
            new_run[0] = True
            new_run[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1])
            starts = np.flatnonzero(new_run)
            wm = np.add.reduceat(w, starts)
            am, bm = a[starts], b[starts]
            merged = len(a) - len(starts)
        else:
            am = bm = a
            wm = w
            merged = 0
        if merged and count_merges:
            log.warning("merged %d duplicate edge records", merged)

        nonself = am != bm
        src = np.concatenate([am, bm[nonself]])
        dst = np.concatenate([bm, am[nonself]])
        ws = np.concatenate([wm, wm[nonself]])
        order = np.lexsort((dst, src))
        neighbors = dst[order]
        weights = ws[order]
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=offsets[1:])

        selfw = np.zeros(n, dtype=np.float64)
        self_mask = ~nonself
        if self_mask.any():
            selfw[am[self_mask]] = wm[self_mask]

        return cls(n, offsets, neighbors, weights, selfw,
                   merged_duplicates=merged if count_merges else 0)

    def neighbors_of(self, i):
        """Return (neighbor ids, weights) views for vertex i."""
        lo, hi = self.adjacency_offsets[i], self.adjacency_offsets[i + 1]
        return self.neighbors[lo:hi], self.weights[lo:hi]

    def degree(self, i):
        """Unweighted degree: adjacency entries, a self loop counting 1."""
        return int(self.adjacency_offsets[i + 1] - self.adjacency_offsets[i])

    def unweighted_degrees(self):
        return np.diff(self.adjacency_offsets)

    def edge_weight(self, i, j):
        """Weight of edge {i, j}, or 0.0 if absent."""
        nbrs, wts = self.neighbors_of(i)
        pos = np.searchsorted(nbrs, j)
        if pos < len(nbrs) and nbrs[pos] == j:
            return float(wts[pos])
        return 0.0

    def edge_records(self):
        """Unique undirected records (a, b, w) with a <= b, sorted."""
        src = np.repeat(np.arange(self.num_vertices, dtype=np.int64),
                        np.diff(self.adjacency_offsets))
        keep = self.neighbors >= src
        return src[keep], self.neighbors[keep], self.weights[keep]

    def validate(self):
        """Check structural invariants; raises AssertionError on violation."""
        n = self.num_vertices
        offs = self.adjacency_offsets
        assert len(offs) == n + 1 and offs[0] == 0 and offs[-1] == len(self.neighbors)
        assert np.all(np.diff(offs) >= 0)
        assert np.all(self.weights > 0.0)
        for i in range(n):
            nbrs, wts = self.neighbors_of(i)
            assert np.all(np.diff(nbrs) > 0), f"row {i} not strictly sorted"
            for j, wij in zip(nbrs.tolist(), wts.tolist()):
                if j == i:
                    assert self.self_loop_weights[i] == wij
                else:
                    assert self.edge_weight(j, i) == wij, f"asymmetric edge {i},{j}"
        k = np.zeros(n)
        for i in range(n):
            nbrs, wts = self.neighbors_of(i)
            k[i] = wts.sum() + self.self_loop_weights[i]
        assert np.allclose(k, self.weighted_degrees, rtol=1e-12, atol=0)
        assert self.total_weight == self.weighted_degrees.sum() / 2.0
        return True

    def same_as(self, other):
        return (self.num_vertices == other.num_vertices
                and self.num_edges == other.num_edges
                and self.total_weight == other.total_weight
                and np.array_equal(self.adjacency_offsets, other.adjacency_offsets)
                and np.array_equal(self.neighbors, other.neighbors)
                and np.array_equal(self.weights, other.weights))

    def __repr__(self):
        return (f"Graph(n={self.num_vertices}, M={self.num_edges}, "
                f"m={self.total_weight:g})")


@dataclass(frozen=True)
class DegreeStats:
    """Unweighted degree statistics: maximum, mean, and relative std deviation."""
    max_degree: int
    avg_degree: float
    rsd: float


def degree_stats(g: Graph) -> DegreeStats:
    """Max/avg/RSD of unweighted degrees; RSD is population stddev over mean."""
    if g.num_edges == 0:
        raise EdgelessGraphError("no edges")
    degs = g.unweighted_degrees().astype(np.float64)
    mean = float(degs.mean())
    std = float(degs.std())
    return DegreeStats(max_degree=int(degs.max()), avg_degree=mean, rsd=std / mean)


def resolve_format(fmt: str | None, path) -> str:
    """Normalize a format name, inferring from the file suffix when omitted."""
    if fmt:
        key = fmt.strip().lower()
        if key not in _FORMAT_ALIASES:
            raise ValueError(f"unknown graph format: {fmt!r}")
        return _FORMAT_ALIASES[key]
    suffix = Path(path).suffix.lower()
    if suffix == ".mtx":
        return MATRIX_MARKET
    if suffix in (".metis", ".graph"):
        return METIS
    return EDGE_LIST


def load_graph(path, fmt: str | None = None) -> Graph:
    """Load a graph from an edge list, METIS, or Matrix Market file.

    Vertex ids are made dense: ids already forming 0..n-1 are kept verbatim,
    anything else is renumbered in first-appearance order. Unweighted inputs
    get unit weights.
    """
    fmt = resolve_format(fmt, path)
    if fmt == EDGE_LIST:
        u, v, w, n = _parse_edge_list(path)
    elif fmt == METIS:
        u, v, w, n = _parse_metis(path)
    else:
        u, v, w, n = _parse_matrix_market(path)
    return Graph.from_edges(u, v, w, num_vertices=n)


def write_edge_list(g: Graph, path):
    """Write one `u v w` line per undirected edge (self loops stored once)."""
    a, b, w = g.edge_records()
    with open(path, "w", encoding="utf-8") as fh:
        for i, j, wij in zip(a.tolist(), b.tolist(), w.tolist()):
            fh.write(f"{i} {j} {wij!r}\n")


def _densify_ids(u, v):
    """Map raw integer ids to 0..n-1.

    Ids that already form exactly {0, ..., n-1} are kept as-is so that a
    written edge list reloads to an identical graph; otherwise ids are
    assigned densely in order of first appearance.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    interleaved = np.empty(2 * len(u), dtype=np.int64)
    interleaved[0::2] = u
    interleaved[1::2] = v
    uniq, first_pos = np.unique(interleaved, return_index=True)
    n = len(uniq)
    if n and uniq[0] == 0 and uniq[-1] == n - 1:
        return u, v, n
    dense = np.empty(n, dtype=np.int64)
    dense[np.argsort(first_pos, kind="stable")] = np.arange(n, dtype=np.int64)
    return dense[np.searchsorted(uniq, u)], dense[np.searchsorted(uniq, v)], n


def _parse_weight(token, path, ln):
    try:
        w = float(token)
    except ValueError:
        raise GraphParseError(f"{path}:{ln}: malformed line: bad weight {token!r}") from None
    if not np.isfinite(w) or w <= 0.0:
        raise GraphParseError(f"{path}:{ln}: non-positive weight {token!r}")
    return w


def _parse_edge_list(path):
    us, vs, ws = [], [], []
    with open(path, "r", encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise GraphParseError(
                    f"{path}:{ln}: malformed line: expected 'u v [w]', got {line!r}")
            try:
                ui, vi = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphParseError(
                    f"{path}:{ln}: malformed line: bad vertex id in {line!r}") from None
            us.append(ui)
            vs.append(vi)
            ws.append(_parse_weight(parts[2], path, ln) if len(parts) == 3 else 1.0)
    if not us:
        raise EdgelessGraphError(f"{path}: empty file: no edge records")
    u, v, n = _densify_ids(us, vs)
    return u, v, np.asarray(ws, dtype=np.float64), n


def _parse_metis(path):
    """Parse a METIS adjacency file (1-based ids, each edge listed twice)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    # blank lines are isolated vertices, so only comment lines are dropped
    body = [(ln, raw.strip()) for ln, raw in enumerate(lines, start=1)
            if not raw.lstrip().startswith("%")]
    while body and not body[0][1]:
        body.pop(0)
    if not body:
        raise EdgelessGraphError(f"{path}: empty file: no edge records")
    header_ln, header = body[0]
    tokens = header.split()
    if len(tokens) < 2:
        raise GraphParseError(f"{path}:{header_ln}: malformed line: bad header {header!r}")
    try:
        n, m_declared = int(tokens[0]), int(tokens[1])
        fmt_code = int(tokens[2]) if len(tokens) > 2 else 0
    except ValueError:
        raise GraphParseError(
            f"{path}:{header_ln}: malformed line: bad header {header!r}") from None
    if (fmt_code // 10) % 10 == 1 or fmt_code >= 100:
        raise GraphParseError(
            f"{path}:{header_ln}: vertex weights (fmt={fmt_code}) are not supported")
    has_edge_weights = fmt_code % 10 == 1
    adjacency = body[1:]
    if any(text for _, text in adjacency[n:]):
        raise GraphParseError(
            f"{path}: header declares {n} vertices but file has more adjacency lines")
    adjacency = adjacency[:n]
    if len(adjacency) != n:
        raise GraphParseError(
            f"{path}: header declares {n} vertices but file has {len(adjacency)} adjacency lines")

    upper = {}
    lower = {}
    merged = 0
    for vertex, (ln, line) in enumerate(adjacency):
        tokens = line.split()
        if has_edge_weights:
            if len(tokens) % 2 != 0:
                raise GraphParseError(
                    f"{path}:{ln}: malformed line: odd token count in weighted adjacency")
            pairs = list(zip(tokens[0::2], tokens[1::2]))
        else:
            pairs = [(t, None) for t in tokens]
        for nbr_tok, w_tok in pairs:
            try:
                nbr = int(nbr_tok) - 1
            except ValueError:
                raise GraphParseError(
                    f"{path}:{ln}: malformed line: bad neighbor {nbr_tok!r}") from None
            if nbr < 0 or nbr >= n:
                raise GraphParseError(f"{path}:{ln}: neighbor id {nbr + 1} out of range")
            w = _parse_weight(w_tok, path, ln) if w_tok is not None else 1.0
            key = (min(vertex, nbr), max(vertex, nbr))
            side = upper if vertex <= nbr else lower
            if key in side:
                side[key] += w
                merged += 1
            else:
                side[key] = w
    for key, w in lower.items():
        if key not in upper:
            raise GraphParseError(
                f"{path}: edge {key[0] + 1}-{key[1] + 1} listed in one direction only")
        if abs(upper[key] - w) > 1e-9 * max(abs(w), 1.0):
            raise GraphParseError(
                f"{path}: edge {key[0] + 1}-{key[1] + 1} has asymmetric weights")
    for key in upper:
        if key[0] != key[1] and key not in lower:
            raise GraphParseError(
                f"{path}: edge {key[0] + 1}-{key[1] + 1} listed in one direction only")
    if len(upper) != m_declared:
        raise GraphParseError(
            f"{path}: header declares {m_declared} edges but file defines {len(upper)}")
    if merged:
        log.warning("%s: merged %d duplicate neighbor entries", path, merged)
    if not upper:
        raise EdgelessGraphError(f"{path}: empty file: no edge records")
    a = np.fromiter((k[0] for k in upper), dtype=np.int64, count=len(upper))
    b = np.fromiter((k[1] for k in upper), dtype=np.int64, count=len(upper))
    w = np.fromiter(upper.values(), dtype=np.float64, count=len(upper))
    return a, b, w, n


def _parse_matrix_market(path):
    """Parse a symmetric coordinate Matrix Market file (real or pattern)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("%%MatrixMarket"):
            raise GraphParseError(f"{path}:1: malformed line: missing MatrixMarket banner")
        tokens = header.strip().split()
        if len(tokens) < 5:
            raise GraphParseError(f"{path}:1: malformed line: short banner")
        _, obj, mm_format, field, symmetry = tokens[:5]
        if obj.lower() != "matrix" or mm_format.lower() != "coordinate":
            raise GraphParseError(f"{path}:1: only coordinate matrices are supported")
        field = field.lower()
        if field not in ("real", "integer", "pattern"):
            raise GraphParseError(f"{path}:1: unsupported field {field!r}")
        if symmetry.lower() != "symmetric":
            raise GraphParseError(f"{path}:1: unsupported symmetry {symmetry!r}")
        pattern = field == "pattern"

        size_line = None
        ln = 1
        for raw in fh:
            ln += 1
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            size_line = (ln, line)
            break
        if size_line is None:
            raise EdgelessGraphError(f"{path}: empty file: no edge records")
        tokens = size_line[1].split()
        if len(tokens) != 3:
            raise GraphParseError(f"{path}:{size_line[0]}: malformed line: bad size line")
        try:
            rows, cols, nnz = (int(t) for t in tokens)
        except ValueError:
            raise GraphParseError(
                f"{path}:{size_line[0]}: malformed line: bad size line") from None
        if rows != cols:
            raise GraphParseError(f"{path}:{size_line[0]}: matrix is not square")

        us, vs, ws = [], [], []
        for raw in fh:
            ln += 1
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            parts = line.split()
            if pattern and len(parts) != 2 or not pattern and len(parts) != 3:
                raise GraphParseError(f"{path}:{ln}: malformed line: {line!r}")
            try:
                i, j = int(parts[0]) - 1, int(parts[1]) - 1
            except ValueError:
                raise GraphParseError(
                    f"{path}:{ln}: malformed line: bad index in {line!r}") from None
            if not (0 <= i < rows and 0 <= j < rows):
                raise GraphParseError(f"{path}:{ln}: index out of range")
            us.append(i)
            vs.append(j)
            ws.append(1.0 if pattern else _parse_weight(parts[2], path, ln))
        if len(us) != nnz:
            raise GraphParseError(
                f"{path}: size line declares {nnz} entries but file has {len(us)}")
        if not us:
            raise EdgelessGraphError(f"{path}: empty file: no edge records")
    return (np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64),
            np.asarray(ws, dtype=np.float64), rows)
