# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep kernels: move decisions, move application, and coloring.

Mirrors ``_kernels_py`` operation for operation. Floating-point expressions
are kept in the same shape as the Python twin (and the extension is built
with contraction disabled) so both backends produce bit-identical results.
Decision and coloring sweeps are data-parallel over vertices via OpenMP;
move application is a single deterministic pass.
"""

from cython.parallel import parallel, prange
from libc.stdlib cimport calloc, free, malloc

COMPILED = True


cdef inline Py_ssize_t _hash_slot(long long key, Py_ssize_t mask) nogil:
    return <Py_ssize_t> ((<unsigned long long> key * 0x9E3779B97F4A7C15ULL) & <unsigned long long> mask)


def decide_moves(const long long[::1] offsets, const long long[::1] neighbors,
                 const double[::1] weights, const double[::1] kdeg,
                 const long long[::1] labels, const long long[::1] subset,
                 const long long[::1] snap_assign, const double[::1] snap_atot,
                 const long long[::1] snap_sizes, double m,
                 long long max_degree, int workers,
                 long long[::1] out_targets, unsigned char[::1] out_moved):
    """Pick each subset vertex's destination from the frozen snapshot."""
    cdef Py_ssize_t ns = subset.shape[0]
    cdef double four_m_sq = (2.0 * m) * (2.0 * m)
    cdef Py_ssize_t cap = 4
    while cap < 2 * (max_degree + 2):
        cap <<= 1
    cdef Py_ssize_t mask = cap - 1

    cdef Py_ssize_t idx, e, slot, ncand, t
    cdef long long i, j, c, c_old, best_c, best_label, stamp
    cdef double ki, e_old, a_old_excl, best_gain, gain, e_c, w
    cdef bint moved
    cdef long long *keys
    cdef double *vals
    cdef long long *stamps
    cdef Py_ssize_t *cands

    with nogil, parallel(num_threads=workers):
        keys = <long long *> malloc(cap * sizeof(long long))
        vals = <double *> malloc(cap * sizeof(double))
        stamps = <long long *> calloc(cap, sizeof(long long))
        cands = <Py_ssize_t *> malloc((max_degree + 2) * sizeof(Py_ssize_t))
        for idx in prange(ns, schedule='static'):
            i = subset[idx]
            stamp = idx + 1
            c_old = snap_assign[i]
            ncand = 0
            for e in range(offsets[i], offsets[i + 1]):
                j = neighbors[e]
                if j == i:
                    continue
                c = snap_assign[j]
                w = weights[e]
                slot = _hash_slot(c, mask)
                while stamps[slot] == stamp and keys[slot] != c:
                    slot = (slot + 1) & mask
                if stamps[slot] == stamp:
                    vals[slot] += w
                else:
                    stamps[slot] = stamp
                    keys[slot] = c
                    vals[slot] = w
                    cands[ncand] = slot
                    ncand = ncand + 1
            ki = kdeg[i]
            slot = _hash_slot(c_old, mask)
            while stamps[slot] == stamp and keys[slot] != c_old:
                slot = (slot + 1) & mask
            e_old = vals[slot] if stamps[slot] == stamp else 0.0
            a_old_excl = snap_atot[c_old] - ki
            best_gain = 0.0
            best_c = c_old
            best_label = labels[c_old]
            for t in range(ncand):
                c = keys[cands[t]]
                if c == c_old:
                    continue
                e_c = vals[cands[t]]
                gain = (e_c - e_old) / m \
                    + (2.0 * ki * a_old_excl - 2.0 * ki * snap_atot[c]) / four_m_sq
                if gain > best_gain or (gain == best_gain and labels[c] < best_label):
                    best_gain = gain
                    best_c = c
                    best_label = labels[c]
            moved = best_gain > 0.0 and best_c != c_old
            if moved and snap_sizes[c_old] == 1 and snap_sizes[best_c] == 1 \
                    and labels[best_c] > labels[c_old]:
                moved = False  # singleton-pair guard
            out_targets[idx] = best_c if moved else c_old
            out_moved[idx] = 1 if moved else 0
        free(keys)
        free(vals)
        free(stamps)
        free(cands)


def apply_moves(const long long[::1] offsets, const long long[::1] neighbors,
                const double[::1] weights, const double[::1] kdeg,
                const double[::1] selfw, const long long[::1] subset,
                const long long[::1] targets, const unsigned char[::1] moved,
                long long[::1] assign, double[::1] a_tot, double[::1] w_int,
                long long[::1] sizes):
    """Apply decided moves in subset order; returns the move count."""
    cdef Py_ssize_t ns = subset.shape[0]
    cdef Py_ssize_t idx, e
    cdef long long i, j, c, a, b, count = 0
    cdef double e_a, e_b, sw, ki
    with nogil:
        for idx in range(ns):
            if not moved[idx]:
                continue
            i = subset[idx]
            b = targets[idx]
            a = assign[i]
            if b == a:
                continue
            e_a = 0.0
            e_b = 0.0
            for e in range(offsets[i], offsets[i + 1]):
                j = neighbors[e]
                if j == i:
                    continue
                c = assign[j]
                if c == a:
                    e_a += weights[e]
                elif c == b:
                    e_b += weights[e]
            sw = selfw[i]
            ki = kdeg[i]
            w_int[a] -= 2.0 * e_a + 2.0 * sw
            w_int[b] += 2.0 * e_b + 2.0 * sw
            a_tot[a] -= ki
            a_tot[b] += ki
            sizes[a] -= 1
            sizes[b] += 1
            assign[i] = b
            count += 1
    return count


def color_assign(const long long[::1] offsets, const long long[::1] neighbors,
                 const long long[::1] active, const long long[::1] colors,
                 long long max_degree, int workers, long long[::1] out_colors):
    """Tentatively give each active vertex the smallest color its colored
    neighbors do not use."""
    cdef Py_ssize_t ns = active.shape[0]
    cdef Py_ssize_t scratch_len = max_degree + 2
    cdef Py_ssize_t idx, e
    cdef long long i, j, cj, c, stamp
    cdef long long *used
    with nogil, parallel(num_threads=workers):
        used = <long long *> calloc(scratch_len, sizeof(long long))
        for idx in prange(ns, schedule='static'):
            i = active[idx]
            stamp = idx + 1
            for e in range(offsets[i], offsets[i + 1]):
                j = neighbors[e]
                if j == i:
                    continue
                cj = colors[j]
                if 0 <= cj < scratch_len:
                    used[cj] = stamp
            c = 0
            while used[c] == stamp:
                c = c + 1
            out_colors[idx] = c
        free(used)


def color_conflicts(const long long[::1] offsets, const long long[::1] neighbors,
                    const long long[::1] active, const long long[::1] colors,
                    int workers, unsigned char[::1] out_keep):
    """A vertex keeps its tentative color unless a lower-id neighbor shares it."""
    cdef Py_ssize_t ns = active.shape[0]
    cdef Py_ssize_t idx, e
    cdef long long i, j, ci
    cdef unsigned char keep
    with nogil, parallel(num_threads=workers):
        for idx in prange(ns, schedule='static'):
            i = active[idx]
            ci = colors[i]
            keep = 1
            for e in range(offsets[i], offsets[i + 1]):
                j = neighbors[e]
                if j != i and j < i and colors[j] == ci:
                    keep = 0
                    break
            out_keep[idx] = keep
