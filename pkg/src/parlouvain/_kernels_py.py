"""Pure-Python twin of the compiled sweep kernels.

Every function here matches the compiled extension operation for operation,
including floating-point evaluation order, so both backends produce
bit-identical results. ``workers`` is accepted for interface parity; the
Python path always runs on one thread.
"""

from __future__ import annotations

COMPILED = False


def decide_moves(offsets, neighbors, weights, kdeg, labels, subset,
                 snap_assign, snap_atot, snap_sizes, m, max_degree, workers,
                 out_targets, out_moved):
    """Pick each subset vertex's destination from the frozen snapshot."""
    four_m_sq = (2.0 * m) * (2.0 * m)
    for idx in range(len(subset)):
        i = subset[idx]
        c_old = snap_assign[i]
        e_to = {}
        for e in range(offsets[i], offsets[i + 1]):
            j = neighbors[e]
            if j == i:
                continue
            c = snap_assign[j]
            e_to[c] = e_to.get(c, 0.0) + weights[e]
        ki = kdeg[i]
        e_old = e_to.get(c_old, 0.0)
        a_old_excl = snap_atot[c_old] - ki
        best_gain = 0.0
        best_c = c_old
        best_label = labels[c_old]
        for c, e_c in e_to.items():
            if c == c_old:
                continue
            gain = (e_c - e_old) / m \
                + (2.0 * ki * a_old_excl - 2.0 * ki * snap_atot[c]) / four_m_sq
            if gain > best_gain or (gain == best_gain and labels[c] < best_label):
                best_gain = gain
                best_c = c
                best_label = labels[c]
        moved = best_gain > 0.0 and best_c != c_old
        if moved and snap_sizes[c_old] == 1 and snap_sizes[best_c] == 1 \
                and labels[best_c] > labels[c_old]:
            moved = False  # singleton-pair guard: swaps resolve toward the lower label
        out_targets[idx] = best_c if moved else c_old
        out_moved[idx] = 1 if moved else 0


def apply_moves(offsets, neighbors, weights, kdeg, selfw, subset, targets,
                moved, assign, a_tot, w_int, sizes):
    """Apply decided moves in subset order; returns the move count."""
    count = 0
    for idx in range(len(subset)):
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


def color_assign(offsets, neighbors, active, colors, max_degree, workers,
                 out_colors):
    """Tentatively give each active vertex the smallest color its colored
    neighbors do not use (uncolored neighbors carry -1 and impose nothing)."""
    for idx in range(len(active)):
        i = active[idx]
        used = set()
        for e in range(offsets[i], offsets[i + 1]):
            j = neighbors[e]
            if j == i:
                continue
            cj = colors[j]
            if cj >= 0:
                used.add(cj)
        c = 0
        while c in used:
            c += 1
        out_colors[idx] = c


def color_conflicts(offsets, neighbors, active, colors, workers, out_keep):
    """A vertex keeps its tentative color unless a lower-id neighbor shares it."""
    for idx in range(len(active)):
        i = active[idx]
        ci = colors[i]
        keep = 1
        for e in range(offsets[i], offsets[i + 1]):
            j = neighbors[e]
            if j != i and j < i and colors[j] == ci:
                keep = 0
                break
        out_keep[idx] = keep
