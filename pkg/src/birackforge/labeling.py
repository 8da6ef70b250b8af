"""Birack labelings of sliced diagrams and the counting invariants."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import LabelMismatch
from .tangle import insert_kinks, trace_components

__all__ = ["Labeling", "enumerate_labelings", "count_labelings", "phi_basic", "phi_integral", "replay"]


@dataclass(frozen=True)
class Labeling:
    """Labels on every wire of every level, bottom to top.

    ``free`` lists the choices that determine the labeling: the bottom boundary
    labels followed by one label per cup, in the order they are met.
    """

    levels: tuple
    free: tuple

    def bottom(self):
        return self.levels[0]

    def top(self):
        return self.levels[-1]

    def at(self, level, pos):
        return self.levels[level][pos - 1]


def _step(birack, labels, piece, pos, value=None):
    """Apply one elementary op; ``None`` if a cap joins different labels."""
    if piece == "cup":
        return labels[:pos] + (value, value) + labels[pos:]
    x, y = labels[pos], labels[pos + 1]
    if piece == "cap":
        return labels[:pos] + labels[pos + 2:] if x == y else None
    new = birack(x, y) if piece == "xpos" else birack.inv(x, y)
    return labels[:pos] + new + labels[pos + 2:]


def enumerate_labelings(d, birack, bottom=None, top=None):
    """All valid labelings, depth-first in a deterministic order.

    Free choices (bottom labels then cups) take values in ascending order;
    a cap whose two legs disagree prunes the branch.
    """
    ops, ends = d.ops
    elements = tuple(birack.elements)
    starts = [tuple(bottom)] if bottom is not None else product(elements, repeat=d.boundary_in)
    top = tuple(top) if top is not None else None
    # which op index closes each original level
    level_at = {}
    for lv, e in enumerate(ends):
        level_at.setdefault(e, []).append(lv)

    for start in starts:
        start = tuple(start)
        if len(start) != d.boundary_in:
            raise LabelMismatch(f"bottom has {len(start)} labels, diagram has {d.boundary_in} inputs")
        # explicit stack of (op index, labels, snapshots, free choices)
        stack = [(0, start, (), start)]
        while stack:
            k, labels, snaps, free = stack.pop()
            for _ in level_at.get(k, ()):
                snaps = snaps + (labels,)
            if k == len(ops):
                if top is None or labels == top:
                    yield Labeling(snaps, free)
                continue
            piece, pos = ops[k]
            if piece == "cup":
                for v in reversed(elements):
                    stack.append((k + 1, _step(birack, labels, piece, pos, v), snaps, free + (v,)))
            else:
                nxt = _step(birack, labels, piece, pos)
                if nxt is not None:
                    stack.append((k + 1, nxt, snaps, free))


def count_labelings(d, birack, bottom=None, top=None):
    return sum(1 for _ in enumerate_labelings(d, birack, bottom, top))


def replay(d, birack, labeling):
    """Per-op labels ``(piece, pos, before, after)``, checking ``labeling``."""
    ops, ends = d.ops
    free = tuple(labeling.free)
    labels = free[:d.boundary_in]
    cups = list(free[d.boundary_in:])
    if len(labels) != d.boundary_in or len(cups) != sum(1 for p, _ in ops if p == "cup"):
        raise LabelMismatch("wrong number of free labels for this diagram")
    states, out = [labels], []
    for k, (piece, pos) in enumerate(ops):
        nxt = _step(birack, labels, piece, pos, cups.pop(0) if piece == "cup" else None)
        if nxt is None:
            raise LabelMismatch(f"cap at step {k + 1} joins labels {labels[pos]} and {labels[pos + 1]}")
        out.append((piece, pos, labels, nxt))
        labels = nxt
        states.append(labels)
    if len(labeling.levels) != len(ends):
        raise LabelMismatch("labeling has the wrong number of levels")
    for lv, e in enumerate(ends):
        if tuple(labeling.levels[lv]) != states[e]:
            raise LabelMismatch(f"level {lv} labels {labeling.levels[lv]} are not consistent")
    return out


def phi_basic(d, birack):
    """Number of labelings of the diagram as drawn (framing-dependent)."""
    return count_labelings(d, birack)


@dataclass(frozen=True)
class IntegralResult:
    total: int
    by_framing: dict  # framing residues mod N -> count
    rank: int

    def __int__(self):
        return self.total


def phi_integral(d, birack):
    """Sum of labeling counts over all kink vectors in ``Z_N^c``."""
    n_rank = birack.rank
    c = trace_components(d).count
    by = {}
    for r in product(range(n_rank), repeat=c):
        dr = insert_kinks(d, r)
        key = tuple(w % n_rank for w in trace_components(dr).framing)
        by[key] = count_labelings(dr, birack)
    return IntegralResult(sum(by.values()), by, n_rank)
