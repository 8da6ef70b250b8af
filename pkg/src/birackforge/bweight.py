"""Braid weights: labeled generator matrices and the trace enhancement."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import product

from .birack import birack_from_json
from .errors import LabelMismatch, NotInvertibleOverRing, ParseError, ShapeError
from .labeling import Labeling
from .ring import RingMatrix, parse_poly, render_poly

__all__ = [
    "BraidWeight",
    "verify_braid_weight",
    "braid_labelings",
    "evaluate_braid",
    "phi_mw",
    "phi_w_polynomial",
    "TraceMultiset",
]


class BraidWeight:
    """``sigma[(j, x, y)]``: matrix of generator ``j`` with incoming labels ``x, y``."""

    def __init__(self, birack, strands, dim, sigma, variables=()):
        self.birack = birack
        self.strands = strands
        self.dim = dim
        self.sigma = dict(sigma)
        self.variables = tuple(variables)
        for j in range(1, strands):
            for x, y in product(birack.elements, repeat=2):
                m = self.sigma.get((j, x, y))
                if m is None:
                    raise ParseError(f"missing sigma_{j}^({x},{y})")
                if m.shape != (dim, dim):
                    raise ShapeError(f"sigma_{j}^({x},{y}) must be {dim}x{dim}")
        self._inv = {}

    def inv(self, j, x, y):
        key = (j, x, y)
        if key not in self._inv:
            self._inv[key] = self.sigma[key].inverse()
        return self._inv[key]

    def eye(self):
        return next(iter(self.sigma.values())).eye(self.dim)

    @classmethod
    def from_json(cls, doc, birack=None):
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            birack = birack or birack_from_json(doc["birack"])
            strands, dim, raw = int(doc["strands"]), int(doc["dim"]), doc["sigma"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"braid weight document is missing {exc}") from None
        variables = doc.get("variables")
        if variables is None:
            names = set()
            for rows in raw.values():
                for r in rows:
                    for e in r:
                        if isinstance(e, str):
                            names.update(parse_poly(e).variables)
            variables = sorted(names)
        sigma = {}
        for key, rows in raw.items():
            try:
                j, x, y = (int(t) for t in key.replace("|", ",").split(","))
            except ValueError:
                raise ParseError(f"bad generator key {key!r}; expected 'j|x,y'") from None
            sigma[(j, x, y)] = RingMatrix.from_rows(rows, variables)
        return cls(birack, strands, dim, sigma, variables)

    def to_json(self):
        return {
            "birack": self.birack.to_json(),
            "strands": self.strands,
            "dim": self.dim,
            "variables": list(self.variables),
            "sigma": {f"{j}|{x},{y}": m.to_json() for (j, x, y), m in sorted(self.sigma.items())},
        }


@dataclass
class BraidReport:
    invertible: bool = True
    braid: bool = True
    far: bool = True
    literal_far: bool = True  # commutation for |j - k| < 2 read literally
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.invertible and self.braid and self.far

    def to_json(self):
        return {
            "ok": self.ok,
            "invertible": self.invertible,
            "braid_relation": self.braid,
            "far_commutativity": self.far,
            "literal_far_commutativity": self.literal_far,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


def verify_braid_weight(w):
    b = w.birack
    els = list(b.elements)
    n = w.strands
    rep = BraidReport()
    for (j, x, y) in sorted(w.sigma):
        try:
            w.inv(j, x, y)
        except NotInvertibleOverRing:
            rep.invertible = False
            rep.witnesses.setdefault("invertible", (j, x, y))
    S = w.sigma
    for j in range(1, n - 1):
        for x, y, z in product(els, repeat=3):
            yx, xy = b(x, y)
            zy, yz = b(y, z)
            lhs = S[(j, x, y)] @ S[(j + 1, xy, z)] @ S[(j, yx, b.up(xy, z))]
            rhs = S[(j + 1, y, z)] @ S[(j, x, zy)] @ S[(j + 1, b.down(x, zy), yz)]
            if lhs != rhs:
                rep.braid = False
                rep.witnesses.setdefault("braid_relation", (j, x, y, z))
    for j, k in product(range(1, n), repeat=2):
        for x, y, u, v in product(els, repeat=4):
            a, c = S[(j, x, y)], S[(k, u, v)]
            if a @ c != c @ a:
                if abs(j - k) >= 2:
                    rep.far = False
                    rep.witnesses.setdefault("far_commutativity", (j, k, x, y, u, v))
                else:
                    rep.literal_far = False
                    rep.witnesses.setdefault("literal_far_commutativity", (j, k, x, y, u, v))
    return rep


def _propagate(birack, word, labels):
    """Labels after each letter; yields ``(letter, incoming pair, outgoing pair)``."""
    labels = list(labels)
    steps = []
    for k in word:
        j = abs(k) - 1
        x, y = labels[j], labels[j + 1]
        out = birack(x, y) if k > 0 else birack.inv(x, y)
        steps.append((k, (x, y), out))
        labels[j], labels[j + 1] = out
    return steps, tuple(labels)


def braid_labelings(b, birack):
    """Bottom label tuples whose propagation through ``b`` returns to itself."""
    out = []
    for start in product(birack.elements, repeat=b.strands):
        _, end = _propagate(birack, b.word, start)
        if end == start:
            out.append(start)
    return out


def evaluate_braid(b, f, w, closed=True):
    """Product of generator matrices in word order under bottom labels ``f``.

    ``f`` is a tuple of bottom labels or a :class:`Labeling` of the braid's
    closure (its braid-bottom level is read).
    """
    if isinstance(f, Labeling):
        f = f.levels[b.strands][:b.strands]
    f = tuple(f)
    if len(f) != b.strands:
        raise LabelMismatch(f"{len(f)} labels for {b.strands} strands")
    if b.strands != w.strands:
        raise LabelMismatch(f"weight is for {w.strands} strands, braid has {b.strands}")
    steps, end = _propagate(w.birack, b.word, f)
    if closed and end != f:
        raise LabelMismatch(f"labels {f} do not close up (top is {end})")
    M = w.eye()
    for k, (x, y), out in steps:
        j = abs(k)
        M = M @ (w.sigma[(j, x, y)] if k > 0 else w.inv(j, *out))
    return M


class TraceMultiset:
    def __init__(self, values=()):
        self.counts = Counter(values)

    def items(self):
        return sorted(self.counts.items(), key=lambda kv: render_poly(kv[0]))

    @property
    def total(self):
        return sum(self.counts.values())

    def __eq__(self, other):
        if isinstance(other, TraceMultiset):
            return self.counts == other.counts
        return NotImplemented

    __hash__ = None

    def render(self):
        parts = [(render_poly(v) if k == 1 else f"{render_poly(v)} x{k}") for v, k in self.items()]
        return "{" + ", ".join(parts) + "}"

    def to_json(self):
        return [{"value": render_poly(v), "multiplicity": k} for v, k in self.items()]

    __str__ = render


def phi_mw(b, w):
    """Traces of the labeled braid matrices over all closing labelings."""
    return TraceMultiset(evaluate_braid(b, f, w).trace() for f in braid_labelings(b, w.birack))


def phi_w_polynomial(ms):
    terms = []
    for v, k in ms.items():
        t = f"u^{{{render_poly(v, compact=True)}}}"
        terms.append(t if k == 1 else f"{k}·{t}")
    return " + ".join(terms) if terms else "0"
