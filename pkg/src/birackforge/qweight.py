"""Quantum enhancements: birack-labeled matrix weights and their invariants.

A weight assigns a ``d^2 x d^2`` crossing matrix ``X[x, y]`` to every label
pair, a cap row ``N[x]`` (``1 x d^2``), a cup column ``U[x]`` (``d^2 x 1``)
and a framing scalar ``delta``.  Scalars are Laurent polynomials, or residues
mod ``p`` when a ``modulus`` is set.

Matrices act on ``V^{(x) k}`` with lexicographic basis (leftmost factor most
significant).  Reading a diagram bottom to top, later slices multiply on the
left.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import product

from .birack import birack_from_json
from .errors import NotInvertibleOverRing, ParseError, ShapeError
from .labeling import enumerate_labelings, replay
from .ring import LaurentPoly, ModMatrix, RingMatrix, parse_poly, render_poly
from .tangle import insert_kinks, trace_components

__all__ = [
    "QuantumWeight",
    "homogeneous_weight",
    "verify_weight",
    "evaluate",
    "evaluate_dense",
    "normalize",
    "phi_qm",
    "phi_q_polynomial",
    "classify_weight",
    "SignatureMultiset",
    "WeightReport",
]


class QuantumWeight:
    def __init__(self, birack, dim, X, N, U, delta, modulus=None, variables=()):
        self.birack = birack
        self.dim = dim
        self.modulus = modulus
        self.variables = tuple(variables)
        self.X, self.N, self.U = dict(X), dict(N), dict(U)
        els = list(birack.elements)
        d2 = dim * dim
        for x, y in product(els, repeat=2):
            if (x, y) not in self.X:
                raise ParseError(f"missing X[{x},{y}]")
            if self.X[(x, y)].shape != (d2, d2):
                raise ShapeError(f"X[{x},{y}] must be {d2}x{d2}")
        for x in els:
            if x not in self.N or x not in self.U:
                raise ParseError(f"missing N[{x}] or U[{x}]")
            if self.N[x].shape != (1, d2):
                raise ShapeError(f"N[{x}] must be 1x{d2}")
            if self.U[x].shape != (d2, 1):
                raise ShapeError(f"U[{x}] must be {d2}x1")
        self.delta = self._scalar(delta)
        self._inv = {}

    # -- scalar helpers ----------------------------------------------------
    @property
    def proto(self):
        return next(iter(self.X.values()))

    def _scalar(self, v):
        if self.modulus is not None:
            return int(v) % self.modulus
        if isinstance(v, LaurentPoly):
            return v.extend(self.variables) if v.variables != self.variables else v
        if isinstance(v, str):
            return parse_poly(v, self.variables)
        return LaurentPoly.constant(v, self.variables)

    def one(self):
        return self._scalar(1)

    def power(self, s, k):
        if self.modulus is not None:
            return pow(s, k, self.modulus)
        return s ** k

    def eye(self, n):
        return self.proto.eye(n)

    def is_mod(self):
        return self.modulus is not None

    def Xinv(self, x, y):
        """Inverse of ``X[x, y]`` (cached); raises if it does not exist."""
        key = (x, y)
        if key not in self._inv:
            self._inv[key] = self.X[key].inverse()
        return self._inv[key]

    def kink(self, x):
        """Matrix of a positive left kink on a strand labeled ``x``."""
        a = self.birack.alpha[x - 1]
        I = self.eye(self.dim)
        return self.N[a].kron(I) @ I.kron(self.X[(a, x)]) @ self.U[a].kron(I)

    # -- serialisation -----------------------------------------------------
    @classmethod
    def from_json(cls, doc, birack=None):
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            if birack is None:
                birack = birack_from_json(doc["birack"])
            dim = int(doc["dim"])
            modulus = doc.get("modulus")
            raw_X, raw_N, raw_U = doc["X"], doc["N"], doc["U"]
            delta = doc["delta"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"weight document is missing {exc}") from None
        variables = doc.get("variables")
        if modulus is None and variables is None:
            names = set()
            for v in _all_scalars(raw_X, raw_N, raw_U, delta):
                if isinstance(v, str):
                    names.update(parse_poly(v).variables)
            variables = sorted(names)
        variables = tuple(variables or ())

        def mat(rows, kind):
            rows = _shape_rows(rows, kind)
            if modulus is not None:
                return ModMatrix.from_rows(rows, modulus)
            return RingMatrix.from_rows(rows, variables)

        els = list(birack.elements)
        X = _by_key(raw_X, els, 2, lambda r: mat(r, "X"))
        N = _by_key(raw_N, els, 1, lambda r: mat(r, "N"))
        U = _by_key(raw_U, els, 1, lambda r: mat(r, "U"))
        if modulus is None:
            delta = parse_poly(str(delta), variables)
        return cls(birack, dim, X, N, U, delta, modulus, variables)

    def to_json(self):
        doc = {"birack": self.birack.to_json(), "dim": self.dim}
        if self.modulus is not None:
            doc["modulus"] = self.modulus
            doc["delta"] = self.delta
        else:
            doc["variables"] = list(self.variables)
            doc["delta"] = render_poly(self.delta)
        doc["X"] = {f"{x},{y}": m.to_json() for (x, y), m in sorted(self.X.items())}
        doc["N"] = {str(x): m.to_json() for x, m in sorted(self.N.items())}
        doc["U"] = {str(x): m.to_json() for x, m in sorted(self.U.items())}
        return doc


def _all_scalars(*parts):
    for p in parts:
        if isinstance(p, dict):
            yield from _all_scalars(*p.values())
        elif isinstance(p, (list, tuple)):
            yield from _all_scalars(*p)
        else:
            yield p


def _shape_rows(rows, kind):
    if not isinstance(rows, (list, tuple)):
        rows = [[rows]]
    flat = all(not isinstance(r, (list, tuple)) for r in rows)
    if flat:
        # a flat list is a row for caps and a column for cups
        return [list(rows)] if kind == "N" else [[v] for v in rows] if kind == "U" else [list(rows)]
    return [list(r) for r in rows]


def _by_key(raw, els, arity, conv):
    """``{"1,2": m}`` per label, or a single matrix shared by all labels."""
    keys = list(product(els, repeat=arity))
    if isinstance(raw, dict):
        out = {}
        for k, v in raw.items():
            parts = tuple(int(t) for t in str(k).replace("|", ",").split(","))
            out[parts if arity == 2 else parts[0]] = conv(v)
        return out
    m = conv(raw)
    return {(k if arity == 2 else k[0]): m for k in keys}


def homogeneous_weight(birack, X, N, U, delta, modulus=None):
    """Same ``X``, ``N``, ``U`` for every label."""
    els = list(birack.elements)
    variables = getattr(X, "variables", ())
    return QuantumWeight(
        birack, int(round(X.rows ** 0.5)),
        {(x, y): X for x in els for y in els}, {x: N for x in els}, {x: U for x in els},
        delta, modulus, variables,
    )


# -- axiom checks --------------------------------------------------------------------


@dataclass
class AxiomResult:
    ok: bool
    witness: object = None
    lhs: object = None
    rhs: object = None
    detail: str = ""


@dataclass
class WeightReport:
    results: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(r.ok for r in self.results.values())

    @property
    def failures(self):
        return [k for k, r in self.results.items() if not r.ok]

    def to_json(self):
        out = {}
        for k, r in self.results.items():
            entry = {"ok": r.ok}
            if not r.ok:
                entry["witness"] = list(r.witness) if isinstance(r.witness, tuple) else r.witness
                if r.lhs is not None:
                    entry["lhs"] = r.lhs.render()
                    entry["rhs"] = r.rhs.render()
                if r.detail:
                    entry["detail"] = r.detail
            out[k] = entry
        return out


AXIOMS = ("I", "II", "III", "IV", "IV'", "V", "VI")


def _first_failure(pairs):
    for witness, lhs, rhs in pairs:
        if lhs != rhs:
            return AxiomResult(False, witness, lhs, rhs)
    return AxiomResult(True)


def verify_weight(q, axioms=AXIOMS):
    """Check each axiom over all labels; failing entries carry a witness."""
    b = q.birack
    els = list(b.elements)
    I = q.eye(q.dim)
    rep = WeightReport()
    a_of = lambda x: b.alpha[x - 1]  # noqa: E731
    pi = lambda x: b.pi[x - 1]  # noqa: E731

    def inv_ok():
        for x, y in product(els, repeat=2):
            try:
                q.Xinv(x, y)
            except NotInvertibleOverRing as exc:
                return AxiomResult(False, (x, y), detail=str(exc))
        return AxiomResult(True)

    inverses = inv_ok()
    if "II" in axioms:
        rep.results["II"] = inverses

    def ax_I():
        for x in els:
            a, c = a_of(x), a_of(pi(x))
            lhs = q.N[a].kron(I) @ I.kron(q.X[(a, x)]) @ q.U[a].kron(I)
            rhs = I.kron(q.N[c]) @ q.X[(x, c)].kron(I) @ I.kron(q.U[c])
            yield (x,), lhs, rhs

    def ax_III():
        for x, y, z in product(els, repeat=3):
            yx, xy = b(x, y)
            zxy, xyz = b(xy, z)
            lhs = I.kron(q.X[(xy, z)]) @ q.X[(x, y)].kron(I)
            lhs = q.X[(yx, zxy)].kron(I) @ lhs
            zy, yz = b(y, z)
            rhs = q.X[(x, zy)].kron(I) @ I.kron(q.X[(y, z)])
            rhs = I.kron(q.X[(b.down(x, zy), yz)]) @ rhs
            yield (x, y, z), lhs, rhs

    def ax_IV():
        for x, y in product(els, repeat=2):
            lhs = q.N[b.up(x, y)].kron(I) @ I.kron(q.X[(x, y)])
            rhs = I.kron(q.N[y]) @ q.Xinv(b.down(x, y), y).kron(I)
            yield (x, y), lhs, rhs

    def ax_IVp():
        for x, y in product(els, repeat=2):
            lhs = q.N[x].kron(I) @ I.kron(q.Xinv(x, b.up(x, y)))
            rhs = I.kron(q.N[b.down(x, y)]) @ q.X[(x, y)].kron(I)
            yield (x, y), lhs, rhs

    def ax_V():
        for x in els:
            yield (x, "right"), I.kron(q.N[x]) @ q.U[x].kron(I), I
            yield (x, "left"), q.N[x].kron(I) @ I.kron(q.U[x]), I

    def ax_VI():
        target = I.scale(q.delta)
        for x in els:
            m, cur = q.kink(x), pi(x)
            for _ in range(b.rank - 1):
                m = q.kink(cur) @ m
                cur = pi(cur)
            yield (x,), m, target

    checks = {"I": ax_I, "III": ax_III, "IV": ax_IV, "IV'": ax_IVp, "V": ax_V, "VI": ax_VI}
    for name in axioms:
        if name == "II":
            continue
        if name in ("IV", "IV'") and not inverses.ok:
            rep.results[name] = AxiomResult(False, inverses.witness, detail="needs invertible X")
            continue
        rep.results[name] = _first_failure(checks[name]())
    rep.results = {k: rep.results[k] for k in AXIOMS if k in rep.results}
    return rep


# -- evaluation ---------------------------------------------------------------------


def _piece_matrix(q, piece, before, after, pos):
    if piece == "cup":
        return q.U[after[pos]]
    if piece == "cap":
        return q.N[before[pos]]
    if piece == "xpos":
        return q.X[(before[pos], before[pos + 1])]
    return q.Xinv(after[pos], after[pos + 1])


def evaluate(d, f, q):
    """Contract the diagram under labeling ``f``; a ``d^out x d^in`` matrix.

    Works entry by entry on basis tuples so cost tracks the number of
    non-zero paths rather than the full Kronecker width.
    """
    dim = q.dim
    one = q.one()
    fix = q.proto._fix
    state = {(t, t): one for t in product(range(dim), repeat=d.boundary_in)}
    for piece, pos, before, after in replay(d, q.birack, f):
        M = _piece_matrix(q, piece, before, after, pos)
        new = {}
        if piece == "cap":
            for (inp, cur), c in state.items():
                v = M[0, cur[pos] * dim + cur[pos + 1]]
                if v:
                    key = (inp, cur[:pos] + cur[pos + 2:])
                    new[key] = fix(new.get(key, 0) + c * v) if key in new else fix(c * v)
        elif piece == "cup":
            col = [(r, v) for r, _, v in M.nonzero_entries()]
            for (inp, cur), c in state.items():
                for r, v in col:
                    key = (inp, cur[:pos] + (r // dim, r % dim) + cur[pos:])
                    new[key] = fix(new[key] + c * v) if key in new else fix(c * v)
        else:
            cols = {}
            for r, cc, v in M.nonzero_entries():
                cols.setdefault(cc, []).append((r, v))
            for (inp, cur), c in state.items():
                for r, v in cols.get(cur[pos] * dim + cur[pos + 1], ()):
                    key = (inp, cur[:pos] + (r // dim, r % dim) + cur[pos + 2:])
                    new[key] = fix(new[key] + c * v) if key in new else fix(c * v)
        state = {k: v for k, v in new.items() if v}
    rows, cols = dim ** d.boundary_out, dim ** d.boundary_in
    data = {}
    for (inp, cur), c in state.items():
        data[(_index(cur, dim), _index(inp, dim))] = c
    return q.proto.from_sparse(rows, cols, data)


def _index(t, dim):
    k = 0
    for v in t:
        k = k * dim + v
    return k


def evaluate_dense(d, f, q):
    """Reference evaluation: Kronecker product per slice, multiplied upward."""
    replay(d, q.birack, f)
    I = q.eye(q.dim)
    one = q.eye(1)
    total = q.eye(q.dim ** d.boundary_in)
    for s in range(len(d.slices)):
        before, after = f.levels[s], f.levels[s + 1]
        m = one
        for piece, i, o in d.placed(s):
            if piece == "id":
                part = I
            elif piece == "cup":
                part = q.U[after[o]]
            elif piece == "cap":
                part = q.N[before[i]]
            elif piece == "xpos":
                part = q.X[(before[i], before[i + 1])]
            else:
                part = q.Xinv(after[o], after[o + 1])
            m = m.kron(part)
        total = m @ total
    return total


def normalize(value, framing, q):
    """Divide out ``delta`` once per full turn: ``w = qN + r`` contributes ``delta^-q``."""
    n = q.birack.rank
    shift = -sum(w // n for w in framing)
    if shift == 0:
        return value
    return value.scale(q.power(q.delta, shift))


# -- invariants -----------------------------------------------------------------------


class SignatureMultiset:
    """Multiset of normalized matrices in canonical (rendered) order."""

    def __init__(self, values=()):
        self.counts = Counter(values)

    def items(self):
        return sorted(self.counts.items(), key=lambda kv: (kv[0].render(compact=True), kv[1]))

    @property
    def total(self):
        return sum(self.counts.values())

    def __len__(self):
        return self.total

    def __eq__(self, other):
        if isinstance(other, SignatureMultiset):
            return self.counts == other.counts
        return NotImplemented

    def __hash__(self):  # pragma: no cover - mutable container semantics
        return hash(tuple(self.items()))

    def render(self):
        parts = []
        for m, k in self.items():
            s = render_scalar_or_matrix(m)
            parts.append(s if k == 1 else f"{s} x{k}")
        return "{" + ", ".join(parts) + "}"

    def to_json(self):
        return [{"value": m.to_json(), "multiplicity": k} for m, k in self.items()]

    def __repr__(self):
        return f"SignatureMultiset({self.render()})"

    __str__ = render


def render_scalar_or_matrix(m, compact=False):
    if m.shape == (1, 1):
        v = m[0, 0]
        return str(v) if isinstance(v, int) else render_poly(v, compact)
    return m.render(compact)


def phi_qm(d, q, progress=None):
    """Normalized values over every kink vector in ``Z_N^c`` and labeling."""
    n = q.birack.rank
    c = trace_components(d).count
    out = []
    for r in product(range(n), repeat=c):
        dr = insert_kinks(d, r)
        framing = trace_components(dr).framing
        for f in enumerate_labelings(dr, q.birack):
            out.append(normalize(evaluate(dr, f, q), framing, q))
        if progress:
            progress(r)
    return SignatureMultiset(out)


def phi_q_polynomial(ms):
    """``sum of multiplicity * u^{signature}`` as a string."""
    terms = []
    for m, k in ms.items():
        sig = render_scalar_or_matrix(m, compact=True)
        term = f"u^{{{sig}}}"
        terms.append(term if k == 1 else f"{k}·{term}")
    return " + ".join(terms) if terms else "0"


def classify_weight(q):
    """Homogeneity flags and a per-pair Yang-Baxter check."""
    els = list(q.birack.elements)
    homog = (
        len({q.X[k] for k in q.X}) == 1
        and len({q.N[x] for x in els}) == 1
        and len({q.U[x] for x in els}) == 1
    )
    I = q.eye(q.dim)
    ybe = {}
    for key, X in sorted(q.X.items()):
        lhs = I.kron(X) @ X.kron(I) @ I.kron(X)
        rhs = X.kron(I) @ I.kron(X) @ X.kron(I)
        ybe[key] = lhs == rhs
    return {
        "homogeneous": homog,
        "heterogeneous": not homog,
        "strongly_heterogeneous": not homog and not all(ybe.values()),
        "ybe": ybe,
    }
