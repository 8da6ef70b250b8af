"""Exhaustive searches: small biracks, braid weights, scalar / Z_p quantum weights."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from itertools import permutations, product

from .birack import birack_from_map
from .bweight import BraidWeight, verify_braid_weight
from .errors import AxiomViolation, RefusedBudget, UnsupportedSize
from .qweight import QuantumWeight, classify_weight, verify_weight
from .ring import LaurentPoly, ModMatrix, RingMatrix

__all__ = [
    "enumerate_biracks",
    "search_braid_weights",
    "search_quantum_weights",
    "estimate_quantum_search",
    "write_jsonl",
    "default_workers",
]

MAX_BIRACK_SIZE = 3


def default_workers():
    try:
        return max(1, int(os.environ.get("BIRACKFORGE_WORKERS", "1")))
    except ValueError:
        return 1


def _involutions(items):
    """All involutions of ``items`` as dicts."""
    items = list(items)
    if not items:
        yield {}
        return
    a, rest = items[0], items[1:]
    for inv in _involutions(rest):
        yield {a: a, **inv}
    for i, b in enumerate(rest):
        for inv in _involutions(rest[:i] + rest[i + 1:]):
            yield {a: b, b: a, **inv}


def _canonical(b):
    """Smallest block matrix over all relabelings (isomorphism class key)."""
    best = None
    for perm in permutations(range(1, b.n + 1)):
        key = tuple(map(tuple, b.relabel(perm).block_matrix()))
        if best is None or key < best:
            best = key
    return best


def enumerate_biracks(n, dedup=False, sideways_only=False):
    """Every involutory birack on ``{1..n}``, ``n <= 3``.

    ``(tau B)^2 = I`` means ``tau B`` is an involution of the pair set, so the
    candidates are ``B = tau T`` for involutions ``T``; each is then fully
    validated.
    """
    if not 1 <= n <= MAX_BIRACK_SIZE:
        raise UnsupportedSize(f"birack enumeration supports 1 <= n <= {MAX_BIRACK_SIZE}, got {n}")
    pairs = [(x, y) for x in range(1, n + 1) for y in range(1, n + 1)]
    found, seen = [], set()
    for T in _involutions(pairs):
        mapping = {p: (T[p][1], T[p][0]) for p in pairs}
        try:
            b = birack_from_map(n, mapping)
        except AxiomViolation:
            continue
        if sideways_only and not b.is_sideways_bijective:
            continue
        if dedup:
            key = _canonical(b)
            if key in seen:
                continue
            seen.add(key)
        found.append(b)
    found.sort(key=lambda b: b.block_matrix())
    return found


# -- braid weights --------------------------------------------------------------------

TEMPLATES = {
    "scalar": (1, lambda v, one, zero: [[v]]),
    "antidiag": (2, lambda v, one, zero: [[zero, one], [v, zero]]),
    "diag": (2, lambda v, one, zero: [[one, zero], [zero, v]]),
}


def search_braid_weights(birack, strands, template="antidiag", variables=("x", "y", "z", "w"),
                         signed=False, include_one=True, limit=None):
    """Braid weights whose blocks follow ``template`` with one entry each.

    Each generator slot ``(j, x, y)`` receives a value from the pool: ``1``
    (when ``include_one``) or a variable, optionally negated.  Variables are
    introduced in restricted-growth order so renamings are found once.
    """
    dim, shape = TEMPLATES[template]
    els = list(birack.elements)
    slots = [(j, x, y) for j in range(1, strands) for x in els for y in els]
    index = {s: i for i, s in enumerate(slots)}
    vs = tuple(sorted(variables))
    one = LaurentPoly.constant(1, vs)
    zero = LaurentPoly.constant(0, vs)
    var = {v: LaurentPoly.var(v, vs) for v in variables}

    relations = []  # (max slot index, check)
    for j in range(1, strands - 1):
        for x, y, z in product(els, repeat=3):
            yx, xy = birack(x, y)
            zy, yz = birack(y, z)
            lhs = [(j, x, y), (j + 1, xy, z), (j, yx, birack.up(xy, z))]
            rhs = [(j + 1, y, z), (j, x, zy), (j + 1, birack.down(x, zy), yz)]
            relations.append(("braid", lhs, rhs))
    for j, k in product(range(1, strands), repeat=2):
        if abs(j - k) < 2:
            continue
        for x, y, u, v in product(els, repeat=4):
            relations.append(("far", [(j, x, y), (k, u, v)], [(k, u, v), (j, x, y)]))
    by_depth = {}
    for rel in relations:
        depth = max(index[s] for s in rel[1] + rel[2])
        by_depth.setdefault(depth, []).append(rel)

    def prod_of(mats, seq):
        m = mats[seq[0]]
        for s in seq[1:]:
            m = m @ mats[s]
        return m

    results = []
    mats = {}

    def values(used):
        opts = [(one, False)] if include_one else []
        for i, name in enumerate(variables[:used + 1]):
            opts.append((var[name], i == used))
            if signed:
                opts.append((-var[name], i == used))
        return opts

    def rec(i, used):
        if limit is not None and len(results) >= limit:
            return
        if i == len(slots):
            sigma = dict(mats)
            w = BraidWeight(birack, strands, dim, sigma, vs)
            rep = verify_braid_weight(w)
            if rep.ok:
                results.append(w)
            return
        for val, grows in values(used):
            m = RingMatrix.from_rows(shape(val, one, zero), vs)
            try:
                m.inverse()
            except Exception:
                continue
            mats[slots[i]] = m
            if all(prod_of(mats, l) == prod_of(mats, r) for _, l, r in by_depth.get(i, ())):
                rec(i + 1, used + (1 if grows else 0))
            del mats[slots[i]]

    rec(0, 0)
    return results


# -- quantum weights over Z_p -----------------------------------------------------------


def estimate_quantum_search(n, dim, p):
    """Upper bound on candidates: caps, then crossing matrices."""
    units = p - 1
    if dim == 1:
        return units ** n * units ** (n * n)
    return (p ** (dim * dim)) ** n * (p ** (dim ** 4)) ** (n * n)


def _zp_weight(birack, dim, p, X, N, U, delta):
    return QuantumWeight(birack, dim, X, N, U, delta, modulus=p)


def _scalar_candidates(birack, p, fix_unit_caps):
    els = list(birack.elements)
    units = range(1, p)
    caps = [tuple(1 for _ in els)] if fix_unit_caps else list(product(units, repeat=len(els)))
    return els, caps, list(units)


def _search_scalar_chunk(args):
    birack, p, fix_unit_caps, caps_chunk = args
    els = list(birack.elements)
    units = list(range(1, p))
    pairs = [(x, y) for x in els for y in els]
    out = []
    for caps in caps_chunk:
        Nv = dict(zip(els, caps))
        Uv = {x: pow(Nv[x], -1, p) for x in els}  # forced by (V)
        for vals in product(units, repeat=len(pairs)):
            Xv = dict(zip(pairs, vals))
            # (IV) scalar form: N_{y^x} X_{x,y} = N_y X_{x_y,y}^{-1}
            ok = True
            for x, y in pairs:
                yx, xy = birack(x, y)
                if (Nv[yx] * Xv[(x, y)] * Xv[(xy, y)] - Nv[y]) % p:
                    ok = False
                    break
            if not ok:
                continue
            q = _zp_weight(
                birack, 1, p,
                {k: ModMatrix(1, 1, [v], p) for k, v in Xv.items()},
                {x: ModMatrix(1, 1, [Nv[x]], p) for x in els},
                {x: ModMatrix(1, 1, [Uv[x]], p) for x in els},
                1,
            )
            # delta is read off the kink product and must be uniform
            deltas = set()
            for x in els:
                m, cur = q.kink(x), birack.pi[x - 1]
                for _ in range(birack.rank - 1):
                    m = q.kink(cur) @ m
                    cur = birack.pi[cur - 1]
                deltas.add(m[0, 0])
            if len(deltas) != 1:
                continue
            delta = deltas.pop()
            if delta == 0 or (fix_unit_caps and delta != 1):
                continue
            q.delta = delta
            if verify_weight(q).ok:
                out.append(q)
    return out


def search_quantum_weights(birack, dim=1, modulus=5, budget=10 ** 6, fix_unit_caps=False, workers=None):
    """All ``Z_p`` quantum weights of the given dimension (exhaustive).

    Pruning goes (V) -> (II) -> (IV)/(IV') -> (III) -> (VI) -> (I).  The
    candidate count is estimated first and the search refuses to start if it
    exceeds ``budget``.
    """
    p = modulus
    n = birack.n
    estimate = (p - 1) ** (n * n) if fix_unit_caps and dim == 1 else estimate_quantum_search(n, dim, p)
    if estimate > budget:
        raise RefusedBudget(estimate, budget)
    workers = workers or default_workers()
    if dim == 1:
        els, caps, _ = _scalar_candidates(birack, p, fix_unit_caps)
        chunks = [caps[i::workers] for i in range(workers)] if workers > 1 else [caps]
        jobs = [(birack, p, fix_unit_caps, c) for c in chunks if c]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                parts = list(ex.map(_search_scalar_chunk, jobs))
        else:
            parts = [_search_scalar_chunk(j) for j in jobs]
        found = [q for part in parts for q in part]
    else:
        found = _search_dense(birack, dim, p)
    found.sort(key=lambda q: json.dumps(q.to_json(), sort_keys=True))
    return found


def _search_dense(birack, dim, p):
    """Generic backtracking for ``dim >= 2`` (only feasible for tiny ``p``)."""
    els = list(birack.elements)
    d2 = dim * dim
    I = ModMatrix.identity(dim, p)
    cup_cap = []
    for nv in product(range(p), repeat=d2):
        N = ModMatrix(1, d2, nv, p)
        for uv in product(range(p), repeat=d2):
            U = ModMatrix(d2, 1, uv, p)
            if I.kron(N) @ U.kron(I) == I and N.kron(I) @ I.kron(U) == I:
                cup_cap.append((N, U))
    mats = []
    for xv in product(range(p), repeat=d2 * d2):
        M = ModMatrix(d2, d2, xv, p)
        if M.det() % p:
            mats.append(M)
    pairs = [(x, y) for x in els for y in els]
    found = []
    for nu in product(cup_cap, repeat=len(els)):
        N = {x: nu[i][0] for i, x in enumerate(els)}
        U = {x: nu[i][1] for i, x in enumerate(els)}
        for choice in product(mats, repeat=len(pairs)):
            X = dict(zip(pairs, choice))
            q = _zp_weight(birack, dim, p, X, N, U, 1)
            rep = verify_weight(q, axioms=("IV", "IV'", "III"))
            if not rep.ok:
                continue
            m = q.kink(els[0])
            cur = birack.pi[0]
            for _ in range(birack.rank - 1):
                m = q.kink(cur) @ m
                cur = birack.pi[cur - 1]
            q.delta = m[0, 0]
            if q.delta and verify_weight(q).ok:
                found.append(q)
    return found


def write_jsonl(items, stream):
    """One JSON document per line; weights carry their classification."""
    for item in items:
        doc = item.to_json()
        if isinstance(item, QuantumWeight):
            cls = classify_weight(item)
            doc["classification"] = {k: v for k, v in cls.items() if k != "ybe"}
        stream.write(json.dumps(doc, sort_keys=True) + "\n")
