"""Finite involutory biracks on {1..n}.

A birack is stored through its operation matrices ``U`` and ``L`` with
``B(i, j) = (U[j][i], L[i][j])`` (so ``U`` is read transposed, ``y^x`` sits in
row ``y``).  Every constructor validates eagerly; there is no raw constructor.
"""

from __future__ import annotations

from itertools import product

from .errors import AxiomViolation, InvalidConstantAction, InvalidTSR, ParseError

__all__ = [
    "Birack",
    "birack_from_matrix",
    "birack_from_map",
    "constant_action",
    "tsr_birack",
    "birack_maps",
    "perm_from_cycles",
]


def _perm_order(perm):
    k, cur = 1, list(perm)
    ident = list(range(1, len(perm) + 1))
    while cur != ident:
        cur = [perm[c - 1] for c in cur]
        k += 1
    return k


def perm_from_cycles(n, cycles=()):
    """``perm_from_cycles(3, [(1, 2)])`` -> ``(2, 1, 3)`` (image list, 1-based)."""
    img = list(range(1, n + 1))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a - 1] = b
    return tuple(img)


class Birack:
    """Validated involutory birack; build with :func:`birack_from_matrix`."""

    __slots__ = (
        "n", "U", "L", "table", "inv_table", "alpha", "pi", "rank",
        "sideways_witness", "_perm", "_key",
    )

    def __init__(self, U, L, _token=None):
        if _token is not _VALIDATE:
            raise TypeError("use birack_from_matrix() to build a Birack")
        n = len(U)
        self.n = n
        self.U = tuple(tuple(r) for r in U)
        self.L = tuple(tuple(r) for r in L)
        els = range(1, n + 1)
        self.table = {(i, j): (self.U[j - 1][i - 1], self.L[i - 1][j - 1]) for i in els for j in els}
        self._validate()
        self.inv_table = {v: k for k, v in self.table.items()}
        # S = tau B tau = B^{-1}; (S Delta)(x) = (x_x, x^x)
        s_delta = [self.inv_table[(x, x)] for x in els]
        second = {s_delta[x - 1][1]: x for x in els}
        self.alpha = tuple(second[x] for x in els)
        self.pi = tuple(s_delta[self.alpha[x - 1] - 1][0] for x in els)
        self.rank = _perm_order(self.pi)
        self.sideways_witness = self._sideways()
        self._perm = tuple((a - 1) * n + (b - 1) for a, b in (self.table[(i, j)] for i in els for j in els))
        self._key = (self.U, self.L)

    # -- axioms ------------------------------------------------------------
    def _validate(self):
        n, B = self.n, self.table
        els = range(1, n + 1)
        for (i, j), (k, l) in B.items():
            if not (1 <= k <= n and 1 <= l <= n):
                raise AxiomViolation("range", (i, j), f"B{(i, j)} = {(k, l)} leaves 1..{n}")
        seen = {}
        for pair, img in B.items():
            if img in seen:
                raise AxiomViolation("invertible", (seen[img], pair), f"both map to {img}")
            seen[img] = pair
        for x, y in product(els, repeat=2):
            a, b = B[(x, y)]
            if B[(b, a)] != (y, x):
                raise AxiomViolation("i", (x, y), "(tau B)^2 != I")
        for comp in (0, 1):
            img = {}
            for x in els:
                v = B[(x, x)][1 - comp]  # tau B Delta(x) = (x_x, x^x)
                if v in img:
                    raise AxiomViolation("ii", (img[v], x), f"component {comp + 1} of tau B Delta not injective")
                img[v] = x
        for x, y, z in product(els, repeat=3):
            a, b = B[(x, y)]
            b2, c = B[(b, z)]
            a2, b3 = B[(a, b2)]
            lhs = (a2, b3, c)
            p, q = B[(y, z)]
            r, p2 = B[(x, p)]
            p3, q2 = B[(p2, q)]
            rhs = (r, p3, q2)
            if lhs != rhs:
                raise AxiomViolation("iii", (x, y, z), f"{lhs} != {rhs}")

    def _sideways(self):
        # y -> y^x must be a bijection for each x; equivalently B(x_y, y) = (y^x, x)
        n = self.n
        for x in range(1, n + 1):
            seen = {}
            for y in range(1, n + 1):
                v = self.table[(x, y)][0]
                if v in seen:
                    return (x, seen[v], y)
                seen[v] = y
        return None

    # -- accessors ---------------------------------------------------------
    @property
    def elements(self):
        return range(1, self.n + 1)

    def __call__(self, x, y):
        return self.table[(x, y)]

    def inv(self, x, y):
        return self.inv_table[(x, y)]

    def up(self, x, y):
        """``y^x = B_1(x, y)``."""
        return self.table[(x, y)][0]

    def down(self, x, y):
        """``x_y = B_2(x, y)``."""
        return self.table[(x, y)][1]

    @property
    def is_sideways_bijective(self):
        return self.sideways_witness is None

    @property
    def is_bikei(self):
        return self.rank == 1

    @property
    def is_kei(self):
        return self.rank == 1 and all(self.down(x, y) == x for x in self.elements for y in self.elements)

    def pair_permutation(self):
        """B as a permutation of 0-based pair indices ``(i-1)*n + (j-1)``."""
        return self._perm

    def to_matrix(self):
        return [list(r) for r in self.U], [list(r) for r in self.L]

    def block_matrix(self):
        """Rows of ``[U | L]`` as printed in the literature."""
        return [list(self.U[i]) + list(self.L[i]) for i in range(self.n)]

    def to_json(self):
        U, L = self.to_matrix()
        return {"n": self.n, "U": U, "L": L}

    def relabel(self, perm):
        """Isomorphic copy under the element bijection ``x -> perm[x-1]``."""
        mapping = {}
        for (x, y), (a, b) in self.table.items():
            mapping[(perm[x - 1], perm[y - 1])] = (perm[a - 1], perm[b - 1])
        return birack_from_map(self.n, mapping)

    def __eq__(self, other):
        return isinstance(other, Birack) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Birack(n={self.n}, M={self.block_matrix()})"


_VALIDATE = object()


def _check_square(name, m, n=None):
    if not isinstance(m, (list, tuple)) or not m:
        raise ParseError(f"{name} must be a non-empty square matrix")
    size = len(m) if n is None else n
    if len(m) != size or any(len(r) != size for r in m):
        raise ParseError(f"{name} must be {size}x{size}")
    if any(not isinstance(v, int) for r in m for v in r):
        raise ParseError(f"{name} entries must be integers")


def birack_from_matrix(U, L):
    """Validate the operation matrices ``U``, ``L`` and build the birack."""
    _check_square("U", U)
    _check_square("L", L, len(U))
    return Birack(U, L, _token=_VALIDATE)


def birack_from_map(n, mapping):
    """Build from ``{(x, y): (y^x, x_y)}`` (1-based)."""
    U = [[mapping[(i, j)][0] for i in range(1, n + 1)] for j in range(1, n + 1)]
    L = [[mapping[(i, j)][1] for j in range(1, n + 1)] for i in range(1, n + 1)]
    return birack_from_matrix(U, L)


def birack_from_json(doc):
    try:
        n, U, L = doc["n"], doc["U"], doc["L"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"birack document needs keys n, U, L ({exc})") from None
    if len(U) != n:
        raise ParseError(f"n={n} but U has {len(U)} rows")
    return birack_from_matrix(U, L)


def _is_perm(p, n):
    return len(p) == n and sorted(p) == list(range(1, n + 1))


def constant_action(n, sigma, tau):
    """``B(x, y) = (sigma(y), tau(x))`` for commuting involutions sigma, tau."""
    sigma, tau = tuple(sigma), tuple(tau)
    for name, p in (("sigma", sigma), ("tau", tau)):
        if not _is_perm(p, n):
            raise InvalidConstantAction(f"{name} is not a permutation of 1..{n}")
        if any(p[p[x] - 1] != x + 1 for x in range(n)):
            raise InvalidConstantAction(f"{name} is not an involution")
    if any(sigma[tau[x] - 1] != tau[sigma[x] - 1] for x in range(n)):
        raise InvalidConstantAction("sigma and tau do not commute")
    return birack_from_map(n, {(x, y): (sigma[y - 1], tau[x - 1]) for x in range(1, n + 1) for y in range(1, n + 1)})


TSR_RELATIONS = ("s^2 - s(1 - tr)", "1 - t^2", "1 - r^2", "(t + r)s", "(1 - r)s")


def tsr_relations(n, t, s, r):
    vals = (s * s - s * (1 - t * r), 1 - t * t, 1 - r * r, (t + r) * s, (1 - r) * s)
    return [name for name, v in zip(TSR_RELATIONS, vals) if v % n]


def tsr_birack(n, t, s, r):
    """``B(x, y) = (t*y + s*x, r*x)`` on Z_n, element k relabeled k+1."""
    bad = tsr_relations(n, t, s, r)
    if bad:
        raise InvalidTSR(bad)
    mapping = {}
    for x in range(n):
        for y in range(n):
            mapping[(x + 1, y + 1)] = ((t * y + s * x) % n + 1, (r * x) % n + 1)
    return birack_from_map(n, mapping)


def birack_maps(b):
    """Derived data: sideways map S, alpha, pi and rank N."""
    return {"S": dict(b.inv_table), "alpha": b.alpha, "pi": b.pi, "rank": b.rank}
