"""Exact Laurent polynomials over Q and dense matrices over them.

Two scalar species live here:

* :class:`LaurentPoly` -- multivariate Laurent polynomials with rational
  coefficients over a fixed, ordered variable list.
* plain ``int`` residues modulo ``p``, used by :class:`ModMatrix` for the
  small-field weight searches.

:class:`RingMatrix` and :class:`ModMatrix` expose the same method surface
(``@``, ``kron``, ``inverse``, ``trace``, ``eye`` ...) so that weight axioms
and diagram evaluation can be written once.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import NotAUnit, NotInvertibleOverRing, ParseError, ShapeError, VariableMismatch

__all__ = [
    "LaurentPoly",
    "RingMatrix",
    "ModMatrix",
    "poly_arith",
    "poly_invert",
    "mat_op",
    "mat_inverse",
    "parse_poly",
]


def _norm_coef(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class LaurentPoly:
    """Immutable Laurent polynomial ``sum c_e * x^e`` with ``e`` in Z^k.

    ``terms`` maps exponent tuples (one slot per entry of ``variables``) to
    nonzero rationals.  Arithmetic requires identical variable lists;
    plain ints and Fractions are coerced as constants.
    """

    __slots__ = ("_terms", "_vars", "_hash")

    def __init__(self, terms=None, variables=()):
        self._vars = tuple(variables)
        k = len(self._vars)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != k:
                raise ValueError(f"exponent {e} does not match variables {self._vars}")
            c = _norm_coef(c)
            if c:
                clean[e] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms, variables):
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p._terms = terms
        p._vars = variables
        p._hash = None
        return p

    @classmethod
    def constant(cls, c, variables=()):
        variables = tuple(variables)
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def var(cls, name, variables):
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls({tuple(e): 1}, variables)

    @classmethod
    def monomial(cls, coef, exponents, variables):
        return cls({tuple(exponents): coef}, variables)

    @property
    def variables(self):
        return self._vars

    @property
    def terms(self):
        return dict(self._terms)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other._vars != self._vars:
                raise VariableMismatch(self._vars, other._vars)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other, self._vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm_coef(s)
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out, self._vars)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()}, self._vars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if not a or not b:
            return LaurentPoly._raw({}, self._vars)
        if len(a) < len(b):
            a, b = b, a
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple([x + y for x, y in zip(e1, e2)])
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return LaurentPoly._raw({e: _norm_coef(c) for e, c in out.items()}, self._vars)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_unit():
            ((e, c),) = self._terms.items()
            return LaurentPoly._raw({tuple(x * k for x in e): _norm_coef(Fraction(c) ** k)}, self._vars)
        result = LaurentPoly.constant(1, self._vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self):
        return not self._terms

    def is_unit(self):
        return len(self._terms) == 1

    def inverse(self):
        """Inverse of a unit, i.e. of a single nonzero term."""
        if len(self._terms) != 1:
            raise NotAUnit(f"{self} is not a unit (has {len(self._terms)} terms)")
        ((e, c),) = self._terms.items()
        return LaurentPoly._raw({tuple(-x for x in e): _norm_coef(1 / Fraction(c))}, self._vars)

    def constant_term(self):
        return self._terms.get((0,) * len(self._vars), 0)

    def is_constant(self):
        return all(not any(e) for e in self._terms)

    def extend(self, variables):
        """Re-express over a superset variable list."""
        variables = tuple(variables)
        missing = [v for v in self._vars if v not in variables]
        if missing:
            raise VariableMismatch(self._vars, variables)
        idx = [variables.index(v) for v in self._vars]
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(variables)
            for i, x in zip(idx, e):
                ne[i] = x
            out[tuple(ne)] = c
        return LaurentPoly._raw(out, variables)

    def substitute(self, mapping):
        """Rename variables by ``mapping`` (old -> new name); list order kept."""
        return LaurentPoly._raw(dict(self._terms), tuple(mapping.get(v, v) for v in self._vars))

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._vars == other._vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self._terms == {(0,) * len(self._vars): other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: t[0], reverse=True)

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"LaurentPoly({render_poly(self)!r}, {list(self._vars)!r})"


def _render_term(e, c, variables):
    factors = []
    for name, x in zip(variables, e):
        if x == 1:
            factors.append(name)
        elif x:
            factors.append(f"{name}^{x}")
    mag = abs(c)
    if not factors:
        return str(mag)
    if mag != 1:
        factors.insert(0, str(mag))
    return "*".join(factors)


def render_poly(p, compact=False):
    """Canonical text: terms in descending lexicographic exponent order."""
    items = p.sorted_terms()
    if not items:
        return "0"
    parts = []
    for i, (e, c) in enumerate(items):
        body = _render_term(e, c, p.variables)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    s = "".join(parts)
    return s.replace(" ", "") if compact else s


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*^(){}]))"
)


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at {pos} in {text!r}")
        pos = m.end()
        kind = m.lastgroup
        val = m.group(kind)
        if kind == "op" and val == "**":
            val = "^"
        out.append((kind, val))
    return out


def _parse_terms(text):
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial")
    i = 0
    terms = []  # list of (coef, {name: exp})

    def parse_exponent():
        nonlocal i
        close = None
        if i < len(toks) and toks[i][1] in "({":
            close = ")" if toks[i][1] == "(" else "}"
            i += 1
        sign = 1
        while i < len(toks) and toks[i][1] in "+-":
            if toks[i][1] == "-":
                sign = -sign
            i += 1
        if i >= len(toks) or toks[i][0] != "num" or "/" in toks[i][1]:
            raise ParseError(f"expected integer exponent in {text!r}")
        val = sign * int(toks[i][1])
        i += 1
        if close:
            if i >= len(toks) or toks[i][1] != close:
                raise ParseError(f"unbalanced exponent bracket in {text!r}")
            i += 1
        return val

    sign = 1
    expect_term = True
    while i < len(toks):
        kind, val = toks[i]
        if expect_term:
            if val in "+-" and kind == "op":
                if val == "-":
                    sign = -sign
                i += 1
                continue
            coef = Fraction(sign)
            exps = {}
            need_factor = True
            while i < len(toks):
                kind, val = toks[i]
                if need_factor:
                    if kind == "num":
                        coef *= Fraction(val)
                        i += 1
                    elif kind == "name":
                        i += 1
                        e = 1
                        if i < len(toks) and toks[i][1] == "^":
                            i += 1
                            e = parse_exponent()
                        exps[val] = exps.get(val, 0) + e
                    else:
                        raise ParseError(f"unexpected {val!r} in {text!r}")
                    need_factor = False
                elif val == "*":
                    i += 1
                    need_factor = True
                elif kind in ("name", "num"):
                    need_factor = True  # implicit multiplication, e.g. "2A"
                else:
                    break
            if need_factor:
                raise ParseError(f"dangling operator in {text!r}")
            terms.append((coef, exps))
            sign = 1
            expect_term = False
        else:
            if kind == "op" and val in "+-":
                expect_term = True
                continue
            raise ParseError(f"unexpected {val!r} in {text!r}")
    if expect_term:
        raise ParseError(f"dangling sign in {text!r}")
    return terms


def parse_poly(text, variables=None):
    """Parse polynomial text such as ``"a^-2 - b^2"`` or ``"-A^3"``.

    With ``variables`` omitted, the variable list is the sorted set of names
    appearing in ``text``.
    """
    if isinstance(text, (int, Fraction)):
        return LaurentPoly.constant(text, variables or ())
    terms = _parse_terms(str(text))
    names = sorted({n for _, ex in terms for n in ex})
    if variables is None:
        variables = tuple(names)
    variables = tuple(variables)
    unknown = [n for n in names if n not in variables]
    if unknown:
        raise ParseError(f"unknown variable(s) {unknown} for variable list {list(variables)}")
    out = LaurentPoly({}, variables)
    for coef, ex in terms:
        e = [0] * len(variables)
        for n, x in ex.items():
            e[variables.index(n)] += x
        out = out + LaurentPoly({tuple(e): coef}, variables)
    return out


LaurentPoly.parse = staticmethod(parse_poly)


def poly_arith(op, p, q):
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def poly_invert(p):
    return p.inverse()


class _MatrixBase:
    """Shared dense-matrix logic; subclasses define the scalar ring."""

    __slots__ = ("rows", "cols", "entries")

    # -- ring hooks --------------------------------------------------------
    def _zero(self):
        raise NotImplementedError

    def _one(self):
        raise NotImplementedError

    def _fix(self, x):
        return x

    def _new(self, rows, cols, entries):
        raise NotImplementedError

    def _unit_inverse(self, x):
        raise NotImplementedError

    # -- structure ---------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r * self.cols + c]

    def tolist(self):
        return [list(self.entries[r * self.cols:(r + 1) * self.cols]) for r in range(self.rows)]

    def nonzero_entries(self):
        z = self._zero()
        return [(i // self.cols, i % self.cols, v) for i, v in enumerate(self.entries) if v != z]

    def eye(self, n):
        z, o = self._zero(), self._one()
        return self._new(n, n, [o if i == j else z for i in range(n) for j in range(n)])

    def zeros(self, rows, cols):
        return self._new(rows, cols, [self._zero()] * (rows * cols))

    def from_sparse(self, rows, cols, data):
        ent = [self._zero()] * (rows * cols)
        for (r, c), v in data.items():
            ent[r * cols + c] = self._fix(v)
        return self._new(rows, cols, ent)

    def __eq__(self, other):
        if not isinstance(other, _MatrixBase):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.entries)))

    # -- arithmetic --------------------------------------------------------
    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        z = self._zero()
        n, m, k = self.rows, other.cols, self.cols
        right = [[(c, v) for c in range(m) if (v := other.entries[j * m + c]) != z] for j in range(k)]
        out = []
        for r in range(n):
            acc = {}
            row = self.entries[r * k:(r + 1) * k]
            for j, a in enumerate(row):
                if a == z:
                    continue
                for c, b in right[j]:
                    acc[c] = acc[c] + a * b if c in acc else a * b
            out.extend(self._fix(acc[c]) if c in acc else z for c in range(m))
        return self._new(n, m, out)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return self._new(self.rows, self.cols, [self._fix(a + b) for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return self._new(self.rows, self.cols, [self._fix(a - b) for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s):
        return self._new(self.rows, self.cols, [self._fix(s * a) for a in self.entries])

    def kron(self, other):
        z = self._zero()
        r1, c1, r2, c2 = self.rows, self.cols, other.rows, other.cols
        out = [z] * (r1 * r2 * c1 * c2)
        width = c1 * c2
        for (i, j, a) in self.nonzero_entries():
            for (k, l, b) in other.nonzero_entries():
                out[(i * r2 + k) * width + j * c2 + l] = self._fix(a * b)
        return self._new(r1 * r2, c1 * c2, out)

    def transpose(self):
        return self._new(self.cols, self.rows, [self[r, c] for c in range(self.cols) for r in range(self.rows)])

    def trace(self):
        if self.rows != self.cols:
            raise ShapeError(f"trace of non-square {self.shape} matrix")
        t = self._zero()
        for i in range(self.rows):
            t = t + self[i, i]
        return self._fix(t)

    def det(self):
        if self.rows != self.cols:
            raise ShapeError(f"determinant of non-square {self.shape} matrix")
        return self._fix(_det_by_minors(self, list(range(self.rows)), list(range(self.cols)), {}))

    def inverse(self):
        """Inverse as adj(m) / det(m); requires det(m) to be a unit."""
        n = self.rows
        if n != self.cols:
            raise ShapeError(f"inverse of non-square {self.shape} matrix")
        d = self.det()
        try:
            dinv = self._unit_inverse(d)
        except (NotAUnit, ZeroDivisionError, ValueError):
            raise NotInvertibleOverRing(f"determinant {d} is not a unit") from None
        if n == 1:
            return self._new(1, 1, [dinv])
        memo = {}
        ent = [None] * (n * n)
        idx = list(range(n))
        for i in range(n):
            for j in range(n):
                rows = idx[:j] + idx[j + 1:]
                cols = idx[:i] + idx[i + 1:]
                minor = _det_by_minors(self, rows, cols, memo)
                if (i + j) % 2:
                    minor = -minor
                ent[i * n + j] = self._fix(minor * dinv)
        inv = self._new(n, n, ent)
        if self @ inv != self.eye(n):
            raise NotInvertibleOverRing("adjugate check failed")  # pragma: no cover
        return inv


def _det_by_minors(m, rows, cols, memo):
    # Laplace expansion along the first listed row, memoised on the column set
    key = (tuple(rows), tuple(cols))
    if key in memo:
        return memo[key]
    z = m._zero()
    if len(rows) == 1:
        val = m[rows[0], cols[0]]
    else:
        val = z
        r0, rest = rows[0], rows[1:]
        for k, c in enumerate(cols):
            a = m[r0, c]
            if a == z:
                continue
            sub = _det_by_minors(m, rest, cols[:k] + cols[k + 1:], memo)
            if sub == z:
                continue
            term = a * sub
            val = val - term if k % 2 else val + term
    memo[key] = val
    return val


class RingMatrix(_MatrixBase):
    """Dense row-major matrix of :class:`LaurentPoly` over one variable list."""

    __slots__ = ("variables",)

    def __init__(self, rows, cols, entries, variables=None):
        entries = list(entries)
        if len(entries) != rows * cols:
            raise ShapeError(f"{len(entries)} entries for a {rows}x{cols} matrix")
        if variables is None:
            variables = next((e.variables for e in entries if isinstance(e, LaurentPoly)), ())
        variables = tuple(variables)
        fixed = []
        for e in entries:
            if isinstance(e, LaurentPoly):
                if e.variables != variables:
                    raise VariableMismatch(variables, e.variables)
                fixed.append(e)
            elif isinstance(e, str):
                fixed.append(parse_poly(e, variables))
            else:
                fixed.append(LaurentPoly.constant(e, variables))
        self.rows, self.cols, self.entries, self.variables = rows, cols, tuple(fixed), variables

    @classmethod
    def from_rows(cls, rows, variables=None):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged rows")
        if variables is None:
            names = set()
            for r in rows:
                for e in r:
                    if isinstance(e, LaurentPoly):
                        names.update(e.variables)
                    elif isinstance(e, str):
                        names.update(parse_poly(e).variables)
            variables = tuple(sorted(names))
        return cls(len(rows), ncols, [e for r in rows for e in r], variables)

    @classmethod
    def identity(cls, n, variables=()):
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)], variables)

    def _zero(self):
        return LaurentPoly._raw({}, self.variables)

    def _one(self):
        return LaurentPoly.constant(1, self.variables)

    def _fix(self, x):
        if isinstance(x, LaurentPoly):
            return x
        return LaurentPoly.constant(x, self.variables)

    def _new(self, rows, cols, entries):
        m = RingMatrix.__new__(RingMatrix)
        m.rows, m.cols, m.entries, m.variables = rows, cols, tuple(entries), self.variables
        return m

    def _unit_inverse(self, x):
        return x.inverse()

    def __eq__(self, other):
        if isinstance(other, RingMatrix) and other.variables != self.variables:
            return False
        return super().__eq__(other)

    __hash__ = _MatrixBase.__hash__

    def kron(self, other):
        if other.variables != self.variables:
            raise VariableMismatch(self.variables, other.variables)
        return super().kron(other)

    def __matmul__(self, other):
        if other.variables != self.variables:
            raise VariableMismatch(self.variables, other.variables)
        return super().__matmul__(other)

    def extend(self, variables):
        return RingMatrix(self.rows, self.cols, [e.extend(variables) for e in self.entries], variables)

    def render(self, compact=False):
        rows = self.tolist()
        sep = "," if compact else ", "
        return "[" + sep.join("[" + sep.join(render_poly(e, compact) for e in r) + "]" for r in rows) + "]"

    def to_json(self):
        return [[render_poly(e) for e in r] for r in self.tolist()]

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"RingMatrix({self.render()})"


class ModMatrix(_MatrixBase):
    """Dense matrix over Z/pZ with entries stored as ints in ``range(p)``."""

    __slots__ = ("modulus",)

    def __init__(self, rows, cols, entries, modulus):
        entries = [int(e) % modulus for e in entries]
        if len(entries) != rows * cols:
            raise ShapeError(f"{len(entries)} entries for a {rows}x{cols} matrix")
        self.rows, self.cols, self.entries, self.modulus = rows, cols, tuple(entries), modulus

    @classmethod
    def from_rows(cls, rows, modulus):
        rows = [list(r) for r in rows]
        return cls(len(rows), len(rows[0]) if rows else 0, [e for r in rows for e in r], modulus)

    @classmethod
    def identity(cls, n, modulus):
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)], modulus)

    def _zero(self):
        return 0

    def _one(self):
        return 1

    def _fix(self, x):
        return x % self.modulus

    def _new(self, rows, cols, entries):
        m = ModMatrix.__new__(ModMatrix)
        m.rows, m.cols, m.entries, m.modulus = rows, cols, tuple(entries), self.modulus
        return m

    def _unit_inverse(self, x):
        return pow(x % self.modulus, -1, self.modulus)

    def __eq__(self, other):
        if isinstance(other, ModMatrix) and other.modulus != self.modulus:
            return False
        return super().__eq__(other)

    __hash__ = _MatrixBase.__hash__

    def render(self, compact=False):
        sep = "," if compact else ", "
        return "[" + sep.join("[" + sep.join(str(e) for e in r) + "]" for r in self.tolist()) + "]"

    def to_json(self):
        return self.tolist()

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"ModMatrix({self.render()} mod {self.modulus})"


def mat_op(op, *args):
    """Functional entry point: ``mat_op("kron", a, b)``, ``mat_op("trace", m)`` ..."""
    if op == "mul":
        a, b = args
        return a @ b
    if op == "kron":
        a, b = args
        return a.kron(b)
    if op == "add":
        a, b = args
        return a + b
    if op == "scale":
        s, m = args
        return m.scale(s)
    if op == "trace":
        (m,) = args
        return m.trace()
    if op == "transpose":
        (m,) = args
        return m.transpose()
    raise ValueError(f"unknown matrix op {op!r}")


def mat_inverse(m):
    return m.inverse()


def kron_all(mats):
    it = iter(mats)
    out = next(it)
    for m in it:
        out = out.kron(m)
    return out
