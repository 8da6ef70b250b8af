"""Blackboard-framed unoriented tangles as sliced diagrams.

A :class:`SlicedDiagram` is a bottom-to-top list of horizontal slices.  Each
slice tiles the strands of its input level with pieces:

========  ======  =======  ==============================================
piece     inputs  outputs  meaning
========  ======  =======  ==============================================
``id``    1       1        vertical strand
``cup``   0       2        local minimum
``cap``   2       0        local maximum
``xpos``  2       2        crossing, strand bottom-left -> top-right on top
``xneg``  2       2        crossing, strand bottom-right -> top-left on top
========  ======  =======  ==============================================

Positions are 1-based in text and in the public API, 0-based internally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from .errors import ParseError, PatternMismatch

__all__ = [
    "SlicedDiagram",
    "BraidWord",
    "Trace",
    "parse_diagram",
    "parse_braid",
    "braid_closure",
    "braid_tangle",
    "trace_components",
    "insert_kinks",
    "apply_framed_move",
    "find_move_sites",
    "random_framed_moves",
    "KINKS",
]

PIECE_IO = {"id": (1, 1), "cup": (0, 2), "cap": (2, 0), "xpos": (2, 2), "xneg": (2, 2)}
CROSSINGS = ("xpos", "xneg")


@dataclass(frozen=True)
class SlicedDiagram:
    boundary_in: int
    slices: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "slices", tuple(tuple(s) for s in self.slices))
        width = self.boundary_in
        if width < 0:
            raise ParseError("negative boundary")
        for k, sl in enumerate(self.slices):
            need = 0
            for piece in sl:
                if piece not in PIECE_IO:
                    raise ParseError(f"slice {k + 1}: unknown piece {piece!r}")
                need += PIECE_IO[piece][0]
            if need != width:
                raise ParseError(f"slice {k + 1}: pieces consume {need} strands but {width} are present")
            width = sum(PIECE_IO[p][1] for p in sl)

    @cached_property
    def widths(self):
        w = [self.boundary_in]
        for sl in self.slices:
            w.append(sum(PIECE_IO[p][1] for p in sl))
        return tuple(w)

    @property
    def boundary_out(self):
        return self.widths[-1]

    @property
    def is_closed(self):
        return self.boundary_in == 0 and self.boundary_out == 0

    def __len__(self):
        return len(self.slices)

    def placed(self, k):
        """Pieces of slice ``k`` as ``(piece, in_pos, out_pos)`` (0-based)."""
        out, i, o = [], 0, 0
        for piece in self.slices[k]:
            a, b = PIECE_IO[piece]
            out.append((piece, i, o))
            i += a
            o += b
        return out

    @cached_property
    def ops(self):
        """Elementary operations ``(piece, pos)`` (ids dropped) and slice ends.

        Splitting a slice into its non-identity pieces, left to right, gives a
        sequence of single-piece steps; ``ends[k]`` is the number of steps
        completed when original level ``k`` is reached.
        """
        ops, ends = [], [0]
        for sl in self.slices:
            done = 0  # outputs of already-processed pieces
            for piece in sl:
                a, b = PIECE_IO[piece]
                if piece != "id":
                    ops.append((piece, done))
                done += b
            ends.append(len(ops))
        return tuple(ops), tuple(ends)

    def elementary(self):
        """Planar-isotopic diagram with exactly one non-identity piece per slice."""
        ops, _ = self.ops
        return _from_ops(self.boundary_in, ops)

    def crossing_count(self):
        return sum(1 for sl in self.slices for p in sl if p in CROSSINGS)

    def render(self):
        parts = []
        for k in range(len(self.slices)):
            toks = []
            for piece, i, _ in self.placed(k):
                toks.append(f"{piece}{i + 1}" if piece in CROSSINGS else piece)
            parts.append(" ".join(toks) if toks else "")
        return " / ".join(parts)

    def to_json(self):
        return {"type": "sliced", "boundary_in": self.boundary_in,
                "slices": [" ".join(t) for t in (self._tokens(k) for k in range(len(self.slices)))]}

    def _tokens(self, k):
        return [f"{p}{i + 1}" if p in CROSSINGS else p for p, i, _ in self.placed(k)]

    def __str__(self):
        return self.render()


def _lone(piece, pos, width):
    a = PIECE_IO[piece][0]
    if pos < 0 or pos + a > width:
        raise PatternMismatch(f"{piece} at position {pos + 1} does not fit width {width}")
    return ("id",) * pos + (piece,) + ("id",) * (width - pos - a)


def _ops_to_slices(width, ops):
    slices = []
    for piece, pos in ops:
        slices.append(_lone(piece, pos, width))
        a, b = PIECE_IO[piece]
        width += b - a
    return slices


def _from_ops(boundary_in, ops):
    return SlicedDiagram(boundary_in, _ops_to_slices(boundary_in, ops))


def _as_lone(sl):
    """``(piece, pos)`` when the slice has exactly one non-identity piece."""
    found, i = None, 0
    for piece in sl:
        if piece != "id":
            if found is not None:
                return None
            found = (piece, i)
        i += PIECE_IO[piece][0]
    return found


# -- parsing -------------------------------------------------------------------

_PIECE_TOKEN = re.compile(r"^(id|cup|cap|xpos|xneg)(\d+)?$")


def _tokens_of(text):
    toks = []
    for raw in text.replace(";", " ").replace(",", " ").split():
        m = _PIECE_TOKEN.match(raw.lower())
        if not m:
            raise ParseError(f"unknown piece token {raw!r}")
        toks.append((m.group(1), int(m.group(2)) if m.group(2) else None))
    return toks


def _positional(toks):
    return bool(toks) and all(k is not None for _, k in toks) and not any(p == "id" for p, _ in toks)


def parse_diagram(text, boundary_in=None):
    """Parse the slice grammar, e.g. ``"cup ; cup / id xpos id / cap ; cap"``.

    A slice listing its pieces left to right (with ``id`` fillers) is *tiled*:
    positions come from the tiling and any crossing index is informational.
    A slice made only of indexed tokens (``xpos2``, ``cup1``, ``cap3``) is
    *positional*: each piece sits at its 1-based strand position and the
    remaining strands are identities.
    """
    if isinstance(text, (list, tuple)):
        groups = [g if isinstance(g, str) else " ".join(g) for g in text]
    else:
        groups = str(text).split("/")
    parsed = [_tokens_of(g) for g in groups]
    if parsed and not parsed[-1] and len(parsed) > 1:
        parsed.pop()
    if boundary_in is None:
        boundary_in = _infer_boundary(parsed)
    width, slices = boundary_in, []
    for k, toks in enumerate(parsed):
        if _positional(toks):
            sl = _place(toks, width, k)
        else:
            sl = tuple(p for p, _ in toks)
            need = sum(PIECE_IO[p][0] for p in sl)
            if need != width:
                raise ParseError(f"slice {k + 1}: pieces consume {need} strands but {width} are present")
        slices.append(sl)
        width = sum(PIECE_IO[p][1] for p in sl)
    return SlicedDiagram(boundary_in, slices)


def _place(toks, width, k):
    spans = sorted((pos - 1, piece) for piece, pos in toks)
    out, cur = [], 0
    for start, piece in spans:
        if start < cur:
            raise ParseError(f"slice {k + 1}: overlapping pieces at position {start + 1}")
        out.extend(["id"] * (start - cur))
        out.append(piece)
        cur = start + PIECE_IO[piece][0]
    if cur > width:
        raise ParseError(f"slice {k + 1}: piece extends past strand {width}")
    out.extend(["id"] * (width - cur))
    return tuple(out)


def _infer_boundary(parsed):
    delta, need = 0, 0
    for toks in parsed:
        if not _positional(toks):
            return max(0, sum(PIECE_IO[p][0] for p, _ in toks) - delta)
        reach = max((pos - 1 + PIECE_IO[p][0] for p, pos in toks), default=0)
        need = max(need, reach - delta)
        delta += sum(PIECE_IO[p][1] - PIECE_IO[p][0] for p, _ in toks)
    return max(need, 0)


# -- braids ------------------------------------------------------------------------


@dataclass(frozen=True)
class BraidWord:
    strands: int
    word: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(int(k) for k in self.word))
        for k in self.word:
            if k == 0 or abs(k) >= self.strands:
                raise ParseError(f"generator {k} invalid for {self.strands} strands")

    def inverse(self):
        return BraidWord(self.strands, tuple(-k for k in reversed(self.word)))

    def __mul__(self, other):
        if other.strands != self.strands:
            raise ValueError("strand counts differ")
        return BraidWord(self.strands, self.word + other.word)

    def permutation(self):
        """Underlying permutation as bottom position -> top position (0-based)."""
        pos = list(range(self.strands))  # pos[s] = current position of strand s
        for k in self.word:
            j = abs(k) - 1
            for s in range(self.strands):
                if pos[s] == j:
                    pos[s] = j + 1
                elif pos[s] == j + 1:
                    pos[s] = j
        return tuple(pos)

    def __str__(self):
        return " ".join(str(k) for k in self.word)

    def to_json(self):
        return {"type": "braid", "strands": self.strands, "word": list(self.word)}


def parse_braid(text, strands=None):
    """``"1 1 1 2"`` -> sigma_1^3 sigma_2; ``-1`` is an inverse letter."""
    try:
        word = [int(t) for t in str(text).replace(",", " ").split()]
    except ValueError as exc:
        raise ParseError(f"bad braid word {text!r}: {exc}") from None
    if strands is None:
        strands = max((abs(k) for k in word), default=1) + 1
    return BraidWord(strands, word)


def braid_tangle(b):
    """The braid itself as an open ``n -> n`` tangle."""
    n = b.strands
    return _from_ops(n, [("xpos" if k > 0 else "xneg", abs(k) - 1) for k in b.word])


def braid_closure(b):
    """Trace closure: nested cups, the braid on the left strands, nested caps."""
    n = b.strands
    ops = [("cup", i) for i in range(n)]
    ops += [("xpos" if k > 0 else "xneg", abs(k) - 1) for k in b.word]
    ops += [("cap", i) for i in reversed(range(n))]
    return _from_ops(0, ops)


# -- component tracing ---------------------------------------------------------------


@dataclass
class Trace:
    count: int
    wire_component: dict  # (level, pos0) -> component index
    wire_semiarc: dict  # (level, pos0) -> semiarc index
    semiarc_component: tuple
    framing: tuple
    closed: tuple
    first_wire: tuple  # per component, (level, pos0)
    crossings: list = field(default_factory=list)  # (slice, pos0, piece, compA, compB, sign)

    @property
    def semiarc_count(self):
        return len(self.semiarc_component)

    def residues(self, rank):
        """``w_k = q_k * N + r_k`` split of the framing vector."""
        return tuple(divmod(w, rank) for w in self.framing)


def _wire_graph(d):
    """Adjacency of wire ends.  ``link[(wire, end)] = (wire2, end2, info)``."""
    link = {}
    for s in range(len(d.slices)):
        for piece, i, o in d.placed(s):
            if piece == "id":
                link[((s, i), 1)] = ((s + 1, o), 0, None)
                link[((s + 1, o), 0)] = ((s, i), 1, None)
            elif piece == "cup":
                link[((s + 1, o), 0)] = ((s + 1, o + 1), 0, None)
                link[((s + 1, o + 1), 0)] = ((s + 1, o), 0, None)
            elif piece == "cap":
                link[((s, i), 1)] = ((s, i + 1), 1, None)
                link[((s, i + 1), 1)] = ((s, i), 1, None)
            else:
                # strand A: bottom-left -> top-right; strand B: bottom-right -> top-left
                link[((s, i), 1)] = ((s + 1, o + 1), 0, (s, i, "A"))
                link[((s + 1, o + 1), 0)] = ((s, i), 1, (s, i, "A"))
                link[((s, i + 1), 1)] = ((s + 1, o), 0, (s, i, "B"))
                link[((s + 1, o), 0)] = ((s, i + 1), 1, (s, i, "B"))
    return link


def trace_components(d):
    """Components, semiarcs and per-component blackboard framing.

    Components are numbered by their first wire in bottom-to-top,
    left-to-right scan order.  Each component is traversed once to fix an
    orientation; a crossing's sign is the piece sign times the two traversal
    directions, and ``framing[k]`` sums the signs of self-crossings of ``k``.
    """
    link = _wire_graph(d)
    wires = [(lv, p) for lv, w in enumerate(d.widths) for p in range(w)]

    # semiarcs: union along id/cup/cap links
    parent = {w: w for w in wires}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    for (w, _), (w2, _, info) in link.items():
        if info is None:
            ra, rb = find(w), find(w2)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    comp_of, first, closed = {}, [], []
    passes = {}  # (slice, strand) -> (component, direction)
    for w in wires:
        if w in comp_of:
            continue
        k = len(first)
        members = _collect(w, link)
        free = sorted(m for m in members if (m, 0) not in link or (m, 1) not in link)
        if free:
            start = free[0]
            leave = 1 if (start, 0) not in link else 0
            closed.append(False)
        else:
            start, leave = min(members), 1
            closed.append(True)
        first.append(min(members))
        cur, end = start, leave
        while True:
            comp_of[cur] = k
            nxt = link.get((cur, end))
            if nxt is None:
                break
            w2, end2, info = nxt
            if info is not None:
                passes[info] = (k, 1 if end == 1 else -1)
            if w2 == start and closed[-1]:
                break
            cur, end = w2, 1 - end2

    crossings, framing = [], [0] * len(first)
    for s in range(len(d.slices)):
        for piece, i, _ in d.placed(s):
            if piece in CROSSINGS:
                ca, da = passes[(s, i, "A")]
                cb, db = passes[(s, i, "B")]
                sign = (1 if piece == "xpos" else -1) * da * db
                crossings.append((s, i, piece, ca, cb, sign))
                if ca == cb:
                    framing[ca] += sign

    roots = {}
    for w in wires:
        roots.setdefault(find(w), len(roots))
    wire_semiarc = {w: roots[find(w)] for w in wires}
    sa_comp = [None] * len(roots)
    for w, sidx in wire_semiarc.items():
        sa_comp[sidx] = comp_of[w]
    return Trace(
        count=len(first),
        wire_component=comp_of,
        wire_semiarc=wire_semiarc,
        semiarc_component=tuple(sa_comp),
        framing=tuple(framing),
        closed=tuple(closed),
        first_wire=tuple(first),
        crossings=crossings,
    )


def _collect(w, link):
    seen, stack = {w}, [w]
    while stack:
        cur = stack.pop()
        for end in (0, 1):
            nxt = link.get((cur, end))
            if nxt and nxt[0] not in seen:
                seen.add(nxt[0])
                stack.append(nxt[0])
    return seen


# -- local rewriting -----------------------------------------------------------------

# kinks on a strand at position p, as (piece, offset) steps
KINKS = {
    "L+": (("cup", 0), ("xpos", 1), ("cap", 0)),
    "L-": (("cup", 0), ("xneg", 1), ("cap", 0)),
    "R+": (("cup", 1), ("xpos", 0), ("cap", 1)),
    "R-": (("cup", 1), ("xneg", 0), ("cap", 1)),
}
KINK_SIGN = {"L+": 1, "R+": 1, "L-": -1, "R-": -1}


def _kink_ops(kind, p):
    return [(piece, p + off) for piece, off in KINKS[kind]]


def _insert(d, level, ops):
    if not 0 <= level <= len(d.slices):
        raise PatternMismatch(f"level {level} out of range 0..{len(d.slices)}")
    new = _ops_to_slices(d.widths[level], ops)
    return SlicedDiagram(d.boundary_in, d.slices[:level] + tuple(new) + d.slices[level:])


def _replace(d, level, count, ops):
    new = _ops_to_slices(d.widths[level], ops)
    out = SlicedDiagram(d.boundary_in, d.slices[:level] + tuple(new) + d.slices[level + count:])
    if out.widths[-1] != d.widths[-1]:
        raise PatternMismatch("rewrite changes the boundary")  # pragma: no cover
    return out


def _lone_ops(d, level, count):
    if level < 0 or level + count > len(d.slices):
        return None
    out = []
    for sl in d.slices[level:level + count]:
        lo = _as_lone(sl)
        if lo is None:
            return None
        out.append(lo)
    return out


def insert_kinks(d, r):
    """Insert ``r[k]`` positive kinks on component ``k`` at its first wire."""
    tr = trace_components(d)
    r = tuple(r)
    if len(r) != tr.count:
        raise PatternMismatch(f"kink vector has {len(r)} entries for {tr.count} components")
    if any(x < 0 for x in r):
        raise PatternMismatch("kink counts must be non-negative")
    for k, times in enumerate(r):
        for _ in range(times):
            level, p = trace_components(d).first_wire[k]
            d = _insert(d, level, _kink_ops("L+", p))
    return d


MOVES = ("RII", "RIII", "framed-RI", "phone-cord", "planar")
FRAMED_RI_PAIRS = tuple((a, b) for a in KINKS for b in KINKS if KINK_SIGN[a] != KINK_SIGN[b])


def apply_framed_move(d, move, site, direction="insert", **opts):
    """Rewrite ``d`` by one local move at ``site = (level, position)``.

    ``level`` counts slice boundaries from the bottom (0 = bottom boundary)
    and the rewritten region starts just above it; ``position`` is 1-based.

    Options: ``order`` ("+-" or "-+") for RII; ``kinks`` (pair of kink names
    such as ``("L+", "R-")``) for framed-RI; ``n`` and ``kind`` for the
    phone-cord move; ``kind`` in {"zigzag", "slide", "extremum", "split"} and
    ``variant`` for planar moves.
    """
    level, pos = site
    p = pos - 1
    if move == "RII":
        if direction == "insert":
            order = opts.get("order", "+-")
            a, b = ("xpos", "xneg") if order == "+-" else ("xneg", "xpos")
            _need_width(d, level, p, 2)
            return _insert(d, level, [(a, p), (b, p)])
        got = _lone_ops(d, level, 2)
        if got and got[0][1] == got[1][1] == p and {got[0][0], got[1][0]} == set(CROSSINGS):
            return _replace(d, level, 2, [])
        raise PatternMismatch(f"no RII pair at {site}")
    if move == "RIII":
        got = _lone_ops(d, level, 3)
        if got and got[0][0] == got[1][0] == got[2][0] and got[0][0] in CROSSINGS:
            s = got[0][0]
            ps = [g[1] for g in got]
            if ps == [p, p + 1, p]:
                return _replace(d, level, 3, [(s, p + 1), (s, p), (s, p + 1)])
            if ps == [p + 1, p, p + 1]:
                return _replace(d, level, 3, [(s, p), (s, p + 1), (s, p)])
        raise PatternMismatch(f"no RIII triple at {site}")
    if move == "framed-RI":
        if direction == "insert":
            a, b = opts.get("kinks", ("L+", "R-"))
            if KINK_SIGN[a] == KINK_SIGN[b]:
                raise PatternMismatch("framed RI needs kinks of opposite sign")
            _need_width(d, level, p, 1)
            return _insert(d, level, _kink_ops(a, p) + _kink_ops(b, p))
        for a, b in FRAMED_RI_PAIRS:
            if _lone_ops(d, level, 6) == _kink_ops(a, p) + _kink_ops(b, p):
                return _replace(d, level, 6, [])
        raise PatternMismatch(f"no framed RI pair at {site}")
    if move == "phone-cord":
        n = opts.get("n", 1)
        if direction == "insert":
            kind = opts.get("kind", "L+")
            _need_width(d, level, p, 1)
            return _insert(d, level, [op for _ in range(n) for op in _kink_ops(kind, p)])
        got = _lone_ops(d, level, 3 * n)
        if got:
            kinds = []
            for t in range(n):
                chunk = got[3 * t:3 * t + 3]
                kinds.append(next((k for k in KINKS if _kink_ops(k, p) == chunk), None))
            if None not in kinds and len({KINK_SIGN[k] for k in kinds}) == 1:
                return _replace(d, level, 3 * n, [])
        raise PatternMismatch(f"no {n} like-signed kinks at {site}")
    if move == "planar":
        return _planar(d, level, p, direction, **opts)
    raise ValueError(f"unknown move {move!r}; expected one of {MOVES}")


def _need_width(d, level, p, k):
    if not 0 <= level <= len(d.slices):
        raise PatternMismatch(f"level {level} out of range")
    if p < 0 or p + k > d.widths[level]:
        raise PatternMismatch(f"position {p + 1} needs {k} strand(s) at level {level}")


# (IV)-type rewrites: crossing passing an extremum flips its sign
_EXTREMUM = [
    ((("xpos", 1), ("cap", 0)), (("xneg", 0), ("cap", 1))),
    ((("xneg", 1), ("cap", 0)), (("xpos", 0), ("cap", 1))),
    ((("cup", 0), ("xneg", 1)), (("cup", 1), ("xpos", 0))),
    ((("cup", 0), ("xpos", 1)), (("cup", 1), ("xneg", 0))),
]


def _planar(d, level, p, direction, kind="zigzag", variant="S", **_):
    if kind == "split":
        if not 0 <= level < len(d.slices):
            raise PatternMismatch(f"no slice above level {level}")
        sub = SlicedDiagram(d.widths[level], [d.slices[level]]).ops[0]
        return _replace(d, level, 1, list(sub))
    if kind == "zigzag":
        shapes = {"S": [("cup", p + 1), ("cap", p)], "Z": [("cup", p), ("cap", p + 1)]}
        if direction == "insert":
            _need_width(d, level, p, 1)
            return _insert(d, level, shapes[variant])
        got = _lone_ops(d, level, 2)
        if got in (shapes["S"], shapes["Z"]):
            return _replace(d, level, 2, [])
        raise PatternMismatch(f"no zigzag at {(level, p + 1)}")
    if kind == "slide":
        got = _lone_ops(d, level, 2)
        if not got:
            raise PatternMismatch(f"slices above level {level} are not single pieces")
        (a, i), (b, j) = got
        ia, oa = PIECE_IO[a]
        ib, ob = PIECE_IO[b]
        if j >= i + oa and not (oa == 0 and ib == 0 and j == i):
            new = [(b, j - oa + ia), (a, i)]
        elif j + ib <= i and not (oa == 0 and ib == 0):
            new = [(b, j), (a, i - ib + ob)]
        else:
            raise PatternMismatch(f"pieces above level {level} overlap")
        return _replace(d, level, 2, new)
    if kind == "extremum":
        got = _lone_ops(d, level, 2)
        if got:
            for lhs, rhs in _EXTREMUM:
                for src, dst in ((lhs, rhs), (rhs, lhs)):
                    base = got[0][1] - src[0][1]
                    if base >= 0 and got == [(pc, base + off) for pc, off in src]:
                        return _replace(d, level, 2, [(pc, base + off) for pc, off in dst])
        raise PatternMismatch(f"no crossing/extremum pair above level {level}")
    raise ValueError(f"unknown planar move kind {kind!r}")


def find_move_sites(d, rank=1):
    """Every applicable non-inserting rewrite as ``(move, site, direction, opts)``."""
    out = []
    for level in range(len(d.slices)):
        for move, direction, opts in (
            ("RII", "delete", {}),
            ("RIII", "rewrite", {}),
            ("framed-RI", "delete", {}),
            ("phone-cord", "delete", {"n": rank}),
            ("planar", "delete", {"kind": "zigzag"}),
            ("planar", "rewrite", {"kind": "slide"}),
            ("planar", "rewrite", {"kind": "extremum"}),
        ):
            lone = _as_lone(d.slices[level])
            if lone is None:
                continue
            cands = {lone[1] + 1, lone[1], lone[1] + 2, lone[1] - 1}
            for pos in sorted(c for c in cands if c >= 1):
                try:
                    apply_framed_move(d, move, (level, pos), direction, **opts)
                except PatternMismatch:
                    continue
                out.append((move, (level, pos), direction, opts))
                if opts.get("kind") in ("slide", "extremum"):
                    break
    # de-duplicate identical rewrites reached from different positions
    seen, uniq = set(), []
    for item in out:
        key = (item[0], item[1][0], item[2], tuple(sorted(item[3].items())),
               apply_framed_move(d, item[0], item[1], item[2], **item[3]))
        if key not in seen:
            seen.add(key)
            uniq.append(item)
    return uniq


def random_framed_moves(d, rng, steps, rank=1, max_slices=40):
    """Apply ``steps`` random framed / phone-cord moves; returns (diagram, log).

    ``rng`` is a :class:`random.Random`.  The diagram is first split into
    single-piece slices so that local patterns are visible.
    """
    d = d.elementary()
    log = []
    for _ in range(steps):
        rewrites = find_move_sites(d, rank)
        grow = len(d.slices) < max_slices
        if rewrites and (not grow or rng.random() < 0.55):
            move, site, direction, opts = rng.choice(rewrites)
        else:
            level = rng.randrange(len(d.slices) + 1)
            width = d.widths[level]
            if width == 0:
                # only an extremum-free insertion is possible: try another level
                levels = [lv for lv, w in enumerate(d.widths) if w > 0]
                if not levels:
                    break
                level = rng.choice(levels)
                width = d.widths[level]
            choice = rng.choice(["RII", "framed-RI", "phone-cord", "zigzag", "RIII"] if width >= 3
                                else ["RII", "framed-RI", "phone-cord", "zigzag"] if width == 2
                                else ["framed-RI", "phone-cord", "zigzag"])
            pos = rng.randrange(1, width + (0 if choice == "RII" else -1 if choice == "RIII" else 1))
            site = (level, pos)
            direction = "insert"
            if choice == "RIII":
                # three nested RII pairs expose a like-signed triple, then rewrite it
                order = rng.choice(["+-", "-+"])
                for at, p_ in ((level, pos), (level + 1, pos + 1), (level + 2, pos)):
                    d = apply_framed_move(d, "RII", (at, p_), "insert", order=order)
                    log.append(("RII", (at, p_), "insert", {"order": order}))
                move, site, direction, opts = "RIII", (level, pos), "rewrite", {}
            elif choice == "RII":
                move, opts = "RII", {"order": rng.choice(["+-", "-+"])}
            elif choice == "framed-RI":
                move, opts = "framed-RI", {"kinks": rng.choice(FRAMED_RI_PAIRS)}
            elif choice == "phone-cord":
                move, opts = "phone-cord", {"n": rank, "kind": rng.choice(list(KINKS))}
            else:
                move, opts = "planar", {"kind": "zigzag", "variant": rng.choice("SZ")}
        d = apply_framed_move(d, move, site, direction, **opts)
        log.append((move, site, direction, dict(opts)))
    return d, log


def all_kink_vectors(count, rank):
    return list(product(range(rank), repeat=count))
