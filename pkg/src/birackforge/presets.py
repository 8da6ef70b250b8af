"""Named biracks, weights and diagrams used in docs, tests and the CLI.

On the command line any of these can be referenced as ``@name``.
"""

from __future__ import annotations

from .birack import constant_action
from .ring import RingMatrix, parse_poly
from .tangle import braid_closure, parse_braid, parse_diagram

__all__ = ["BIRACKS", "WEIGHTS", "DIAGRAMS", "BRAID_WEIGHTS", "get"]


def trivial_birack():
    return constant_action(1, (1,), (1,))


def ex0_birack():
    """Two elements, ``B(x, y) = (y, tau(x))`` with ``tau = (12)``."""
    return constant_action(2, (1, 2), (2, 1))


def ex3_birack():
    """Constant action with sigma = tau = (12): every label flips at each crossing."""
    return constant_action(2, (2, 1), (2, 1))


def hopf_birack():
    """Three elements, sigma = (12), tau = id; rank 2."""
    return constant_action(3, (2, 1, 3), (1, 2, 3))


def trivial_kei2():
    """Two-element trivial kei ``B(x, y) = (y, x)``."""
    return constant_action(2, (1, 2), (1, 2))


KAUFFMAN = {
    "X": [["A", 0, 0, 0], [0, 0, "A^-1", 0], [0, "A^-1", "A - A^-3", 0], [0, 0, 0, "A"]],
    "N": [[0, "A", "-A^-1", 0]],
    "U": [[0], ["-A"], ["A^-1"], [0]],
    "delta": "-A^3",
}


def kauffman_weight(birack=None):
    """The Kauffman bracket weight, the same matrices on every label.

    A rank ``N`` birack needs ``N`` kinks per normalization step, so the
    framing scalar is ``(-A^3)^N``.
    """
    from .qweight import homogeneous_weight

    birack = birack or trivial_birack()
    v = ("A",)
    return homogeneous_weight(
        birack,
        RingMatrix.from_rows(KAUFFMAN["X"], v),
        RingMatrix.from_rows(KAUFFMAN["N"], v),
        RingMatrix.from_rows(KAUFFMAN["U"], v),
        parse_poly(KAUFFMAN["delta"], v) ** birack.rank,
    )


def _perm4(beta, alpha):
    return [[0, 0, 0, beta], [0, alpha, 0, 0], [0, 0, alpha, 0], [beta, 0, 0, 0]]


def ex3_weight():
    """Heterogeneous 2-dimensional weight on :func:`ex3_birack`."""
    from .qweight import QuantumWeight

    v = ("a", "b", "n")
    m = lambda rows: RingMatrix.from_rows(rows, v)  # noqa: E731
    X11 = m(_perm4("b^-1", "a"))
    X12 = m(_perm4("b", "a^-1"))
    return QuantumWeight(
        ex3_birack(), 2,
        {(1, 1): X11, (1, 2): X12, (2, 1): X12, (2, 2): X11},
        {1: m([[0, "n", "-n", 0]]), 2: m([[0, "-n", "n", 0]])},
        {1: m([[0], ["-n^-1"], ["n^-1"], [0]]), 2: m([[0], ["n^-1"], ["-n^-1"], [0]])},
        parse_poly("-a^-1", v),
        variables=v,
    )


BRAID_TABLE = {
    1: {(1, 1): "x", (1, 2): "y", (2, 1): "z", (2, 2): "w"},
    2: {(1, 1): "w", (1, 2): "z", (2, 1): "y", (2, 2): "x"},
}


def braid_weight_3():
    """A 3-strand braid weight on :func:`ex3_birack` with antidiagonal blocks."""
    from .bweight import BraidWeight

    v = ("w", "x", "y", "z")
    sigma = {}
    for j, table in BRAID_TABLE.items():
        for (x, y), name in table.items():
            sigma[(j, x, y)] = RingMatrix.from_rows([[0, 1], [name, 0]], v)
    return BraidWeight(ex3_birack(), 3, 2, sigma, v)


BIRACKS = {
    "trivial": trivial_birack,
    "ex0": ex0_birack,
    "ex3": ex3_birack,
    "flip": ex3_birack,
    "hopf-birack": hopf_birack,
    "kei2": trivial_kei2,
}

WEIGHTS = {
    "kauffman": kauffman_weight,
    "ex3-weight": ex3_weight,
}

BRAID_WEIGHTS = {"braid3": braid_weight_3}

DIAGRAM_TEXT = {
    "unknot": "cup / cap",
    "hopf": "cup cup / id xpos id / id xpos id / cap cap",
    "hopf-neg": "cup cup / id xneg id / id xneg id / cap cap",
    "unlink2": "cup cup / cap cap",
    "unlink3": "cup cup cup / cap cap cap",
    "t1": "id id",
    "t2": "cap / cup",
    "t3": "id cup id / xneg xneg / id cap id",
}

DIAGRAMS = {name: (lambda t=text: parse_diagram(t)) for name, text in DIAGRAM_TEXT.items()}
DIAGRAMS["trefoil"] = lambda: braid_closure(parse_braid("1 1 1"))
DIAGRAMS["trefoil-b3"] = lambda: braid_closure(parse_braid("1 1 1 2"))
DIAGRAMS["figure8"] = lambda: braid_closure(parse_braid("1 -2 1 -2"))


def get(name):
    """Look a preset up by name in every table."""
    for table in (BIRACKS, WEIGHTS, BRAID_WEIGHTS, DIAGRAMS):
        if name in table:
            return table[name]()
    raise KeyError(name)
