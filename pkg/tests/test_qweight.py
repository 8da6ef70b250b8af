import json

import pytest
import sympy as sp

from birackforge import (
    QuantumWeight,
    apply_framed_move,
    classify_weight,
    enumerate_labelings,
    evaluate,
    evaluate_dense,
    insert_kinks,
    parse_poly,
    phi_integral,
    phi_q_polynomial,
    phi_qm,
    trace_components,
    verify_weight,
)
from birackforge.errors import NotInvertibleOverRing, ParseError, ShapeError
from birackforge.loaders import load_weight
from birackforge.presets import KAUFFMAN, get, kauffman_weight
from birackforge.qweight import homogeneous_weight, normalize
from birackforge.ring import RingMatrix

from oracles import A, matrix_to_sympy, to_sympy

a, b = sp.symbols("a b")


def block(p, q):
    """The 4x4 pattern with ``p`` on and ``q`` off the middle diagonal."""
    return sp.Matrix([[0, 0, 0, 0], [0, p, q, 0], [0, q, p, 0], [0, 0, 0, 0]])


def multiset(ms):
    return sorted((str(matrix_to_sympy(m)), k) for m, k in ms.counts.items())


def test_kauffman_weight_verifies():
    rep = verify_weight(kauffman_weight())
    assert rep.ok
    assert list(rep.results) == ["I", "II", "III", "IV", "IV'", "V", "VI"]
    assert classify_weight(kauffman_weight())["homogeneous"]


def test_wrong_delta_fails_vi_with_witness():
    v = ("A",)
    q = homogeneous_weight(
        get("trivial"),
        RingMatrix.from_rows(KAUFFMAN["X"], v),
        RingMatrix.from_rows(KAUFFMAN["N"], v),
        RingMatrix.from_rows(KAUFFMAN["U"], v),
        parse_poly("A^3", v),
    )
    rep = verify_weight(q)
    assert rep.failures == ["VI"]
    assert rep.results["VI"].witness == (1,)
    assert rep.to_json()["VI"]["ok"] is False


def test_kauffman_on_rank_two_birack_needs_delta_squared():
    hb = get("hopf-birack")
    assert verify_weight(kauffman_weight(hb)).ok
    assert kauffman_weight(hb).delta == parse_poly("A^6", ("A",))
    plain = kauffman_weight(hb)
    plain.delta = parse_poly("-A^3", ("A",))
    assert verify_weight(plain).failures == ["VI"]


def test_unknot_is_cap_times_cup():
    q = kauffman_weight()
    f = next(enumerate_labelings(get("unknot"), q.birack))
    value = evaluate(get("unknot"), f, q)
    direct = matrix_to_sympy(q.N[1]) * matrix_to_sympy(q.U[1])
    assert sp.expand(to_sympy(value[0, 0]) - direct[0, 0]) == 0
    assert sp.expand(direct[0, 0] - (-A**2 - A**-2)) == 0


@pytest.mark.parametrize("w", [0, 1, -1, 2, -2])
def test_unknot_normalized_value_ignores_framing(w):
    q = kauffman_weight()
    d = get("unknot").elementary()
    if w:
        d = apply_framed_move(d, "phone-cord", (1, 1), "insert", n=abs(w), kind="L+" if w > 0 else "L-")
    assert trace_components(d).framing == (w,)
    (val,) = phi_qm(d, q).counts
    assert val[0, 0] == parse_poly("-A^2 - A^-2", ("A",))


@pytest.mark.parametrize("name", ["hopf", "trefoil", "figure8", "t3", "t2"])
@pytest.mark.parametrize("weight", ["kauffman", "ex3-weight"])
def test_sparse_and_dense_evaluation_agree(name, weight):
    q = get(weight)
    d = get(name)
    for f in enumerate_labelings(d, q.birack):
        assert evaluate(d, f, q) == evaluate_dense(d, f, q)


def test_ex3_weight_verifies_and_is_heterogeneous():
    q = get("ex3-weight")
    assert verify_weight(q).ok
    cls = classify_weight(q)
    assert cls["heterogeneous"] and not cls["homogeneous"]
    assert not cls["strongly_heterogeneous"]


def test_t1_t2_t3_multisets():
    q = get("ex3-weight")
    eye = sp.eye(4)
    assert multiset(phi_qm(get("t1"), q)) == [(str(eye), 4)]
    assert multiset(phi_qm(get("t2"), q)) == sorted([(str(block(-1, 1)), 2), (str(block(1, -1)), 2)])
    assert multiset(phi_qm(get("t3"), q)) == sorted(
        [(str(block(a**-2, -b**2)), 2), (str(block(-a**2, b**-2)), 2)]
    )


def test_size_equals_integral_count():
    for name in ("hopf", "trefoil", "unlink2"):
        for q in (kauffman_weight(get("hopf-birack")), get("ex3-weight")):
            assert phi_qm(get(name), q).total == phi_integral(get(name), q.birack).total


def test_normalize_divides_full_turns():
    q = kauffman_weight(get("hopf-birack"))
    m = q.eye(1)
    assert normalize(m, (2, 1), q) == m.scale(q.power(q.delta, -1))
    assert normalize(m, (-1,), q) == m.scale(q.power(q.delta, 1))
    assert normalize(m, (1, 0), q) == m


def test_polynomial_rendering():
    ms = phi_qm(get("unlink2"), kauffman_weight())
    assert phi_q_polynomial(ms) == "u^{A^4+2+A^-4}"
    ms = phi_qm(get("unknot"), get("ex3-weight"))
    assert phi_q_polynomial(ms).startswith("2·u^{")


def test_json_roundtrip_and_file_loader():
    q = get("ex3-weight")
    again = QuantumWeight.from_json(json.dumps(q.to_json()))
    assert again.X == q.X and again.N == q.N and again.U == q.U and again.delta == q.delta
    from_file = load_weight("data/ex3_weight.json")
    assert from_file.X == q.X and from_file.birack == q.birack
    assert load_weight("data/kauffman.json").delta == kauffman_weight().delta


def test_bad_weight_documents():
    with pytest.raises(ParseError):
        QuantumWeight.from_json({"dim": 1})
    doc = kauffman_weight().to_json()
    doc["N"] = {"1": [[1, 2]]}
    with pytest.raises(ShapeError):
        QuantumWeight.from_json(doc)


def test_singular_crossing_matrix_reported():
    v = ("A",)
    q = homogeneous_weight(
        get("trivial"),
        RingMatrix.from_rows([[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], v),
        RingMatrix.from_rows(KAUFFMAN["N"], v),
        RingMatrix.from_rows(KAUFFMAN["U"], v),
        1,
    )
    rep = verify_weight(q)
    assert not rep.results["II"].ok
    with pytest.raises(NotInvertibleOverRing):
        q.Xinv(1, 1)


def test_kink_insertion_matches_delta():
    q = kauffman_weight()
    d = insert_kinks(get("unknot"), (1,))
    f = next(enumerate_labelings(d, q.birack))
    raw = evaluate(d, f, q)[0, 0]
    assert raw == q.delta * parse_poly("-A^2 - A^-2", ("A",))
