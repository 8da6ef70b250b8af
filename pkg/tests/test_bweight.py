import random

import pytest

from birackforge import BraidWord, evaluate_braid, parse_braid, parse_poly, phi_mw, verify_braid_weight
from birackforge.bweight import BraidWeight, braid_labelings, phi_w_polynomial
from birackforge.errors import LabelMismatch, ParseError
from birackforge.labeling import count_labelings, enumerate_labelings
from birackforge.loaders import load_braid, load_braid_weight
from birackforge.presets import get
from birackforge.ring import RingMatrix
from birackforge.tangle import braid_closure

V = ("w", "x", "y", "z")


def poly(text):
    return parse_poly(text, V)


def test_table_is_a_braid_weight():
    rep = verify_braid_weight(get("braid3"))
    assert rep.ok
    assert rep.braid and rep.far and rep.invertible
    assert not rep.literal_far  # neighbouring generators do not commute


def test_printed_multisets():
    w = get("braid3")
    assert phi_mw(parse_braid("1 1 1 2"), w).counts == {poly("2*y^2"): 1, poly("2*z^2"): 1}
    assert phi_mw(parse_braid("1 -1 1 2"), w).counts == {poly("2*y"): 1, poly("2*z"): 1}


def test_closing_labelings():
    b = parse_braid("1 1 1 2")
    assert braid_labelings(b, get("ex3")) == [(1, 2, 1), (2, 1, 2)]


def test_braid_labelings_match_closure_count():
    for word in ("1 1 1 2", "1 -2 1 -2", "1 2", "2 2 1"):
        b = parse_braid(word, 3)
        for birack in ("ex3", "hopf-birack", "ex0"):
            assert len(braid_labelings(b, get(birack))) == count_labelings(braid_closure(b), get(birack))


def test_empty_word_gives_identity_traces():
    w = get("braid3")
    ms = phi_mw(BraidWord(3, ()), w)
    assert ms.counts == {poly("2"): 8}


def test_two_strand_empty_word():
    b2 = get("ex3")
    sigma = {(1, x, y): RingMatrix.from_rows([[0, 1], ["x", 0]], ("x",)) for x in (1, 2) for y in (1, 2)}
    w = BraidWeight(b2, 2, 2, sigma, ("x",))
    assert verify_braid_weight(w).ok
    assert phi_mw(BraidWord(2, ()), w).counts == {parse_poly("2", ("x",)): 4}


def test_negative_letters_use_inverse_of_outgoing_labels():
    w = get("braid3")
    b = parse_braid("1 -1", 3)
    for f in braid_labelings(b, w.birack):
        assert evaluate_braid(b, f, w) == w.eye()


def test_evaluate_accepts_closure_labelings():
    w = get("braid3")
    b = parse_braid("1 1 1 2")
    d = braid_closure(b)
    from_closure = sorted(str(evaluate_braid(b, f, w).trace()) for f in enumerate_labelings(d, w.birack))
    from_tuples = sorted(str(evaluate_braid(b, f, w).trace()) for f in braid_labelings(b, w.birack))
    assert from_closure == from_tuples


def test_open_labels_rejected():
    w = get("braid3")
    with pytest.raises(LabelMismatch):
        evaluate_braid(parse_braid("1 1 1 2"), (1, 1, 1), w)
    with pytest.raises(LabelMismatch):
        evaluate_braid(parse_braid("1"), (1, 2), w)


def random_word(rng, strands, length):
    return [rng.choice([1, -1]) * rng.randrange(1, strands) for _ in range(length)]


@pytest.mark.parametrize("seed", range(5))
def test_conjugation_invariance(seed):
    rng = random.Random(seed)
    w = get("braid3")
    base = parse_braid("1 1 1 2")
    want = phi_mw(base, w)
    for _ in range(10):
        c = BraidWord(3, random_word(rng, 3, rng.randint(1, 3)))
        assert phi_mw(c * base * c.inverse(), w) == want


def test_broken_table_detected():
    w = get("braid3")
    sigma = dict(w.sigma)
    sigma[(1, 1, 1)] = RingMatrix.from_rows([[0, 1], ["y", 0]], V)
    rep = verify_braid_weight(BraidWeight(w.birack, 3, 2, sigma, V))
    assert not rep.ok
    assert "braid_relation" in rep.witnesses


def test_polynomial_and_json():
    w = get("braid3")
    ms = phi_mw(parse_braid("1 1 1 2"), w)
    assert phi_w_polynomial(ms) == "u^{2*y^2} + u^{2*z^2}"
    again = BraidWeight.from_json(w.to_json())
    assert again.sigma == w.sigma
    assert load_braid_weight("data/braid_weight.json").sigma == w.sigma


def test_loaders_and_errors():
    assert load_braid("braid:1 -2").word == (1, -2)
    assert load_braid("data/trefoil.json").word == (1, 1, 1)
    with pytest.raises(ParseError):
        BraidWeight.from_json({"birack": get("ex3").to_json(), "strands": 2, "dim": 2, "sigma": {"bad": [[1]]}})
