import pytest

from birackforge import (
    apply_framed_move,
    count_labelings,
    enumerate_labelings,
    insert_kinks,
    parse_diagram,
    phi_basic,
    phi_integral,
    trace_components,
)
from birackforge.errors import LabelMismatch
from birackforge.labeling import Labeling, replay
from birackforge.presets import BIRACKS, get
from birackforge.search import enumerate_biracks

from oracles import brute_force_count

CLOSED = ["unknot", "hopf", "hopf-neg", "unlink2", "trefoil", "figure8", "trefoil-b3"]


@pytest.mark.parametrize("diagram", CLOSED + ["t1", "t2", "t3"])
@pytest.mark.parametrize("birack", sorted(BIRACKS))
def test_counts_match_brute_force(diagram, birack):
    d, b = get(diagram), get(birack)
    assert count_labelings(d, b) == brute_force_count(d, b)


def test_counts_match_brute_force_for_every_two_element_birack():
    for b in enumerate_biracks(2):
        for name in CLOSED:
            d = get(name)
            assert count_labelings(d, b) == brute_force_count(d, b)


def test_unknot_with_hopf_example_birack():
    assert phi_basic(get("unknot"), get("hopf-birack")) == 3


def test_hopf_integral_split():
    res = phi_integral(get("hopf"), get("hopf-birack"))
    assert res.rank == 2
    assert res.by_framing == {(0, 0): 1, (0, 1): 3, (1, 0): 3, (1, 1): 9}
    assert int(res) == 16


@pytest.mark.parametrize("name, c", [("unknot", 1), ("hopf", 2), ("trefoil", 1), ("unlink3", 3), ("figure8", 1)])
def test_flip_birack_gives_two_to_the_c(name, c):
    assert phi_integral(get(name), get("ex3")).total == 2 ** c


def test_phone_cord_preserves_counts_for_rank_two():
    b = get("hopf-birack")
    d = get("trefoil").elementary()
    base = count_labelings(d, b)
    for kind in ("L+", "R-"):
        e = apply_framed_move(d, "phone-cord", (2, 1), "insert", n=2, kind=kind)
        assert count_labelings(e, b) == base
    # a single kink is not enough
    one = apply_framed_move(d, "phone-cord", (2, 1), "insert", n=1, kind="L+")
    assert count_labelings(one, b) != base


def test_labelings_are_consistent_under_replay():
    d, b = get("t3"), get("hopf-birack")
    labs = list(enumerate_labelings(d, b))
    assert len(labs) == count_labelings(d, b)
    for f in labs:
        steps = replay(d, b, f)
        assert len(steps) == len(d.ops[0])
        assert f.bottom() == f.free[:2]
        assert len(f.levels) == len(d.slices) + 1


def test_labeling_order_is_deterministic():
    d, b = get("unlink2"), get("ex3")
    frees = [f.free for f in enumerate_labelings(d, b)]
    assert frees == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_fixed_boundaries():
    d, b = get("t1"), get("ex3")
    assert count_labelings(d, b, bottom=(1, 2)) == 1
    assert count_labelings(d, b, bottom=(1, 2), top=(2, 1)) == 0
    with pytest.raises(LabelMismatch):
        count_labelings(d, b, bottom=(1,))


def test_replay_rejects_bad_labelings():
    d, b = get("t2"), get("ex3")
    f = next(enumerate_labelings(d, b))
    with pytest.raises(LabelMismatch):
        replay(d, b, Labeling(f.levels, (1, 2, 1)))
    with pytest.raises(LabelMismatch):
        replay(d, b, Labeling(((1, 2),) + f.levels[1:], f.free))


def test_kinks_shift_framing_class():
    d = get("hopf")
    res = phi_integral(d, get("hopf-birack"))
    for r, key in (((1, 0), (1, 0)), ((0, 1), (0, 1))):
        assert tuple(w % 2 for w in trace_components(insert_kinks(d, r)).framing) == key
        assert count_labelings(insert_kinks(d, r), get("hopf-birack")) == res.by_framing[key]


def test_no_labelings_when_crossings_conflict():
    # ex0 has rank 2: a single positive kink admits no labeling
    d = parse_diagram("cup / cup id id / id xpos id / cap id id / cap")
    assert count_labelings(d, get("ex0")) == brute_force_count(d, get("ex0")) == 0
