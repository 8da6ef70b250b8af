"""Acceptance criteria 1-8, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; they are also repeated in the terminal summary.
"""

import itertools
import random
import time
from collections import Counter

import sympy as sp

from birackforge import (
    BraidWord,
    apply_framed_move,
    birack_from_matrix,
    braid_closure,
    classify_weight,
    count_labelings,
    enumerate_labelings,
    evaluate,
    parse_braid,
    parse_poly,
    phi_integral,
    phi_mw,
    phi_qm,
    search_braid_weights,
    trace_components,
    verify_braid_weight,
    verify_weight,
)
from birackforge.presets import get, kauffman_weight
from birackforge.search import enumerate_biracks
from birackforge.tangle import random_framed_moves

import conftest
import oracles
from oracles import A, matrix_to_sympy, to_sympy


def criterion(n, title, checks):
    """Print and record one line, then fail if any sub-check failed."""
    failed = [label for label, ok in checks if not ok]
    status = "PASS" if not failed else "FAIL"
    line = f"criterion {n}: {status}  {title}"
    if failed:
        line += "  [failed: " + "; ".join(failed) + "]"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert not failed, line


def block_matrix(rows):
    n = len(rows)
    return birack_from_matrix([r[:n] for r in rows], [r[n:] for r in rows])


def test_criterion_1_birack_validation_and_rank():
    hopf = block_matrix([[2, 2, 2, 1, 1, 1], [1, 1, 1, 2, 2, 2], [3, 3, 3, 3, 3, 3]])
    ex0 = block_matrix([[1, 1, 2, 2], [2, 2, 1, 1]])
    start = time.perf_counter()
    three = enumerate_biracks(3)
    elapsed = time.perf_counter() - start
    all_small = enumerate_biracks(1) + enumerate_biracks(2) + three
    counterexamples = [b for b in all_small if b.rank not in (1, 2)]
    criterion(1, f"birack validation and rank ({len(all_small)} biracks, n=3 in {elapsed:.2f}s)", [
        ("Hopf-example matrix has rank 2", hopf.rank == 2),
        ("ex0 matrix validates", ex0.n == 2),
        ("rank is 1 or 2 for every birack with n <= 3", not counterexamples),
        ("n=3 enumeration under 60 s", elapsed < 60),
    ])


def test_criterion_2_counting_invariant():
    hopf_res = phi_integral(get("hopf"), get("hopf-birack"))
    flip = get("ex3")
    powers = {name: phi_integral(get(name), flip).total for name in ("unknot", "hopf", "trefoil", "unlink3")}
    comps = {name: trace_components(get(name)).count for name in powers}
    split = sorted(hopf_res.by_framing.values())
    criterion(2, f"counting invariant (Hopf total {hopf_res.total}, split {split}; flip birack {powers})", [
        ("Phi^Z(Hopf) = 12", hopf_res.total == 12),
        ("Hopf per-framing split {1,3,3,5}", split == [1, 3, 3, 5]),
        ("Phi^Z = 2^c for the flip birack", all(powers[k] == 2 ** comps[k] for k in powers)),
    ])


def _normalized_scalar(d, q):
    (val,) = phi_qm(d, q).counts
    return to_sympy(val[0, 0])


def test_criterion_3_kauffman_weight():
    q = kauffman_weight()
    rep = verify_weight(q)
    unknot = get("unknot")
    f = next(enumerate_labelings(unknot, q.birack))
    raw = to_sympy(evaluate(unknot, f, q)[0, 0])
    direct = (matrix_to_sympy(q.N[1]) * matrix_to_sympy(q.U[1]))[0, 0]
    base = unknot.elementary()
    framed = {}
    for w in (0, 1, -1, 2, -2):
        d = base if w == 0 else apply_framed_move(
            base, "phone-cord", (1, 1), "insert", n=abs(w), kind="L+" if w > 0 else "L-")
        assert trace_components(d).framing == (w,)
        framed[w] = _normalized_scalar(d, q)
    values = {}
    for word in ((1, 1, 1), (-1, -1, -1)):
        d = braid_closure(BraidWord(2, word))
        values[word] = (_normalized_scalar(d, q), oracles.normalized_bracket_of_closure(word, d))
    right, left = values[(1, 1, 1)][0], values[(-1, -1, -1)][0]
    criterion(3, "Kauffman weight (axioms, unknot, framing independence, skein oracle, chirality)", [
        ("all axioms I-VI", rep.ok),
        ("unknot = -A^2 - A^-2 = N.U", sp.expand(raw - direct) == 0 and sp.expand(raw - (-A**2 - A**-2)) == 0),
        ("unknot normalized value equal for framings 0, +-1, +-2",
         all(sp.expand(v - framed[0]) == 0 for v in framed.values())),
        ("closures match skein oracle", all(sp.expand(a - b) == 0 for a, b in values.values())),
        ("chirality detected", sp.expand(right - left) != 0
         and sp.expand(right - framed[0]) != 0 and sp.expand(left - framed[0]) != 0),
    ])


def test_criterion_4_ex3_weight():
    q = get("ex3-weight")
    rep = verify_weight(q)
    I = q.eye(2)
    literal = I.kron(q.N[2]).kron(I) @ q.Xinv(1, 2).kron(q.Xinv(2, 1)) @ I.kron(q.U[2]).kron(I)
    a, b = sp.symbols("a b")
    printed = sp.Matrix([[0, 0, 0, 0], [0, a**-2, -b**2, 0], [0, -b**2, a**-2, 0], [0, 0, 0, 0]])
    # the same product from the printed factors, independent of the library
    n = sp.Symbol("n")
    Xi = sp.Matrix([[0, 0, 0, 1 / b], [0, a, 0, 0], [0, 0, a, 0], [1 / b, 0, 0, 0]])
    N2 = sp.Matrix([[0, -n, n, 0]])
    U2 = sp.Matrix([0, 1 / n, -1 / n, 0])
    I2 = sp.eye(2)
    by_hand = sp.simplify(
        sp.kronecker_product(I2, N2, I2) * sp.kronecker_product(Xi, Xi) * sp.kronecker_product(I2, U2, I2))
    got = matrix_to_sympy(literal)
    t3 = {str(matrix_to_sympy(m)): k for m, k in phi_qm(get("t3"), q).counts.items()}
    cls = classify_weight(q)
    criterion(4, f"Ex3 weight (literal contraction gives {got.tolist()[1][1:3]})", [
        ("verify_weight passes", rep.ok),
        ("library contraction agrees with hand contraction", sp.simplify(got - by_hand) == sp.zeros(4, 4)),
        ("contraction equals printed matrix", sp.simplify(got - printed) == sp.zeros(4, 4)),
        ("printed matrix occurs twice in Phi^{Q,M}(T3)", t3.get(str(printed)) == 2),
        ("classified heterogeneous", cls["heterogeneous"]),
    ])


def test_criterion_5_braid_weights():
    w = get("braid3")
    rep = verify_braid_weight(w)
    V = w.variables
    first = phi_mw(parse_braid("1 1 1 2"), w).counts
    second = phi_mw(parse_braid("1 -1 1 2"), w).counts
    rng = random.Random(2024)
    trials, bad = 0, 0
    for base_word in ("1 1 1 2", "1 -1 1 2", "1 -2 1 2 2"):
        base = parse_braid(base_word, 3)
        want = phi_mw(base, w)
        for _ in range(20):
            c = BraidWord(3, [rng.choice([1, -1]) * rng.randrange(1, 3) for _ in range(rng.randint(1, 3))])
            trials += 1
            bad += phi_mw(c * base * c.inverse(), w) != want
    criterion(5, f"braid weights ({trials} conjugation trials)", [
        ("table passes with |j-k| >= 2", rep.ok),
        ("Phi(s1 s1 s1 s2) = {2y^2, 2z^2}",
         first == {parse_poly("2*y^2", V): 1, parse_poly("2*z^2", V): 1}),
        ("Phi(s1 s1^-1 s1 s2) = {2y, 2z}", second == {parse_poly("2*y", V): 1, parse_poly("2*z", V): 1}),
        ("conjugation preserves the multiset", trials >= 50 and bad == 0),
    ])


def test_criterion_6_invariance_suite():
    combos = [
        ("hopf-birack", "Kauffman", kauffman_weight(get("hopf-birack"))),
        ("ex3", "Kauffman", kauffman_weight(get("ex3"))),
        ("ex3", "Ex3", get("ex3-weight")),
    ]
    runs, bad, moves = 0, [], Counter()
    for diagram in ("unknot", "trefoil", "hopf"):
        d = get(diagram)
        for birack_name, weight_name, q in combos:
            b = q.birack
            ref_int = phi_integral(d, b)
            ref_qm = phi_qm(d, q)
            ref_drawn = count_labelings(d, b)
            for seed in range(100):
                e, log = random_framed_moves(d, random.Random(seed), 8, rank=b.rank, max_slices=30)
                moves.update(m for m, *_ in log)
                res = phi_integral(e, b)
                qm = phi_qm(e, q)
                runs += 1
                ok = (res.by_framing == ref_int.by_framing and res.total == ref_int.total
                      and count_labelings(e, b) == ref_drawn and qm == ref_qm and qm.total == res.total)
                if not ok:
                    bad.append((diagram, birack_name, weight_name, seed))
    kinds = {"RII", "RIII", "framed-RI", "phone-cord", "planar"}
    criterion(6, f"invariance suite ({runs} sequences, moves {dict(sorted(moves.items()))})", [
        ("Phi^B per framing class, Phi^Z and Phi^{Q,M} unchanged, |Phi^{Q,M}| = Phi^Z", not bad),
        ("every move type exercised", kinds <= set(moves)),
    ])


def _corpus():
    corpus = {}
    for name in ("unknot", "hopf", "hopf-neg", "unlink2", "unlink3", "trefoil", "figure8", "trefoil-b3"):
        corpus[name] = get(name)
    for strands in (2, 3):
        letters = [g for j in range(1, strands) for g in (j, -j)]
        for length in range(1, 5):
            for word in itertools.product(letters, repeat=length):
                corpus[f"closure{strands}{word}"] = braid_closure(BraidWord(strands, word))
    for seed in range(40):
        for name in ("unknot", "hopf", "trefoil"):
            corpus[f"{name}#{seed}"], _ = random_framed_moves(get(name), random.Random(seed), 4, rank=2, max_slices=20)
    return {k: d for k, d in corpus.items() if d.is_closed and trace_components(d).semiarc_count <= 8}


def test_criterion_7_oracle_equivalence():
    corpus = _corpus()
    biracks = enumerate_biracks(1) + enumerate_biracks(2) + enumerate_biracks(3, dedup=True)
    mismatches = []
    for name, d in corpus.items():
        for b in biracks:
            if count_labelings(d, b) != oracles.brute_force_count(d, b):
                mismatches.append((name, b.block_matrix()))
    criterion(7, f"oracle equivalence ({len(corpus)} diagrams x {len(biracks)} biracks)", [
        ("constraint propagation equals brute force", not mismatches),
    ])


def _pattern(w):
    names, out = {}, []
    for key in sorted(w.sigma):
        entry = str(w.sigma[key][1, 0])
        if entry != "1":
            entry = names.setdefault(entry, len(names))
        out.append((key, entry))
    return tuple(out)


def test_criterion_8_search():
    found = enumerate_biracks(2)
    naive = oracles.naive_biracks(2)
    weights = search_braid_weights(get("flip"), 3, template="antidiag")
    all_biracks = enumerate_biracks(1) + enumerate_biracks(2) + enumerate_biracks(3)
    criterion(8, f"search ({len(found)} biracks n=2, {len(weights)} braid weights)", [
        ("n=2 birack search equals naive 24-candidate loop", {oracles.birack_map(b) for b in found} == naive),
        ("published braid table rediscovered up to renaming", _pattern(get("braid3")) in {_pattern(w) for w in weights}),
        ("every braid weight re-verifies", all(verify_braid_weight(w).ok for w in weights)),
        ("every birack re-validates", all(
            birack_from_matrix(*b.to_matrix()) == b for b in all_biracks)),
    ])
