from math import prod

import pytest
from hypothesis import given, strategies as st

from steinlat import build_context
from steinlat.parabolic import (Composition, StarLabel, a10_chain,
                                all_compositions, count_star,
                                count_star_closed, delta, enumerate_star,
                                index_PB, injectivity_verdict,
                                partition_string, phi, pvalues,
                                refines_up_to_equiv, star_classes, star_of,
                                theta, v_count)
from steinlat.valuation import nu, w


@pytest.fixture(scope="module")
def ctx652():
    return build_context(6, 5, 2)


@pytest.fixture(scope="module")
def ctx1052():
    return build_context(10, 5, 2)


# -- compositions -----------------------------------------------------------


def test_partition_string():
    assert partition_string((4, 2)) == "42"
    assert partition_string((2, 2, 2)) == "2^3"
    assert partition_string((4, 1, 1)) == "41^2"
    assert partition_string((12, 1)) == "(12)1"


def test_composition_validation():
    with pytest.raises(ValueError):
        Composition((2, 0, 1))
    with pytest.raises(ValueError):
        Composition(())


@given(st.lists(st.integers(1, 6), min_size=1, max_size=6))
def test_subset_roundtrip(parts):
    P = Composition(tuple(parts))
    assert Composition.from_subset(P.to_subset(), P.n) == P


def test_all_compositions_count():
    # 2^(n-1) compositions of n
    for n in range(1, 8):
        assert len(list(all_compositions(n))) == 2 ** (n - 1)


# -- delta and star labels --------------------------------------------------


def test_delta_reconstructs(ctx652):
    for a in range(1, ctx652.n + 1):
        y = delta(a, ctx652)
        assert y[0] + ctx652.e * sum(
            yi * ctx652.ell**i for i, yi in enumerate(y[1:])) == a


def test_star_of_examples(ctx652):
    # 6 = 3*2 + 0: one block of size e*l = 4 and one of size e = 2
    lab = star_of(Composition((6,)), ctx652)
    assert lab.z == (1, 1) and lab.z_minus1 == 0
    assert lab.partition_string() == "42"
    # (2,2,2): three e-blocks
    lab = star_of(Composition((2, 2, 2)), ctx652)
    assert lab.z == (3, 0)
    # (4,1,1): delta(4) = (0,0,1), two singletons
    lab = star_of(Composition((4, 1, 1)), ctx652)
    assert lab.z == (0, 1) and lab.z_minus1 == 2


def test_star_label_round_trip(ctx1052):
    for lab in enumerate_star(ctx1052):
        assert star_of(lab.to_composition(), ctx1052).z == lab.z


def test_phi_is_index_valuation(ctx652, ctx1052):
    # phi(P) = nu_l [P : B], checked on every composition
    for ctx in (ctx652, ctx1052):
        if ctx.n > 8:
            continue
        for P in all_compositions(ctx.n):
            assert phi(P, ctx) == nu(index_PB(P, ctx), ctx.ell)


def test_index_PB_whole_group(ctx652):
    # P = (n): [G : B] = prod_{j<=n} w(j)
    P = Composition((6,))
    assert index_PB(P, ctx652) == prod(w(j, q=5) for j in range(2, 7))


# -- counting ---------------------------------------------------------------


def test_v_count_frozen(ctx652, ctx1052):
    r6 = v_count(ctx652)
    assert r6.V == 5
    assert r6.all_applicable_agree()
    r10 = v_count(ctx1052)
    assert r10.V == 9
    assert r10.all_applicable_agree()


def test_count_star_matches_enumeration():
    for nql in [(6, 5, 2), (10, 5, 2), (4, 3, 2), (9, 2, 3)]:
        ctx = build_context(*nql)
        labs = enumerate_star(ctx)
        assert len(labs) == len(set(lab.z for lab in labs))
        assert count_star(ctx) == len(labs)


def test_count_star_closed_when_available():
    for nql in [(6, 5, 2), (10, 5, 2), (4, 3, 2), (9, 2, 3), (3, 2, 7)]:
        ctx = build_context(*nql)
        closed = count_star_closed(ctx)
        if closed is not None:
            assert closed == count_star(ctx), nql


def test_star_classes_partition(ctx652):
    labs = enumerate_star(ctx652)
    total = sum(len(star_classes(c, ctx652)) for c in pvalues(ctx652))
    assert total == len(labs)
    assert star_classes(1, ctx652) and \
        {lab.partition_string() for lab in star_classes(1, ctx652)} == \
        {"2^3", "41^2"}


def test_pvalues_frozen(ctx652, ctx1052):
    assert pvalues(ctx652) == [0, 1, 2, 3, 4]
    assert pvalues(ctx1052) == [0, 1, 2, 3, 4, 5, 6, 7, 8]


# -- injectivity of theta on P* ---------------------------------------------


def test_injectivity_verdict_matches_brute():
    for nql in [(6, 5, 2), (10, 5, 2), (4, 3, 2), (9, 2, 3), (3, 2, 7),
                (8, 3, 2), (12, 2, 3)]:
        ctx = build_context(*nql)
        labs = enumerate_star(ctx)
        brute = len({lab.theta() for lab in labs}) == len(labs)
        verdict = injectivity_verdict(ctx)
        assert verdict.injective == brute, nql
        if not verdict.injective:
            a, b = verdict.witness
            assert a != b


# -- the descending-phi chain -----------------------------------------------


def test_a10_chain_properties():
    for nql in [(6, 5, 2), (10, 5, 2), (4, 3, 2), (9, 2, 3)]:
        ctx = build_context(*nql)
        chain = a10_chain(ctx)
        phis = [v for _, v in chain]
        assert phis[0] == ctx.b
        assert all(x - y == 1 for x, y in zip(phis, phis[1:]))
        assert phis[-1] == ctx.b - len(chain) + 1
        for lab, v in chain:
            assert lab.phi() == v


# -- refinement -------------------------------------------------------------


def test_refines_known_pairs():
    a211 = Composition((2, 1, 1))
    a22 = Composition((2, 2))
    a31 = Composition((3, 1))
    assert refines_up_to_equiv(a211, a22)
    assert refines_up_to_equiv(a211, a31)
    assert not refines_up_to_equiv(a22, a31)
    assert not refines_up_to_equiv(a31, a22)
    for P in (a211, a22, a31):
        assert refines_up_to_equiv(P, P)


def test_refines_brute():
    # Q refines P up to reordering iff the parts of Q can be grouped to
    # sum to the parts of P; cross-check against a direct search on n=5
    def brute(Q, P):
        qs, ps = list(Q.parts), sorted(P.parts)

        def rec(ps_left, qs_left):
            if not ps_left:
                return not qs_left
            target = ps_left[-1]

            def pick(i, remaining, chosen_mask):
                if remaining == 0:
                    rest = [x for k, x in enumerate(qs_left)
                            if not chosen_mask & (1 << k)]
                    return rec(ps_left[:-1], rest)
                for k in range(i, len(qs_left)):
                    if chosen_mask & (1 << k) or qs_left[k] > remaining:
                        continue
                    if pick(k + 1, remaining - qs_left[k],
                            chosen_mask | (1 << k)):
                        return True
                return False

            return pick(0, target, 0)

        return rec(ps, qs)

    comps = list(all_compositions(5))
    for Q in comps:
        for P in comps:
            assert refines_up_to_equiv(Q, P) == brute(Q, P), (Q, P)


# -- theta ------------------------------------------------------------------


def test_theta_plus_phi(ctx652):
    for P in all_compositions(6):
        assert theta(P, ctx652) + phi(P, ctx652) == ctx652.b
