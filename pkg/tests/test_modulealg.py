import numpy as np
import pytest

from steinlat._kernels import matmul_K
from steinlat.modulealg import (Subspace, eigenvector_direct, is_irreducible,
                                soc_layer)
from steinlat.parabolic import Composition, star_classes, star_of
from steinlat.steinberg import Character


# -- subspace algebra -------------------------------------------------------


def test_subspace_algebra(algebras):
    ma = algebras[(3, 2, 3)]
    rng = np.random.default_rng(9)
    size = ma.SL.nU
    t = ma.ops.t
    A = Subspace(ma.ops, size,
                 rng.integers(0, t.size, size=(3, size)).astype(np.int16))
    B = Subspace(ma.ops, size,
                 rng.integers(0, t.size, size=(3, size)).astype(np.int16))
    S = A.sum(B)
    assert S.dim == A.dim + B.dim - A.isect_dim(B)
    assert S.contains_rows(A.R) and S.contains_rows(B.R)
    # canonical form: span equality implies object equality
    perm = rng.permutation(A.dim)
    A2 = Subspace(ma.ops, size, A.R[perm])
    assert A2 == A and hash(A2) == hash(A)
    # reduction annihilates members
    assert not A.reduce(A.R).any()


def test_kops_matmul_matches_kernel(algebras):
    for nql, ma in algebras.items():
        rng = np.random.default_rng(10)
        t = ma.ops.t
        A = rng.integers(0, t.size, size=(7, 11)).astype(np.int16)
        B = rng.integers(0, t.size, size=(11, 5)).astype(np.int16)
        assert np.array_equal(ma.ops.matmul(A, B), matmul_K(A, B, t)), nql


# -- spins and eigenlines ---------------------------------------------------


def test_spin_generic_is_everything(algebras):
    for nql, ma in algebras.items():
        lam = Character((1,) * (ma.ctx.n - 1))
        assert ma.L_space().spin(lam).dim == ma.SL.nU, nql


def test_spin_trivial_is_bottom_term(algebras):
    for nql, ma in algebras.items():
        triv = Character((0,) * (ma.ctx.n - 1))
        assert ma.L_space().spin(triv) == ma.L_sub(ma.ctx.b), nql


def test_eigenline_lives_in_its_layer(algebras):
    # the lam eigenline lies in L(c) exactly for c <= theta(P(lam))
    from steinlat.parabolic import theta
    for nql, ma in algebras.items():
        space = ma.L_space()
        for lam in ma.chars:
            th = theta(lam.parabolic(), ma.ctx)
            x = space.eig(lam)
            for c in range(ma.ctx.b + 1):
                assert ma.L_sub(c).contains(x) == (c <= th), (nql, lam.c, c)


def test_eigenvector_counts_per_section(algebras):
    from steinlat.parabolic import theta
    for nql, ma in algebras.items():
        g = ma.SL.gram()
        for c in range(ma.ctx.b + 1):
            amb, den = ma.L_sub(c), ma.L_sub(c + 1)
            found = [mu for mu in ma.chars
                     if ma.eigenvector(mu, amb, den) is not None]
            expect = [lam for lam in ma.chars
                      if theta(lam.parabolic(), ma.ctx) == c]
            assert len(found) == len(expect), (nql, c)
            assert g.dim_M(c) >= len(found), (nql, c)
            if ma.ctx.n == 2:
                # only for n = 2 does every basis line come from a
                # character: dim L = q = number of characters + trivial
                assert g.dim_M(c) == len(found), (nql, c)


def test_direct_eigen_solver_matches_closed_form(algebras):
    for nql, ma in algebras.items():
        space = ma.L_space()
        t = ma.ops.t
        for lam in ma.chars:
            scalars = [t.inv_t[ma.SL.char_value_K(lam, u)]
                       for u in ma.SL.unipotent_generators]
            rows = eigenvector_direct(space, scalars)
            assert rows.shape[0] == 1, (nql, lam.c)
            assert Subspace(ma.ops, space.dim, rows) == \
                Subspace(ma.ops, space.dim, space.eig(lam)[None, :])


# -- socle / radical --------------------------------------------------------


def test_bottom_term_is_irreducible(algebras):
    for nql, ma in algebras.items():
        assert ma.is_irreducible(ma.L_sub(ma.ctx.b)), nql
        if ma.ctx.b > 0:
            assert not ma.is_irreducible(ma.L_space().full()), nql


def test_socle_and_radical_for_d1(algebras):
    for nql, ma in algebras.items():
        if ma.ctx.d != 1:
            continue
        assert ma.soc() == ma.L_sub(ma.ctx.b), nql
        assert ma.rad() == ma.L_sub(1), nql


def test_soc_series_peels_to_everything(algebras):
    for nql, ma in algebras.items():
        series = ma.L_soc_series()
        assert sum(d for layer in series for d in layer.dims) == ma.SL.nU
        # layers are strictly increasing submodules
        for layer in series:
            assert ma.L_space().is_submodule(layer.soc)
        assert series[-1].soc.dim == ma.SL.nU


def test_rad_chain_decreases_to_zero(algebras):
    for nql, ma in algebras.items():
        chain = ma.rad_chain()
        dims = [s.dim for s in chain]
        assert all(x > y for x, y in zip(dims, dims[1:]))
        assert dims[-1] == 0
        for s in chain:
            assert ma.L_space().is_submodule(s)


def test_composition_dims_stable_under_dualizing(algebras):
    # L and T^b have the same composition factor dimensions
    for nql, ma in algebras.items():
        assert ma.composition_dims() == \
            ma.composition_dims(series=ma.tc_soc_series(ma.ctx.b)), nql


# -- the standard modules N(P) ----------------------------------------------


def test_N_of_whole_group(algebras):
    for nql, ma in algebras.items():
        info = ma.N_of(Composition((ma.ctx.n,)))
        assert info.c == star_of(Composition((ma.ctx.n,)), ma.ctx).theta()
        g = ma.SL.gram()
        if len(star_classes(info.c, ma.ctx)) == 1:
            assert info.dim == g.dim_M(info.c), nql


def test_N_of_borel(algebras):
    for nql, ma in algebras.items():
        info = ma.N_of(Composition((1,) * ma.ctx.n))
        assert info.c == ma.ctx.b
        assert info.amb == ma.L_sub(ma.ctx.b)
        assert info.den.dim == 0


def test_c_length_vs_star_count(algebras):
    from steinlat.parabolic import count_star, pvalues
    for nql, ma in algebras.items():
        assert ma.c_length() >= len(pvalues(ma.ctx))
        assert ma.c_length() <= count_star(ma.ctx)


# -- commutants -------------------------------------------------------------


def test_commutant_scalar(algebras):
    for nql, ma in algebras.items():
        assert ma.commutant_dim(0) == 1, nql
        assert ma.commutant_dim(ma.ctx.b) == 1, nql


# -- probes and the battery -------------------------------------------------


def test_tc_probes(algebras):
    for nql, ma in algebras.items():
        for c in range(ma.ctx.b + 1):
            rep = ma.tc_probe(c)
            assert rep.passed, (nql, c, rep)
            assert rep.dim == ma.SL.nU
            assert rep.composition_dims == ma.composition_dims(), (nql, c)


def test_battery_all_contexts(algebras):
    for nql, ma in algebras.items():
        report = ma.verify_structure()
        assert report.passed, (nql, [(r.name, r.status, r.detail)
                                     for r in report.checks
                                     if r.status == "fail"])
        if ma.ctx.d == 1:
            assert report.by_name("socle_series").status == "pass"
            assert report.by_name("radical_series").status == "pass"
        else:
            assert report.by_name("socle_series").status in ("pass", "info")


def test_battery_budget_skip(algebras):
    ma = algebras[(3, 2, 7)]
    report = ma.verify_structure(dim_budget=2)
    assert all(r.status == "skip" for r in report.checks)
    assert "budget" in report.checks[0].detail["reason"]


def test_battery_unknown_check(algebras):
    with pytest.raises(ValueError):
        algebras[(2, 2, 3)].verify_structure(checks=["no_such_check"])


def test_soc_layer_consistency(algebras):
    ma = algebras[(3, 2, 7)]
    space = ma.L_space()
    soc, constituents = soc_layer(space, ma.chars, space.full(),
                                  space.zero())
    assert soc == ma.soc()
    assert sum(w.dim for _, w in constituents) == soc.dim
    for _, w in constituents:
        assert is_irreducible(space, ma.chars, w)
