import numpy as np
import pytest

from steinlat import build_context
from steinlat.glgroup import index_GB
from steinlat.parabolic import index_PB, pvalues
from steinlat.steinberg import Character, SteinbergLattice, character_for_subset


@pytest.fixture(scope="module")
def lattices():
    return {nql: SteinbergLattice(build_context(*nql))
            for nql in [(2, 2, 3), (2, 3, 2), (3, 2, 3), (3, 2, 7)]}


# -- characters -------------------------------------------------------------


def test_character_parabolic(lattices):
    SL = lattices[(3, 2, 3)]
    chars = SL.all_characters()
    assert len(chars) == SL.ctx.q ** (SL.n - 1)
    for lam in chars:
        # J(lambda) = supports of nonzero entries; P(lambda) comes back
        # through the subset correspondence
        assert character_for_subset(lam.J(), SL.n, SL.F).J() == lam.J()
    generic = [lam for lam in chars if lam.is_generic()]
    assert len(generic) == (SL.ctx.q - 1) ** (SL.n - 1)
    trivial = [lam for lam in chars if lam.is_trivial()]
    assert len(trivial) == 1
    # trivial character <-> Borel; generic character <-> whole group
    assert trivial[0].parabolic().parts == (1,) * SL.n
    assert all(lam.parabolic().parts == (SL.n,) for lam in generic)


# -- the action -------------------------------------------------------------


def test_act_matrix_entries(lattices):
    for SL in lattices.values():
        for g in SL.group_generators:
            M = SL.act_matrix(g)
            assert M.shape == (SL.nU, SL.nU)
            assert set(np.unique(M)) <= {-1, 0, 1}


def test_act_matrix_antihomomorphism(lattices):
    # row vectors act on the right: M_{gh} = M_h M_g
    for SL in lattices.values():
        g, h = SL.group_generators[0], SL.group_generators[-1]
        lhs = SL.act_matrix(SL.F.matmul(g, h))
        assert np.array_equal(lhs, SL.act_matrix(h) @ SL.act_matrix(g))


def test_act_matrix_invertible_over_Z(lattices):
    SL = lattices[(3, 2, 3)]
    for g in SL.group_generators:
        M = SL.act_matrix(g)
        d = round(np.linalg.det(M.astype(float)))
        assert d in (1, -1)


def test_coords_roundtrip(lattices):
    SL = lattices[(3, 2, 3)]
    for k in (0, 3, SL.nU - 1):
        unit = np.zeros(SL.nU, dtype=np.int64)
        unit[k] = 1
        assert np.array_equal(SL.coords(SL.X[k].astype(np.int64)), unit)
    with pytest.raises(ValueError):
        bad = np.zeros(SL.cosets.size, dtype=np.int64)
        bad[0] = 1
        SL.coords(bad)


# -- distinguished vectors --------------------------------------------------


def test_E_direct_equals_closed(lattices):
    for nql in [(2, 2, 3), (3, 2, 3)]:
        SL = lattices[nql]
        for lam in SL.all_characters():
            assert np.array_equal(SL.E_direct(lam), SL.E_closed(lam)), \
                (nql, lam.c)


def test_E_coords_match(lattices):
    # u-coordinates of E agree with slicing its coset coordinates
    SL = lattices[(2, 3, 2)]
    for lam in SL.all_characters():
        E = SL.E_direct(lam)
        assert np.array_equal(SL.coords(E) % SL.ring.mod,
                              SL.E_coords(lam) % SL.ring.mod)


def test_form_of_E_with_translates(lattices):
    # f(E_lambda, u e_hat) = lambda(u) [G : P(lambda)]
    for nql in [(2, 2, 3), (2, 3, 2)]:
        SL = lattices[nql]
        mod = SL.ring.mod
        ehat = np.zeros(SL.nU, dtype=np.int64)
        ehat[SL.id_u] = 1
        for lam in SL.all_characters():
            idx = index_GB(SL.n, SL.ctx.q) // index_PB(lam.parabolic(),
                                                       SL.ctx)
            E = SL.E_direct(lam)
            exps = SL.char_exponents(lam)
            for ui, u in enumerate(SL.U_mats):
                trans = ((ehat @ SL.act_matrix(u)) @ SL.X) % mod
                lhs = SL.form(E, trans.astype(np.int64))
                rhs = (SL.ring.zeta_pow(int(exps[ui])) * idx) % mod
                assert np.array_equal(lhs, rhs), (nql, lam.c, ui)


# -- Gram matrix and filtration ---------------------------------------------


def test_gram_2_2_3(lattices):
    assert np.array_equal(lattices[(2, 2, 3)].gram().A,
                          np.array([[2, 1], [1, 2]]))


def test_gram_invariance(lattices):
    for SL in lattices.values():
        A = SL.gram().A
        for g in SL.group_generators:
            M = SL.act_matrix(g)
            assert np.array_equal(M @ A @ M.T, A)


def test_exponent_support_is_pvalues(lattices):
    for SL in lattices.values():
        assert sorted(set(int(e) for e in SL.gram().exps)) == \
            pvalues(SL.ctx)


def test_layer_dims_sum(lattices):
    for SL in lattices.values():
        dims = SL.filtration_dims()
        assert dims[0][0] == SL.nU                       # L(0) = L
        assert sum(m for _, m in dims.values()) == SL.nU
        for c in range(1, len(dims)):
            assert dims[c][0] == dims[c - 1][0] - dims[c - 1][1]


def test_L_basis_rank(lattices):
    SL = lattices[(3, 2, 3)]
    from steinlat._kernels import rref_K
    for c, (dl, _) in SL.filtration_dims().items():
        rows = SL.L_basis_rows(c)
        _, _, rank = rref_K(rows, SL.prime_tables)
        assert rows.shape[0] == rank == dl


def test_S_inverse(lattices):
    SL = lattices[(3, 2, 3)]
    mod = SL.ring.mod
    S = SL.gram().S % mod
    Y = SL.S_inverse_modN()
    assert np.array_equal((S @ Y) % mod, np.eye(SL.nU, dtype=np.int64))


# -- T^c machinery ----------------------------------------------------------


def test_char_value_trivial(lattices):
    SL = lattices[(3, 2, 3)]
    triv = Character((0,) * (SL.n - 1))
    for u in SL.unipotent_generators:
        assert SL.char_value_K(triv, u) == 1
    lam = SL.all_characters()[-1]
    assert SL.char_value_K(lam, SL.F.identity(SL.n)) == 1


def test_tc_eigvec_is_eigenvector(lattices):
    for nql in [(2, 2, 3), (3, 2, 3), (2, 3, 2)]:
        SL = lattices[nql]
        t = SL.tables
        for c in range(SL.ctx.b + 1):
            mats = SL.tc_action_matrices(c, SL.unipotent_generators)
            for lam in SL.all_characters():
                x = SL.tc_eigvec(c, lam)
                assert x.any()
                for u, Mu in zip(SL.unipotent_generators, mats):
                    scal = t.inv_t[SL.char_value_K(lam, u)]
                    from steinlat._kernels import matmul_K
                    lhs = matmul_K(x[None, :], Mu, t)[0]
                    assert np.array_equal(lhs, t.mul_t[scal, x]), \
                        (nql, c, lam.c)


def test_tc_eigvec_at_c0_is_F_lambda(lattices):
    # at c = 0 the scaling power max(0 - theta, 0) vanishes and T^0 is
    # L/lL in the plain Smith basis, so mapping the eigenvector back
    # through S must recover the reduction of E
    for nql in [(2, 2, 3), (3, 2, 3)]:
        SL = lattices[nql]
        ell = SL.ctx.ell
        S = SL.gram().S % ell
        for lam in SL.all_characters():
            x = SL.tc_eigvec(0, lam)          # prime codes when f = 1
            back = (x.astype(np.int64) @ S) % ell
            assert np.array_equal(back.astype(np.int16), SL.F_lambda(lam))


def test_tc_action_entries(lattices):
    SL = lattices[(2, 3, 2)]
    for c in range(SL.ctx.b + 1):
        for M in SL.tc_action_matrices(c):
            assert M.dtype == np.int16
            assert M.shape == (SL.nU, SL.nU)
