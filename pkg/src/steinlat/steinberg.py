"""The Steinberg lattice, its bilinear form, and the valuation filtration.

Everything is laid out in two coordinate systems:

* coset coordinates: integer (or Galois-ring) coefficient vectors over
  the canonical coset representatives of G/B;
* u-coordinates: length-|U| vectors over the basis {u*e_hat : u in U}
  of the lattice.

The w0-trick makes conversion trivial: for the order-reversing
permutation w0, every coset (u, w0) appears in u*e_hat with coefficient
sg(w0) and in no other basis element, so the |U| columns of the
coset-coordinate matrix X at those cosets form sg(w0) * Identity.
Consequently u-coordinates are read off by slicing, and the action
matrix of any g in G is an integer matrix with entries in {-1, 0, 1}.

Row-vector convention throughout: a module vector v (u-coordinates)
has coset coordinates v @ X, and g sends v to v @ act_matrix(g).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels as kr
from .galoisring import Context, GaloisRing, KField
from .glgroup import (SmallField, CosetTable, build_coset_table, bruhat,
                      coset_key, generators, u_generators, perm_matrix,
                      perm_sign, perm_inverse, sigma_0, u_sigma_roots,
                      inversions)
from .parabolic import Composition


class PrimeTables:
    """Operation tables for the prime field F_ell, shaped like KField so
    the kernels accept either."""

    def __init__(self, ell: int):
        self.ell = ell
        self.f = 1
        self.size = ell
        r = np.arange(ell, dtype=np.int16)
        self.add_t = (r[:, None] + r[None, :]) % ell
        self.mul_t = (r[:, None] * r[None, :]) % ell
        self.neg_t = (-r) % ell
        self.inv_t = np.zeros(ell, dtype=np.int16)
        for a in range(1, ell):
            self.inv_t[a] = pow(int(a), -1, ell)


@dataclass(frozen=True)
class Character:
    """Linear character of U given by its vector c in F_q^(n-1):
    lambda(u) = zeta_p ^ Tr(sum_i c_i * u_{i,i+1})."""

    c: tuple[int, ...]  # field codes, length n-1

    def J(self) -> frozenset[int]:
        return frozenset(i + 1 for i, ci in enumerate(self.c) if ci)

    def parabolic(self) -> Composition:
        return Composition.from_subset(self.J(), len(self.c) + 1)

    def is_generic(self) -> bool:
        return all(self.c)

    def is_trivial(self) -> bool:
        return not any(self.c)


def character_for_subset(J, n: int, F: SmallField) -> Character:
    """Canonical H-orbit representative: the 0/1 vector supported on J."""
    return Character(tuple(1 if i in J else 0 for i in range(1, n)))


class GramData:
    """Elementary divisor data of the Gram matrix over Z/ell^N."""

    def __init__(self, A: np.ndarray, ell: int, N: int):
        self.A = A
        self.ell = ell
        self.N = N
        self.exps, self.S, self.T = kr.snf_mod(A, ell, N)
        self.exps = np.asarray(self.exps, dtype=np.int64)

    def dim_L(self, c: int) -> int:
        return int(np.count_nonzero(self.exps >= c))

    def dim_M(self, c: int) -> int:
        return int(np.count_nonzero(self.exps == c))


class SteinbergLattice:
    """Full pipeline state for one parameter context."""

    def __init__(self, ctx: Context, budget_cosets: int = 200_000):
        self.ctx = ctx
        self.F = SmallField(ctx.q)
        self.n = ctx.n
        self.ring = GaloisRing(ctx)
        self.K = self.ring.residue_field()
        self.prime_tables = PrimeTables(ctx.ell)
        self.tables = self.K if ctx.f > 1 else self.prime_tables
        self.cosets = build_coset_table(self.F, ctx.n, budget=budget_cosets)
        self._build_U()
        self._build_X()
        self._gens = generators(self.F, self.n)
        self._ugens = u_generators(self.F, self.n)
        self._act_cache: dict[bytes, np.ndarray] = {}
        self._gram: GramData | None = None

    # -- U enumeration -----------------------------------------------------

    def _build_U(self):
        n, q, F = self.n, self.ctx.q, self.F
        self.phi_positions = [(i, j) for i in range(1, n)
                              for j in range(i + 1, n + 1)]
        fund = [(i, i + 1) for i in range(1, n)]
        self.fund_slots = [self.phi_positions.index(r) for r in fund]
        self.U_coeffs = list(itertools.product(range(q),
                                               repeat=len(self.phi_positions)))
        self.U_index = {c: k for k, c in enumerate(self.U_coeffs)}
        self.U_mats = []
        for coeffs in self.U_coeffs:
            M = F.identity(n)
            for (i, j), a in zip(self.phi_positions, coeffs):
                M[i - 1, j - 1] = a
            self.U_mats.append(M)
        self.nU = len(self.U_mats)
        self.id_u = self.U_index[tuple([0] * len(self.phi_positions))]

    def u_index_of(self, M: np.ndarray) -> int:
        coeffs = tuple(int(M[i - 1, j - 1]) for (i, j) in self.phi_positions)
        return self.U_index[coeffs]

    # -- the coefficient matrix X -----------------------------------------

    def _build_X(self):
        n, F, T = self.n, self.F, self.cosets
        perms = list(itertools.permutations(range(1, n + 1)))
        signs = {s: perm_sign(s) for s in perms}
        pmats = {s: perm_matrix(s, F) for s in perms}
        X = np.zeros((self.nU, T.size), dtype=np.int32)
        for k, u in enumerate(self.U_mats):
            for s in perms:
                cu, cs, _ = bruhat(F, F.matmul(u, pmats[s]))
                idx = T.index[coset_key(F, cu, cs)]
                X[k, idx] += signs[s]
        self.X = X
        w0 = sigma_0(n)
        self.sign_w0 = perm_sign(w0)
        _, minus = u_sigma_roots(perm_inverse(w0))  # = all of Phi
        piv = np.empty(self.nU, dtype=np.int64)
        for k, u in enumerate(self.U_mats):
            coords = tuple(int(u[i - 1, j - 1]) for (i, j) in minus)
            piv[k] = T.index[(w0, coords)]
        self.piv = piv
        assert np.array_equal(X[:, piv],
                              self.sign_w0 * np.eye(self.nU, dtype=np.int32)), \
            "w0-columns must form a signed identity"

    def e_hat(self) -> np.ndarray:
        """Coset coordinates of e_hat (integer vector)."""
        return self.X[self.id_u].astype(np.int64)

    def coords(self, y: np.ndarray, check: bool = True) -> np.ndarray:
        """u-coordinates of a coset-coordinate vector lying in the
        lattice span.  Works elementwise on the last coset axis, so GR
        vectors of shape (ncosets, f) pass through unchanged in f."""
        v = self.sign_w0 * y[self.piv]
        if check:
            lhs = np.tensordot(v, self.X, axes=([0], [0])) if v.ndim > 1 \
                else v @ self.X
            if v.ndim > 1:
                lhs = np.moveaxis(lhs, -1, 0)
            if not np.array_equal(lhs % self.ring.mod, y % self.ring.mod):
                raise ValueError("vector is not in the lattice span")
        return v

    # -- group action ------------------------------------------------------

    def act_matrix(self, g: np.ndarray) -> np.ndarray:
        """Integer matrix M_g (entries -1/0/1) with v |-> v @ M_g."""
        key = g.tobytes()
        if key not in self._act_cache:
            amap = self.cosets.act_map(g)
            inv = np.empty_like(amap)
            inv[amap] = np.arange(len(amap), dtype=amap.dtype)
            self._act_cache[key] = (self.sign_w0
                                    * self.X[:, inv[self.piv]]).astype(np.int64)
        return self._act_cache[key]

    @property
    def group_generators(self) -> list[np.ndarray]:
        return self._gens

    @property
    def unipotent_generators(self) -> list[np.ndarray]:
        return self._ugens

    def act_matrices_K(self, gens=None) -> list[np.ndarray]:
        gens = self._gens if gens is None else gens
        return [self.act_matrix(g) % self.ctx.ell for g in gens]

    # -- characters and the distinguished vectors -------------------------

    def all_characters(self):
        return [Character(c) for c in
                itertools.product(range(self.ctx.q), repeat=self.n - 1)]

    def char_exponents(self, lam: Character) -> np.ndarray:
        """Exponent k(u) with lambda(u) = zeta_p^k(u), for every u."""
        F = self.F
        out = np.zeros(self.nU, dtype=np.int64)
        for k, coeffs in enumerate(self.U_coeffs):
            acc = 0
            for ci, slot in zip(lam.c, self.fund_slots):
                if ci:
                    acc = int(F.add_t[acc, F.mul_t[ci, coeffs[slot]]])
            out[k] = int(F.trace_t[acc])
        return out

    def E_direct(self, lam: Character) -> np.ndarray:
        """E as sum over U of lambda(u) * (u e_hat), GR coset coords of
        shape (ncosets, f)."""
        exps = self.char_exponents(lam)
        E = np.zeros((self.cosets.size, self.ctx.f), dtype=np.int64)
        for k in range(self.ctx.p):
            mask = exps == k
            if mask.any():
                colsum = self.X[mask].sum(axis=0, dtype=np.int64)
                E += colsum[:, None] * self.ring.zeta_pow(k)[None, :]
        return E % self.ring.mod

    def E_closed(self, lam: Character) -> np.ndarray:
        """E via the cancellation formula: only permutations whose
        positive complement avoids the support of lambda contribute,
        each with multiplicity |U_{sigma^{-1}}^+|."""
        n, F, T = self.n, self.F, self.cosets
        q = self.ctx.q
        supp = lam.J()  # fundamental i with c_i != 0
        E = np.zeros((T.size, self.ctx.f), dtype=np.int64)
        for s in itertools.permutations(range(1, n + 1)):
            plus, minus = u_sigma_roots(perm_inverse(s))
            if any(j == i + 1 and i in supp for (i, j) in plus):
                continue  # lambda nontrivial on the positive part
            mult = perm_sign(s) * q ** len(plus)
            fund_idx = {r: t for t, r in enumerate(minus)
                        if r[1] == r[0] + 1 and r[0] in supp}
            for coeffs in itertools.product(range(q), repeat=len(minus)):
                acc = 0
                for (i, j), t in fund_idx.items():
                    ci = lam.c[i - 1]
                    acc = int(F.add_t[acc, F.mul_t[ci, coeffs[t]]])
                k = int(F.trace_t[acc])
                idx = T.index[(s, coeffs)]
                E[idx] += mult * self.ring.zeta_pow(k)
        return E % self.ring.mod

    def E_coords(self, lam: Character) -> np.ndarray:
        """u-coordinates of E: simply (zeta_p^k(u))_u, shape (|U|, f)."""
        exps = self.char_exponents(lam)
        out = np.zeros((self.nU, self.ctx.f), dtype=np.int64)
        for k in range(self.ctx.p):
            out[exps == k] = self.ring.zeta_pow(k)[None, :]
        return out

    def F_lambda(self, lam: Character) -> np.ndarray:
        """Mod-l reduction of E in u-coordinates, as packed K codes."""
        exps = self.char_exponents(lam)
        zbar = int(self.K.pack_vec(self.ring.to_K(self.ring.zeta_p())))
        pw = [1]
        for _ in range(self.ctx.p - 1):
            pw.append(int(self.tables.mul_t[pw[-1], zbar]))
        return np.array([pw[int(k)] for k in exps], dtype=np.int16)

    # -- the bilinear form -------------------------------------------------

    def form(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """f on coset coordinates; GR result of shape (f,).  Integer
        vectors are promoted to constant GR elements."""
        if x.ndim == 1:
            x = np.concatenate(
                [x[:, None], np.zeros((len(x), self.ctx.f - 1), np.int64)], 1)
        if y.ndim == 1:
            y = np.concatenate(
                [y[:, None], np.zeros((len(y), self.ctx.f - 1), np.int64)], 1)
        # one polynomial convolution per coset, batched over cosets
        f = self.ctx.f
        conv = np.zeros(2 * f - 1, dtype=object)
        xo = x.astype(object)
        yo = y.astype(object)
        for i in range(f):
            for j in range(f):
                conv[i + j] += int(np.dot(xo[:, i], yo[:, j]))
        out = np.array([int(conv[i]) for i in range(f)], dtype=np.int64)
        for k in range(f - 1):
            if conv[f + k]:
                out = (out + int(conv[f + k]) * self.ring._red[k]) % self.ring.mod
        return out % self.ring.mod

    def gram(self) -> GramData:
        if self._gram is None:
            Xf = self.X.astype(np.float64)
            A = (Xf @ Xf.T).astype(np.int64)
            assert np.array_equal(A, A.T)
            self._gram = GramData(A, self.ctx.ell, self.ctx.N)
        return self._gram

    # -- filtration --------------------------------------------------------

    def filtration_dims(self) -> dict[int, tuple[int, int]]:
        g = self.gram()
        return {c: (g.dim_L(c), g.dim_M(c))
                for c in range(int(g.exps.max()) + 1)}

    def L_basis_rows(self, c: int) -> np.ndarray:
        """Rows (mod l, prime-subfield codes) spanning L(c) in
        u-coordinates."""
        g = self.gram()
        rows = g.S[g.exps >= c] % self.ctx.ell
        return rows.astype(np.int16)

    def I_basis_rows(self, c: int) -> np.ndarray:
        """Integer rows spanning I(c) as a free module: l^{max(c-e_i,0)}
        times the i-th row of S, mod l^N."""
        g = self.gram()
        scale = np.array([self.ctx.ell ** max(c - int(e), 0) for e in g.exps],
                         dtype=np.int64)
        return (scale[:, None] * g.S) % self.ring.mod

    def S_inverse_modN(self) -> np.ndarray:
        """Inverse of the Smith row transform S mod l^N (Newton lift of
        the mod-l inverse)."""
        g = self.gram()
        ell, mod = self.ctx.ell, self.ring.mod
        n = g.S.shape[0]
        R, piv, rank = kr.rref_K(
            np.concatenate([g.S % ell, np.eye(n, dtype=np.int64)],
                           axis=1).astype(np.int16),
            self.prime_tables)
        assert rank == n
        Y = R[:, n:].astype(np.int64)
        Sf = (g.S % mod).astype(np.float64)
        for _ in range(self.ctx.N.bit_length() + 1):
            SY = (Sf @ Y.astype(np.float64)) % mod
            Y = (Y.astype(np.float64) @ ((2 * np.eye(n) - SY) % mod)) % mod
            Y = Y.astype(np.int64)
        assert np.array_equal((Sf @ Y) % mod, np.eye(n) % mod)
        return Y

    def char_value_K(self, lam: Character, u_mat: np.ndarray) -> int:
        """Packed K code of lambda-bar(u) for a unipotent matrix u."""
        exps = self.char_exponents(lam)
        k = int(exps[self.u_index_of(u_mat)])
        zbar = int(self.K.pack_vec(self.ring.to_K(self.ring.zeta_p())))
        v = 1
        for _ in range(k):
            v = int(self.tables.mul_t[v, zbar])
        return v

    def tc_eigvec(self, c: int, lam: Character) -> np.ndarray:
        """Canonical U-eigenvector of T^c for the character lam, as packed
        K codes in the scaled Smith basis.

        It is the image of l^k * E_lam with k = max(c - theta(P(lam)), 0):
        the least power of l placing E_lam inside I(c), whose image in
        T^c = I(c)/l I(c) is then nonzero.  Exactness of the coordinate
        division certifies membership in I(c)."""
        from .parabolic import theta
        g = self.gram()
        ell, mod = self.ctx.ell, self.ring.mod
        assert self.nU * mod * mod < 2**53, "float64 matmul would overflow"
        k_lam = max(c - theta(lam.parabolic(), self.ctx), 0)
        E = self.E_coords(lam) % mod
        Sinv = self.S_inverse_modN().astype(np.float64)
        scale = np.array([ell ** max(c - int(e), 0) for e in g.exps],
                         dtype=np.int64)
        planes = []
        for i in range(self.ctx.f):
            w = ((ell ** k_lam * E[:, i]) % mod).astype(np.float64)
            planes.append(((w @ Sinv) % mod).astype(np.int64))
        W = np.stack(planes, axis=1)          # (nU, f) coords mod l^N
        quo, rem = np.divmod(W, scale[:, None])
        assert not rem.any(), "l^k E_lam must lie in I(c)"
        digits = (quo % ell).astype(np.int16)
        code = np.zeros(self.nU, dtype=np.int16)
        for i in range(self.ctx.f):
            code += digits[:, i] * ell ** i
        return code

    def tc_action_matrices(self, c: int, gens=None) -> list[np.ndarray]:
        """Action matrices of the generators on T^c = I(c)/l I(c), in the
        scaled Smith basis, entries mod l."""
        gens = self._gens if gens is None else gens
        g = self.gram()
        ell, mod = self.ctx.ell, self.ring.mod
        kvec = np.array([max(c - int(e), 0) for e in g.exps], dtype=np.int64)
        scale = ell ** kvec
        Rc = (scale[:, None] * g.S) % mod
        Sinv = self.S_inverse_modN()
        out = []
        for gmat in gens:
            M = self.act_matrix(gmat)
            T1 = (Rc.astype(np.float64) @ M.astype(np.float64)) % mod
            T2 = (T1 @ Sinv.astype(np.float64)) % mod
            T2 = T2.astype(np.int64)
            # divide column j by l^{k_j}; exactness certifies that the
            # action preserves I(c)
            q, r = np.divmod(T2, scale[None, :])
            assert not r.any(), "action must preserve I(c)"
            out.append((q % ell).astype(np.int16))
        return out
