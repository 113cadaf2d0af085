"""K-linear module algebra over the group algebra KG acting on L and
its sections.

Everything lives in fixed ambient coordinates: u-coordinates for L and
its subquotients, scaled-Smith coordinates for the torsion modules T^c.
Quotient sections M/N are represented by (ambient, denominator) pairs of
subspaces; vectors are reduced against the denominator.

The workhorse is the one-line-per-character eigenvector map: a nonzero
KG-module in any of these ambient spaces contains a U-eigenvector, the
ambient eigenline of each character is unique (U acts regularly), and
every eigenline has a closed form.  Socles, irreducibility tests and
composition structure all reduce to spinning those lines under the
generator action.  Radicals come from the nondegenerate G-invariant
pairing between L and T^b, under which the radical series of L is the
annihilator chain of the socle series of T^b.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as kr
from .glgroup import index_GB
from .parabolic import (Composition, StarLabel, index_PB, phi, pvalues,
                        refines_up_to_equiv, star_classes, star_of, theta)
from .steinberg import Character, character_for_subset


# ---------------------------------------------------------------------------
# fast K-linear algebra on packed codes (BLAS float64 per coefficient plane)


class KOps:
    """Vectorized field operations on packed int16 codes.

    Matrix products decompose into coefficient planes over the prime
    field, each handled by an exact float64 matmul (all intermediate
    values stay far below 2**53), followed by the modulus reduction of
    the high polynomial degrees.
    """

    def __init__(self, tables, red_rows=None):
        self.t = tables
        self.ell = int(tables.ell)
        self.f = int(tables.f)
        self.red = red_rows  # (f-1, f) rows of x^(f+k) mod the modulus
        if self.f > 1:
            assert red_rows is not None

    def add(self, a, b):
        return self.t.add_t[a, b]

    def sub(self, a, b):
        return self.t.add_t[a, self.t.neg_t[b]]

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        ell, f = self.ell, self.f
        if f == 1:
            out = (A.astype(np.float64) @ B.astype(np.float64)) % ell
            return out.astype(np.int16)
        Ai = [((A // ell**i) % ell).astype(np.float64) for i in range(f)]
        Bj = [((B // ell**j) % ell).astype(np.float64) for j in range(f)]
        conv = [np.zeros((A.shape[0], B.shape[1])) for _ in range(2 * f - 1)]
        for i in range(f):
            for j in range(f):
                conv[i + j] += Ai[i] @ Bj[j]
        out = [conv[t] % ell for t in range(f)]
        for k in range(f - 1):
            c = conv[f + k] % ell
            for j in range(f):
                r = int(self.red[k][j])
                if r:
                    out[j] = (out[j] + c * r) % ell
        code = np.zeros(A.shape[0] * B.shape[1], dtype=np.int16)
        code = code.reshape(A.shape[0], B.shape[1])
        for i in range(f):
            code += (out[i].astype(np.int16)) * ell**i
        return code


class Subspace:
    """Canonical reduced-row-echelon span over K in a fixed ambient
    space; equality and membership tests are exact."""

    __slots__ = ("ops", "amb", "R", "piv")

    def __init__(self, ops: KOps, amb: int, rows=None):
        self.ops = ops
        self.amb = amb
        self.R = np.zeros((0, amb), dtype=np.int16)
        self.piv = np.zeros(0, dtype=np.int64)
        if rows is not None and len(rows):
            s, _ = self.extended(np.asarray(rows, dtype=np.int16))
            self.R, self.piv = s.R, s.piv

    @property
    def dim(self) -> int:
        return len(self.R)

    def reduce(self, V: np.ndarray) -> np.ndarray:
        """Canonical remainders of the rows of V modulo this span."""
        V = np.ascontiguousarray(V, dtype=np.int16)
        if not len(self.R) or not len(V):
            return V.copy()
        coef = V[:, self.piv]
        return self.ops.sub(V, self.ops.matmul(coef, self.R))

    def contains_rows(self, V: np.ndarray) -> bool:
        return not self.reduce(V).any()

    def contains(self, v: np.ndarray) -> bool:
        return self.contains_rows(np.asarray(v, dtype=np.int16)[None, :])

    def extended(self, rows: np.ndarray, chunk: int = 256):
        """Span enlarged by the given rows.  Returns (new_subspace,
        added_rows) where added_rows are the new canonical basis rows."""
        s = self
        added = []
        rows = np.asarray(rows, dtype=np.int16)
        for i in range(0, len(rows), chunk):
            red = s.reduce(rows[i:i + chunk])
            red = red[np.any(red, axis=1)]
            if not len(red):
                continue
            Rn, pivn, rank = kr.rref_K(red, s.ops.t)
            if not rank:
                continue
            Rold, pold = s.R, s.piv
            if len(Rold):
                Rold = s.ops.sub(Rold, s.ops.matmul(Rold[:, pivn], Rn))
            allR = np.vstack([Rold, Rn])
            allp = np.concatenate([pold, pivn])
            order = np.argsort(allp, kind="stable")
            t = object.__new__(Subspace)
            t.ops, t.amb = s.ops, s.amb
            t.R = np.ascontiguousarray(allR[order])
            t.piv = allp[order]
            s = t
            added.append(Rn)
        if not added:
            return s, np.zeros((0, self.amb), dtype=np.int16)
        return s, np.vstack(added)

    def sum(self, other: "Subspace") -> "Subspace":
        return self.extended(other.R)[0]

    def isect_dim(self, other: "Subspace") -> int:
        return self.dim + other.dim - self.sum(other).dim

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.amb == other.amb
                and self.dim == other.dim and np.array_equal(self.R, other.R))

    def __hash__(self):
        return hash((self.amb, self.dim, self.R.tobytes()))


class ActionSpace:
    """Ambient K-space with a generating set of action matrices and the
    closed-form U-eigenline of every linear character of U."""

    def __init__(self, ops: KOps, dim: int, gens, eig_fn, ugens_fn=None,
                 name: str = ""):
        self.ops = ops
        self.dim = dim
        self.name = name
        # generator matrices have prime-subfield integer entries, whose
        # packed codes coincide with their values
        self.gens = [np.ascontiguousarray(np.asarray(g) % ops.ell,
                                          dtype=np.int16) for g in gens]
        self._eig_fn = eig_fn
        self._eig: dict[tuple, np.ndarray] = {}
        self._spin: dict[tuple, Subspace] = {}
        self._ugens_fn = ugens_fn
        self._ugens = None

    def eig(self, lam: Character) -> np.ndarray:
        if lam.c not in self._eig:
            self._eig[lam.c] = np.asarray(self._eig_fn(lam), dtype=np.int16)
        return self._eig[lam.c]

    @property
    def ugens(self):
        if self._ugens is None:
            assert self._ugens_fn is not None
            self._ugens = [np.ascontiguousarray(np.asarray(g) % self.ops.ell,
                                                dtype=np.int16)
                           for g in self._ugens_fn()]
        return self._ugens

    def act(self, V: np.ndarray, g: np.ndarray) -> np.ndarray:
        return self.ops.matmul(np.asarray(V, dtype=np.int16), g)

    def zero(self) -> Subspace:
        return Subspace(self.ops, self.dim)

    def full(self) -> Subspace:
        return Subspace(self.ops, self.dim, np.eye(self.dim, dtype=np.int16))

    def spin_rows(self, rows: np.ndarray,
                  stop_dim: int | None = None) -> Subspace:
        """Least generator-closed subspace containing the given rows."""
        cur = Subspace(self.ops, self.dim, rows)
        frontier = cur.R
        while len(frontier):
            if stop_dim is not None and cur.dim >= stop_dim:
                break
            images = np.vstack([self.act(frontier, g) for g in self.gens])
            cur, frontier = cur.extended(images)
        return cur

    def spin(self, lam: Character) -> Subspace:
        if lam.c not in self._spin:
            self._spin[lam.c] = self.spin_rows(self.eig(lam)[None, :])
        return self._spin[lam.c]

    def is_submodule(self, W: Subspace) -> bool:
        return all(W.contains_rows(self.act(W.R, g)) for g in self.gens)


# ---------------------------------------------------------------------------
# socle machinery on sections (amb, den)


@dataclass
class LayerInfo:
    """One layer of a socle series: cumulative subspace, the distinct
    irreducible constituents (with a generating character each), and
    their dimensions inside the layer."""
    soc: Subspace
    constituents: list[tuple[Character, Subspace]]
    dims: list[int]


def eigen_chars_in(space: ActionSpace, chars, amb: Subspace,
                   den: Subspace) -> list[Character]:
    """Characters whose ambient eigenline is nonzero in the section
    amb/den.  Exact: the ambient eigenline of each character is unique,
    so a section eigenline always lifts to it."""
    out = []
    for lam in chars:
        x = space.eig(lam)
        if amb.contains(x) and not den.contains(x):
            out.append(lam)
    return out


def soc_layer(space: ActionSpace, chars, amb: Subspace, den: Subspace):
    """Socle of the section amb/den, returned as (cumulative subspace
    containing den, list of distinct (character, W) constituents).

    amb must be a submodule containing den.  Every irreducible submodule
    of the section is generated by the image of some ambient eigenline,
    so the socle is the sum of the irreducible ones among them.
    """
    cands = eigen_chars_in(space, chars, amb, den)
    W_of: dict[tuple, Subspace] = {}
    for lam in cands:
        W_of[lam.c] = den.extended(space.spin(lam).R)[0]

    def irreducible(W: Subspace) -> bool:
        for nu in cands:
            if W.contains(space.eig(nu)) and W_of[nu.c].dim < W.dim:
                return False
        return True

    soc = den
    constituents: list[tuple[Character, Subspace]] = []
    for lam in cands:
        W = W_of[lam.c]
        if irreducible(W) and all(W != V for _, V in constituents):
            constituents.append((lam, W))
            soc = soc.sum(W)
    # complete reducibility of the socle: constituents intersect in den
    assert soc.dim - den.dim == sum(W.dim - den.dim for _, W in constituents)
    return soc, constituents


def soc_series(space: ActionSpace, chars,
               top: Subspace | None = None) -> list[LayerInfo]:
    """Ascending socle series of top (default: the whole space)."""
    top = space.full() if top is None else top
    den = space.zero()
    layers: list[LayerInfo] = []
    while den.dim < top.dim:
        soc, cons = soc_layer(space, chars, top, den)
        if soc.dim == den.dim:
            raise RuntimeError("socle stalled below the top; "
                               "the section machinery is inconsistent")
        layers.append(LayerInfo(soc, cons,
                                [W.dim - den.dim for _, W in cons]))
        den = soc
    return layers


def is_irreducible(space: ActionSpace, chars, amb: Subspace,
                   den: Subspace | None = None) -> bool:
    """True iff the section amb/den is a nonzero module in which every
    eigenline generates everything.  Sound and complete: any proper
    nonzero submodule contains some eigenline whose spin stays proper."""
    den = space.zero() if den is None else den
    if amb.dim <= den.dim:
        raise ValueError("zero module rejected")
    for lam in eigen_chars_in(space, chars, amb, den):
        if den.extended(space.spin(lam).R)[0].dim < amb.dim:
            return False
    return True


def eigenvector_direct(space: ActionSpace, scalars_K: list[int]) -> np.ndarray:
    """Oracle eigen-solver: rows spanning {x : x g_i = s_i x} for the
    unipotent generator matrices of the space and given K scalars."""
    t = space.ops.t
    blocks = []
    for M, s in zip(space.ugens, scalars_K):
        B = M.T.copy()
        d = np.arange(space.dim)
        B[d, d] = t.add_t[B[d, d], t.neg_t[s]]
        blocks.append(B)
    return kr.nullspace_K(np.vstack(blocks), t)


# ---------------------------------------------------------------------------
# the L <-> T^b pairing (radicals by duality)


class DualPairing:
    """The G-invariant perfect pairing L x T^b -> K induced by the
    bilinear form: <x, y> = f(x, y~)/l^b mod l for y~ a lift of y into
    I(b).  Annihilators of submodules of T^b are submodules of L, and
    the radical series of L is the annihilator chain of the socle
    series of T^b."""

    def __init__(self, SL):
        self.SL = SL
        ctx = SL.ctx
        ell, b, mod = ctx.ell, ctx.b, SL.ring.mod
        A = SL.gram().A.astype(np.int64)
        Rb = SL.I_basis_rows(b).astype(np.int64)
        bound = SL.nU * int(np.abs(A).max()) * (mod - 1)
        assert bound < 2**62, "pairing matmul would overflow int64"
        M = (A @ Rb.T) % mod
        quo, rem = np.divmod(M, ell**b)
        assert not rem.any(), "form values on I(b) must be divisible by l^b"
        self.Pi = (quo % ell).astype(np.int16)
        _, _, rank = kr.rref_K(self.Pi, SL.prime_tables)
        assert rank == SL.nU, "the pairing must be nondegenerate"
        self.PiT = np.ascontiguousarray(self.Pi.T)

    def annihilator(self, W: Subspace, ops: KOps) -> Subspace:
        """{x in L : <x, W> = 0} as a subspace in u-coordinates."""
        n = self.SL.nU
        if W.dim == 0:
            return Subspace(ops, n, np.eye(n, dtype=np.int16))
        Mm = ops.matmul(W.R, self.PiT)
        rows = kr.nullspace_K(Mm, ops.t)
        return Subspace(ops, n, rows)


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckResult:
    name: str
    status: str          # "pass" | "fail" | "skip" | "info"
    detail: dict = field(default_factory=dict)


@dataclass
class StructureReport:
    context: dict
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def by_name(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass
class SectionInfo:
    """An irreducible layer constituent N(P) = (L'(P)+L(c+1))/L(c+1)."""
    star: StarLabel
    c: int
    lam: Character
    amb: Subspace
    den: Subspace

    @property
    def dim(self) -> int:
        return self.amb.dim - self.den.dim


@dataclass
class TcProbeReport:
    c: int
    dim: int
    embedded_dim: int
    embedded_is_submodule: bool
    quotient_dim_matches: bool
    socle_dims: list[int]
    socle_irreducible: bool
    has_top_constituent: bool | None
    has_bottom_constituent: bool | None
    composition_dims: list[int]

    @property
    def passed(self) -> bool:
        ok = self.embedded_is_submodule and self.quotient_dim_matches
        for flag in (self.has_top_constituent, self.has_bottom_constituent):
            if flag is not None:
                ok = ok and flag
        return ok


# ---------------------------------------------------------------------------
# the module-algebra facade


class ModuleAlgebra:
    """All KG-module computations for one lattice."""

    DIRECT_COMMUTANT_MAX = 32

    def __init__(self, SL):
        self.SL = SL
        self.ctx = SL.ctx
        red = None
        if self.ctx.f > 1:
            red = (SL.ring._red % self.ctx.ell).astype(np.int64)
        self.ops = KOps(SL.tables, red)
        self.chars = SL.all_characters()
        self._L_space: ActionSpace | None = None
        self._tc: dict[int, ActionSpace] = {}
        self._L_sub: dict[int, Subspace] = {}
        self._L_series: list[LayerInfo] | None = None
        self._tc_series: dict[int, list[LayerInfo]] = {}
        self._pairing: DualPairing | None = None
        self._rad_chain: list[Subspace] | None = None

    # -- spaces ------------------------------------------------------------

    def L_space(self) -> ActionSpace:
        if self._L_space is None:
            SL = self.SL
            self._L_space = ActionSpace(
                self.ops, SL.nU, SL.act_matrices_K(),
                eig_fn=SL.F_lambda,
                ugens_fn=lambda: SL.act_matrices_K(SL.unipotent_generators),
                name="L")
        return self._L_space

    def tc_space(self, c: int) -> ActionSpace:
        if c not in self._tc:
            SL = self.SL
            self._tc[c] = ActionSpace(
                self.ops, SL.nU, SL.tc_action_matrices(c),
                eig_fn=lambda lam, c=c: SL.tc_eigvec(c, lam),
                ugens_fn=lambda c=c: SL.tc_action_matrices(
                    c, SL.unipotent_generators),
                name=f"T^{c}")
        return self._tc[c]

    def L_sub(self, c: int) -> Subspace:
        """The filtration term L(c) as a subspace in u-coordinates."""
        if c not in self._L_sub:
            rows = self.SL.L_basis_rows(c).astype(np.int16)
            self._L_sub[c] = Subspace(self.ops, self.SL.nU, rows)
        return self._L_sub[c]

    def lam_of(self, comp: Composition) -> Character:
        return character_for_subset(comp.to_subset(), self.ctx.n, self.SL.F)

    def lam_of_star(self, star: StarLabel) -> Character:
        return self.lam_of(star.to_composition())

    # -- core module operations --------------------------------------------

    def spin(self, vectors: np.ndarray, space: ActionSpace | None = None
             ) -> Subspace:
        space = self.L_space() if space is None else space
        return space.spin_rows(np.atleast_2d(np.asarray(vectors,
                                                        dtype=np.int16)))

    def eigenvector(self, mu: Character, amb: Subspace | None = None,
                    den: Subspace | None = None,
                    space: ActionSpace | None = None) -> np.ndarray | None:
        """The eigenline of the section amb/den on which every u acts by
        mu-bar(u), or None.  Uses the closed form for the inverse
        character (u sends the lambda-line to lambda-bar(u)^{-1} times
        itself)."""
        space = self.L_space() if space is None else space
        F = self.SL.F
        lam = Character(tuple(int(F.neg_t[ci]) for ci in mu.c))
        x = space.eig(lam)
        if amb is not None and not amb.contains(x):
            return None
        if den is not None and den.contains(x):
            return None
        return x

    def is_irreducible(self, amb: Subspace, den: Subspace | None = None,
                       space: ActionSpace | None = None) -> bool:
        space = self.L_space() if space is None else space
        return is_irreducible(space, self.chars, amb, den)

    def soc(self, amb: Subspace | None = None, den: Subspace | None = None,
            space: ActionSpace | None = None) -> Subspace:
        space = self.L_space() if space is None else space
        amb = space.full() if amb is None else amb
        den = space.zero() if den is None else den
        return soc_layer(space, self.chars, amb, den)[0]

    def L_soc_series(self) -> list[LayerInfo]:
        if self._L_series is None:
            self._L_series = soc_series(self.L_space(), self.chars)
        return self._L_series

    def tc_soc_series(self, c: int) -> list[LayerInfo]:
        if c not in self._tc_series:
            self._tc_series[c] = soc_series(self.tc_space(c), self.chars)
        return self._tc_series[c]

    def pairing(self) -> DualPairing:
        if self._pairing is None:
            self._pairing = DualPairing(self.SL)
        return self._pairing

    def rad_chain(self) -> list[Subspace]:
        """[rad^1(L), rad^2(L), ...] down to 0, via annihilators of the
        socle series of T^b."""
        if self._rad_chain is None:
            b = self.ctx.b
            series = self.tc_soc_series(b)
            pairing = self.pairing()
            self._rad_chain = [pairing.annihilator(layer.soc, self.ops)
                               for layer in series]
        return self._rad_chain

    def rad(self) -> Subspace:
        return self.rad_chain()[0]

    def N_of(self, P: Composition | StarLabel) -> SectionInfo:
        star = star_of(P, self.ctx) if isinstance(P, Composition) else P
        c = star.theta()
        lam = self.lam_of_star(star)
        den = self.L_sub(c + 1)
        amb = den.extended(self.L_space().spin(lam).R)[0]
        info = SectionInfo(star, c, lam, amb, den)
        assert info.dim > 0, "N(P) must be nonzero"
        assert is_irreducible(self.L_space(), self.chars, amb, den), \
            "N(P) must be irreducible"
        return info

    def c_length(self) -> int:
        """Number of composition factors of L, by socle peeling."""
        return sum(len(layer.constituents) for layer in self.L_soc_series())

    def composition_dims(self, space: ActionSpace | None = None,
                         series: list[LayerInfo] | None = None) -> list[int]:
        if series is None:
            series = self.L_soc_series() if space is None else \
                soc_series(space, self.chars)
        return sorted(d for layer in series for d in layer.dims)

    # -- commutant ---------------------------------------------------------

    def _restricted_action(self, W: Subspace) -> list[np.ndarray]:
        """Generator action matrices on W in its rref basis (coordinates
        of a member vector are its entries at the pivot columns)."""
        space = self.L_space()
        return [self.ops.matmul(W.R, g)[:, W.piv] for g in space.gens]

    def commutant_dim(self, c: int) -> int | None:
        """Dimension of End_KG(L(c)), or None when out of reach.

        Fast path: a character lam with eigenline in L(c) and
        spin(lam) = L(c) certifies dimension 1, because an endomorphism
        is pinned down by its effect on the one-dimensional lam
        eigenspace.  Fallback: direct solve of the commutant system for
        small dimensions."""
        W = self.L_sub(c)
        space = self.L_space()
        for lam in self.chars:
            if W.contains(space.eig(lam)) and space.spin(lam).dim == W.dim:
                return 1
        k = W.dim
        if k > self.DIRECT_COMMUTANT_MAX:
            return None
        t = self.ops.t
        rho = self._restricted_action(W)
        blocks = []
        for r in rho:
            M = np.zeros((k * k, k * k), dtype=np.int16)
            for i in range(k):
                for j in range(k):
                    row = i * k + j
                    cols = np.arange(k) * k + j
                    M[row, cols] = t.add_t[M[row, cols], r[i, :]]
                    cols = i * k + np.arange(k)
                    M[row, cols] = t.add_t[M[row, cols], t.neg_t[r[:, j]]]
            blocks.append(M)
        null = kr.nullspace_K(np.vstack(blocks), t)
        return len(null)

    # -- T^c probes --------------------------------------------------------

    def tc_probe(self, c: int) -> TcProbeReport:
        """Structural probe of T^c = I(c)/l I(c)."""
        ctx = self.ctx
        b = ctx.b
        assert 0 <= c <= b
        space = self.tc_space(c)
        g = self.SL.gram()
        exps = g.exps
        # the scaled-Smith basis vector e_j generates the embedded copy
        # of L(c+1) exactly when its divisor exponent exceeds c
        emb_rows = np.eye(space.dim, dtype=np.int16)[exps >= c + 1]
        emb = Subspace(self.ops, space.dim, emb_rows)
        embedded_ok = space.is_submodule(emb) and \
            emb.dim == g.dim_L(c + 1)
        quotient_ok = space.dim - emb.dim == space.dim - g.dim_L(c + 1)

        series = self.tc_soc_series(c)
        soc1 = series[0]
        bottom_ok: bool | None = None
        if c < b:
            # the bottom filtration layer survives inside the socle of
            # every proper torsion quotient
            bot_rows = np.eye(space.dim, dtype=np.int16)[exps >= b]
            bot = Subspace(self.ops, space.dim, bot_rows)
            bottom_ok = space.is_submodule(bot) \
                and bot.dim == g.dim_L(b) \
                and is_irreducible(space, self.chars, bot) \
                and soc1.soc.contains_rows(bot.R)

        top_ok: bool | None = None
        if 0 < c < b:
            # the image of v -> l^c v carries a copy of the top layer
            # M(0); its generic eigenline is the c-th scaling of the
            # generic eigenline of L
            lam_gen = Character((1,) * (ctx.n - 1))
            W = space.spin(lam_gen)
            top_ok = (W.dim == g.dim_M(0)
                      and is_irreducible(space, self.chars, W)
                      and soc1.soc.contains_rows(W.R))

        return TcProbeReport(
            c=c, dim=space.dim, embedded_dim=emb.dim,
            embedded_is_submodule=embedded_ok,
            quotient_dim_matches=quotient_ok,
            socle_dims=sorted(soc1.dims),
            socle_irreducible=len(soc1.constituents) == 1,
            has_top_constituent=top_ok,
            has_bottom_constituent=bottom_ok,
            composition_dims=self.composition_dims(series=series))

    # -- the verification battery ------------------------------------------

    ALL_CHECKS = (
        "pvalue_support", "dual_dims", "refinement_monotone",
        "layer_direct_sum", "layers_semisimple", "multiplicity_free",
        "layer_generators", "socle_series", "radical_top",
        "radical_series", "uniserial", "cyclic_terms",
        "composition_series", "commutant_scalar", "lattice_generators",
        "index_note",
    )

    def verify_structure(self, checks=None, *, dim_budget: int = 1024,
                         index_budget: int = 10_000) -> StructureReport:
        ctx = self.ctx
        requested = list(checks) if checks else list(self.ALL_CHECKS)
        unknown = [c for c in requested if c not in self.ALL_CHECKS]
        if unknown:
            raise ValueError(f"unknown checks: {unknown}")
        gb = index_GB(ctx.n, ctx.q)
        context = {"n": ctx.n, "q": ctx.q, "ell": ctx.ell, "e": ctx.e,
                   "d": ctx.d, "b": ctx.b, "dim_L": self.SL.nU,
                   "index_GB": gb, "pvalues": pvalues(ctx)}
        if self.SL.nU > dim_budget or gb > index_budget:
            return StructureReport(context, [
                CheckResult(name, "skip",
                            {"reason": f"budget exceeded: dim L = "
                             f"{self.SL.nU} (max {dim_budget}), [G:B] = "
                             f"{gb} (max {index_budget})"})
                for name in requested])
        results = []
        for name in requested:
            runner = getattr(self, f"_check_{name}")
            try:
                results.append(runner())
            except Exception as exc:  # pragma: no cover - defensive
                results.append(CheckResult(name, "fail",
                                           {"error": repr(exc)}))
        return StructureReport(context, results)

    # individual checks ----------------------------------------------------

    def _pv(self):
        return pvalues(self.ctx)

    def _check_pvalue_support(self) -> CheckResult:
        exps = self.SL.gram().exps
        support = sorted(set(int(e) for e in exps))
        ok = support == self._pv()
        return CheckResult("pvalue_support", "pass" if ok else "fail",
                           {"support": support, "pvalues": self._pv()})

    def _check_dual_dims(self) -> CheckResult:
        """dim I(c)/I(c+1) = dim L - dim L(c+1), read off the divisor
        exponents."""
        g = self.SL.gram()
        data = {}
        ok = True
        for c in range(self.ctx.b + 1):
            lhs = int(np.count_nonzero(g.exps <= c))
            rhs = self.SL.nU - g.dim_L(c + 1)
            data[c] = (lhs, rhs)
            ok = ok and lhs == rhs
        return CheckResult("dual_dims", "pass" if ok else "fail",
                           {"per_c": data})

    def _standard_comps(self) -> list[Composition]:
        n = self.ctx.n
        out = []
        for r in range(n):
            for J in itertools.combinations(range(1, n), r):
                out.append(Composition.from_subset(frozenset(J), n))
        return out

    def _check_refinement_monotone(self) -> CheckResult:
        """Q a refinement of (a parabolic equivalent to) P implies
        spin(F_Q) inside spin(F_P)."""
        space = self.L_space()
        comps = self._standard_comps()
        spins = {P: space.spin(self.lam_of(P)) for P in comps}
        bad = []
        pairs = 0
        for Q in comps:
            for P in comps:
                if Q == P or not refines_up_to_equiv(Q, P):
                    continue
                pairs += 1
                if not spins[P].contains_rows(spins[Q].R):
                    bad.append((Q.parts, P.parts))
        return CheckResult("refinement_monotone",
                           "pass" if not bad else "fail",
                           {"pairs_checked": pairs, "violations": bad})

    def _layer_data(self, c: int):
        den = self.L_sub(c + 1)
        reps = star_classes(c, self.ctx)
        space = self.L_space()
        Ws = [(star, den.extended(space.spin(self.lam_of_star(star)).R)[0])
              for star in reps]
        return den, Ws

    def _check_layer_direct_sum(self) -> CheckResult:
        """M(c) is the direct sum of the distinct N(P), P in P*(c); the
        constituents are irreducible and depend only on the starred
        label."""
        space = self.L_space()
        ok = True
        per_c = {}
        for c in self._pv():
            den, Ws = self._layer_data(c)
            Lc = self.L_sub(c)
            total = den
            for _, W in Ws:
                total = total.sum(W)
            distinct = []
            for star, W in Ws:
                if all(W != V for _, V in distinct):
                    distinct.append((star, W))
            sum_ok = total == Lc
            dims_ok = sum(W.dim - den.dim for _, W in distinct) \
                == Lc.dim - den.dim
            irr_ok = all(is_irreducible(space, self.chars, W, den)
                         for _, W in distinct)
            pair_ok = all(distinct[i][1].isect_dim(distinct[j][1]) == den.dim
                          for i in range(len(distinct))
                          for j in range(i + 1, len(distinct)))
            # a reordered composition labels the same starred parabolic
            # and must give the same constituent
            star_ok = True
            for star, W in Ws:
                parts = star.to_composition().parts
                alt = tuple(sorted(parts))
                if alt != parts:
                    W2 = den.extended(
                        space.spin(self.lam_of(Composition(alt))).R)[0]
                    star_ok = star_ok and W2 == W
            ok_c = sum_ok and dims_ok and irr_ok and pair_ok and star_ok
            ok = ok and ok_c
            per_c[c] = {"constituent_dims":
                        sorted(W.dim - den.dim for _, W in distinct),
                        "labels": [s.partition_string() for s, _ in distinct],
                        "ok": ok_c}
        return CheckResult("layer_direct_sum", "pass" if ok else "fail",
                           {"per_c": per_c})

    def _check_layers_semisimple(self) -> CheckResult:
        """Every layer M(c) equals its own socle."""
        space = self.L_space()
        ok = True
        per_c = {}
        for c in self._pv():
            soc, _ = soc_layer(space, self.chars, self.L_sub(c),
                               self.L_sub(c + 1))
            good = soc == self.L_sub(c)
            per_c[c] = good
            ok = ok and good
        return CheckResult("layers_semisimple", "pass" if ok else "fail",
                           {"per_c": per_c})

    def _check_multiplicity_free(self) -> CheckResult:
        """No two composition factors are isomorphic: the U-character
        sets of the constituents across the socle series are pairwise
        disjoint (isomorphic factors would have equal, nonempty sets)."""
        space = self.L_space()
        series = self.L_soc_series()
        sets = []
        prev = space.zero()
        for layer in series:
            for _, W in layer.constituents:
                sets.append(frozenset(
                    lam.c for lam in
                    eigen_chars_in(space, self.chars, W, prev)))
            prev = layer.soc
        union: set = set()
        total = 0
        disjoint = True
        for s in sets:
            total += len(s)
            if union & s:
                disjoint = False
            union |= s
        covers = len(union) == len(self.chars) and total == len(self.chars)
        ok = disjoint and covers
        return CheckResult("multiplicity_free", "pass" if ok else "fail",
                           {"factor_char_counts": [len(s) for s in sets]})

    def _check_layer_generators(self) -> CheckResult:
        """d = 1: L(c) is the sum of the cyclic modules spin(F_P) over
        P in P*(c) alone."""
        if self.ctx.d != 1:
            return CheckResult("layer_generators", "skip",
                               {"reason": "requires d = 1"})
        space = self.L_space()
        ok = True
        per_c = {}
        for c in self._pv():
            total = space.zero()
            for star in star_classes(c, self.ctx):
                total = total.sum(space.spin(self.lam_of_star(star)))
            good = total == self.L_sub(c)
            per_c[c] = good
            ok = ok and good
        return CheckResult("layer_generators", "pass" if ok else "fail",
                           {"per_c": per_c})

    def _filtration_desc(self) -> list[Subspace]:
        """Filtration terms from the bottom up: L(b), ..., L(0)."""
        return [self.L_sub(c) for c in sorted(self._pv(), reverse=True)]

    def _check_socle_series(self) -> CheckResult:
        """The socle series of L agrees with the filtration (a theorem
        for d = 1; reported without assertion otherwise)."""
        series = self.L_soc_series()
        expected = self._filtration_desc()
        match = (len(series) == len(expected)
                 and all(layer.soc == E
                         for layer, E in zip(series, expected)))
        detail = {"socle_dims": [layer.soc.dim for layer in series],
                  "filtration_dims": [E.dim for E in expected],
                  "match": match}
        if self.ctx.d == 1:
            return CheckResult("socle_series",
                               "pass" if match else "fail", detail)
        return CheckResult("socle_series", "info", detail)

    def _check_radical_top(self) -> CheckResult:
        ok = self.rad() == self.L_sub(1)
        return CheckResult("radical_top", "pass" if ok else "fail",
                           {"rad_dim": self.rad().dim,
                            "L1_dim": self.L_sub(1).dim})

    def _check_radical_series(self) -> CheckResult:
        """The radical series of L agrees with the filtration (a theorem
        for d = 1; reported without assertion otherwise)."""
        chain = self.rad_chain()
        pv = self._pv()
        expected = [self.L_sub(c) for c in pv[1:]]
        expected.append(self.L_space().zero())
        match = (len(chain) == len(expected)
                 and all(R == E for R, E in zip(chain, expected)))
        detail = {"radical_dims": [R.dim for R in chain],
                  "expected_dims": [E.dim for E in expected],
                  "match": match}
        if self.ctx.d == 1:
            return CheckResult("radical_series",
                               "pass" if match else "fail", detail)
        return CheckResult("radical_series", "info", detail)

    def _check_uniserial(self) -> CheckResult:
        """floor(n/e) <= l: L is uniserial, with the filtration as its
        unique composition series."""
        if self.ctx.nfloor > self.ctx.ell:
            return CheckResult("uniserial", "skip",
                               {"reason": "requires floor(n/e) <= l"})
        series = self.L_soc_series()
        expected = self._filtration_desc()
        ok = (all(len(layer.constituents) == 1 for layer in series)
              and len(series) == len(expected)
              and all(layer.soc == E for layer, E in zip(series, expected)))
        return CheckResult("uniserial", "pass" if ok else "fail",
                           {"layer_counts":
                            [len(layer.constituents) for layer in series]})

    def _check_cyclic_terms(self) -> CheckResult:
        """floor(n/e) <= l: every filtration term is the spin of a
        single eigenvector F_P with P in P*(c)."""
        if self.ctx.nfloor > self.ctx.ell:
            return CheckResult("cyclic_terms", "skip",
                               {"reason": "requires floor(n/e) <= l"})
        space = self.L_space()
        ok = True
        per_c = {}
        for c in self._pv():
            good = any(space.spin(self.lam_of_star(star)) == self.L_sub(c)
                       for star in star_classes(c, self.ctx))
            per_c[c] = good
            ok = ok and good
        return CheckResult("cyclic_terms", "pass" if ok else "fail",
                           {"per_c": per_c})

    def _check_composition_series(self) -> CheckResult:
        """When every P*(c) is a singleton the filtration is a
        composition series: each layer is irreducible."""
        if any(len(star_classes(c, self.ctx)) != 1 for c in self._pv()):
            return CheckResult(
                "composition_series", "skip",
                {"reason": "some P*(c) has more than one class"})
        space = self.L_space()
        ok = all(is_irreducible(space, self.chars, self.L_sub(c),
                                self.L_sub(c + 1))
                 for c in self._pv())
        return CheckResult("composition_series", "pass" if ok else "fail",
                           {})

    def _check_commutant_scalar(self) -> CheckResult:
        per_c = {}
        failed = False
        unresolved = []
        for c in self._pv():
            dim = self.commutant_dim(c)
            per_c[c] = dim
            if dim is None:
                unresolved.append(c)
            elif dim != 1:
                failed = True
        if failed:
            status = "fail"
        elif unresolved:
            status = "skip"
        else:
            status = "pass"
        return CheckResult("commutant_scalar", status,
                           {"per_c": per_c, "unresolved": unresolved})

    def _check_lattice_generators(self) -> CheckResult:
        """Experimental: the eigenvectors l^k E_lam generate I(c); by
        Nakayama it suffices that their images span a generating set of
        T^c under the group action."""
        ok = True
        per_c = {}
        for c in range(self.ctx.b + 1):
            space = self.tc_space(c)
            rows = np.vstack([space.eig(lam)[None, :] for lam in self.chars])
            good = space.spin_rows(rows).dim == space.dim
            per_c[c] = good
            ok = ok and good
        return CheckResult("lattice_generators", "pass" if ok else "fail",
                           {"experimental": True, "per_c": per_c})

    def _check_index_note(self) -> CheckResult:
        """Reported, not asserted: for refinements Q of P the index
        [P:Q] has l-valuation phi(P) - phi(Q); when that valuation is 0
        the containment spin(F_P) inside spin(F_Q) is testable mod l and
        is recorded."""
        space = self.L_space()
        comps = self._standard_comps()
        rows = []
        for Q in comps:
            for P in comps:
                if Q == P or not refines_up_to_equiv(Q, P):
                    continue
                v = phi(P, self.ctx) - phi(Q, self.ctx)
                entry = {"P": P.parts, "Q": Q.parts, "val_index": v}
                if v == 0:
                    entry["contained_mod_l"] = bool(
                        space.spin(self.lam_of(Q)).contains_rows(
                            space.spin(self.lam_of(P)).R))
                rows.append(entry)
        return CheckResult("index_note", "info", {"pairs": rows})
