"""Concrete GL_n(q): field tables, Bruhat canonical forms, and the
permutation action on the flag cosets G/B.

Field elements are integer codes 0..q-1 (base-p packing of polynomial
coefficients for q = p^a); all arithmetic is table lookup.  Matrices
are numpy int16 arrays of codes.  A coset gB is keyed by its canonical
Bruhat data (sigma, coefficients of u on the inversion positions of
sigma^{-1}), which is what the coset table indexes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .galoisring import _poly_mul, _poly_divmod
from .valuation import prime_power, w


class SmallField:
    """F_q = F_p[t]/(g) with dense operation tables and a trace map."""

    def __init__(self, q: int):
        pp = prime_power(q)
        if pp is None:
            raise ValueError(f"q = {q} is not a prime power")
        self.q = q
        self.p, self.a = pp
        p, a = self.p, self.a
        self.modulus = self._find_irreducible(p, a)

        def unpack(code):
            return [(code // p**i) % p for i in range(a)]

        def pack(coeffs):
            return sum((c % p) * p**i for i, c in enumerate(coeffs))

        dt = np.int16
        self.add_t = np.zeros((q, q), dtype=dt)
        self.mul_t = np.zeros((q, q), dtype=dt)
        self.neg_t = np.zeros(q, dtype=dt)
        self.inv_t = np.zeros(q, dtype=dt)
        self.trace_t = np.zeros(q, dtype=dt)  # values in F_p
        for x in range(q):
            cx = unpack(x)
            self.neg_t[x] = pack([-c for c in cx])
            for y in range(q):
                cy = unpack(y)
                self.add_t[x, y] = pack([u + v for u, v in zip(cx, cy)])
                prod = _poly_mul(cx, cy, p)
                _, rem = _poly_divmod(prod, self.modulus, p)
                rem = rem + [0] * (a - len(rem))
                self.mul_t[x, y] = pack(rem)
        for x in range(1, q):
            for y in range(1, q):
                if self.mul_t[x, y] == 1:
                    self.inv_t[x] = y
                    break
            else:
                raise RuntimeError("modulus not irreducible")
        # trace to F_p: Tr(x) = x + x^p + ... + x^(p^(a-1))
        for x in range(q):
            t, acc = x, 0
            for _ in range(a):
                acc = self.add_t[acc, t]
                tp = t
                for _ in range(self.p - 1):
                    tp = self.mul_t[tp, t]
                t = tp
            assert acc < p, "trace must land in the prime subfield"
            self.trace_t[x] = acc
        self.theta = self._primitive_element()

    @staticmethod
    def _find_irreducible(p: int, a: int) -> list[int]:
        if a == 1:
            return [0, 1]  # t, i.e. arithmetic is plain mod p
        for code in range(p**a):
            coeffs = [(code // p**i) % p for i in range(a)] + [1]
            # irreducible iff no root extension... brute: no factor of
            # degree 1..a//2
            if SmallField._is_irreducible(coeffs, p):
                return coeffs
        raise RuntimeError("unreachable")

    @staticmethod
    def _is_irreducible(f: list[int], p: int) -> bool:
        a = len(f) - 1
        for deg in range(1, a // 2 + 1):
            for code in range(p**deg):
                g = [(code // p**i) % p for i in range(deg)] + [1]
                _, rem = _poly_divmod(f[:], g, p)
                if not rem:
                    return False
        return True

    def _primitive_element(self) -> int:
        if self.q == 2:
            return 1
        for t in range(2, self.q):
            x, order = t, 1
            while x != 1:
                x = self.mul_t[x, t]
                order += 1
            if order == self.q - 1:
                return t
        raise RuntimeError("no primitive element found")

    # -- matrix helpers (arrays of codes) ---------------------------------

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        n = A.shape[0]
        C = np.zeros((n, B.shape[1]), dtype=np.int16)
        for k in range(n):
            term = self.mul_t[A[:, k][:, None], B[k, :][None, :]]
            C = self.add_t[C, term]
        return C

    def matvec(self, A: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.matmul(A, v[:, None])[:, 0]

    def identity(self, n: int) -> np.ndarray:
        M = np.zeros((n, n), dtype=np.int16)
        np.fill_diagonal(M, 1)
        return M

    def matinv(self, A: np.ndarray) -> np.ndarray:
        n = A.shape[0]
        M = A.copy()
        I = self.identity(n)
        for c in range(n):
            piv = next((r for r in range(c, n) if M[r, c]), None)
            if piv is None:
                raise ValueError("singular matrix")
            if piv != c:
                M[[c, piv]] = M[[piv, c]]
                I[[c, piv]] = I[[piv, c]]
            inv = self.inv_t[M[c, c]]
            M[c] = self.mul_t[inv, M[c]]
            I[c] = self.mul_t[inv, I[c]]
            for r in range(n):
                if r != c and M[r, c]:
                    f = M[r, c]
                    M[r] = self.add_t[M[r], self.mul_t[f, self.neg_t[M[c]]]]
                    I[r] = self.add_t[I[r], self.mul_t[f, self.neg_t[I[c]]]]
        return I

    def t_ij(self, n: int, i: int, j: int, a: int) -> np.ndarray:
        """Root element I + a*E_ij (1-based i != j)."""
        M = self.identity(n)
        M[i - 1, j - 1] = a
        return M


# ---------------------------------------------------------------------------
# permutations


def inversions(sigma: tuple[int, ...]) -> list[tuple[int, int]]:
    """All (i, j), 1-based, i < j with sigma(i) > sigma(j)."""
    n = len(sigma)
    return [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n)
            if sigma[i] > sigma[j]]


def perm_sign(sigma: tuple[int, ...]) -> int:
    return -1 if len(inversions(sigma)) % 2 else 1


def perm_inverse(sigma: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s - 1] = i + 1
    return tuple(inv)


def sigma_0(n: int) -> tuple[int, ...]:
    """The order-reversing permutation (1,n)(2,n-1)..."""
    return tuple(range(n, 0, -1))


def perm_matrix(sigma: tuple[int, ...], F: SmallField) -> np.ndarray:
    n = len(sigma)
    M = np.zeros((n, n), dtype=np.int16)
    for j in range(n):
        M[sigma[j] - 1, j] = 1
    return M


def u_sigma_roots(sigma: tuple[int, ...]) -> tuple[list, list]:
    """Root positions of U_sigma^+ (complement of inversions) and of
    U_sigma^- (the inversions)."""
    n = len(sigma)
    inv = set(inversions(sigma))
    plus = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)
            if (i, j) not in inv]
    minus = sorted(inv)
    return plus, minus


def enumerate_unipotent(roots: list[tuple[int, int]], F: SmallField, n: int):
    """All products of t_r(a_r) over the given root positions, as
    (coeff-tuple, matrix) pairs; size q^len(roots)."""
    for coeffs in itertools.product(range(F.q), repeat=len(roots)):
        M = F.identity(n)
        for (i, j), a in zip(roots, coeffs):
            if a:
                M = F.matmul(M, F.t_ij(n, i, j, a))
        yield coeffs, M


# ---------------------------------------------------------------------------
# Bruhat canonical form


def bruhat(F: SmallField, g: np.ndarray):
    """Canonical (u, sigma, b) with g = u * P_sigma * b, b upper
    triangular, u unitriangular supported on the inversions of
    sigma^{-1}.

    Column reduction by right B-multiplication: per column (left to
    right) the pivot is the lowest nonzero row; scale it to 1 and clear
    its row rightward.  The pivot pattern is the permutation, and what
    is left above the pivots is u * P_sigma.
    """
    n = g.shape[0]
    M = g.copy()
    sigma = [0] * n
    for c in range(n):
        r = max((r for r in range(n) if M[r, c]), default=None)
        if r is None:
            raise ValueError("singular matrix")
        sigma[c] = r + 1
        inv = F.inv_t[M[r, c]]
        M[:, c] = F.mul_t[inv, M[:, c]]
        for c2 in range(c + 1, n):
            f = M[r, c2]
            if f:
                M[:, c2] = F.add_t[M[:, c2], F.mul_t[f, F.neg_t[M[:, c]]]]
    sigma = tuple(sigma)
    P = perm_matrix(sigma, F)
    u = F.matmul(M, P.T)  # P^{-1} = P^T
    b = F.matmul(F.matinv(M), g)
    return u, sigma, b


def coset_key(F: SmallField, u: np.ndarray, sigma: tuple[int, ...]):
    """Hashable key (sigma, u-coefficients at the inversion positions of
    sigma^{-1})."""
    _, minus = u_sigma_roots(perm_inverse(sigma))
    coords = tuple(int(u[i - 1, j - 1]) for (i, j) in minus)
    return (sigma, coords)


# ---------------------------------------------------------------------------
# coset table


class BudgetExceededError(Exception):
    def __init__(self, size: int, budget: int):
        super().__init__(f"[G:B] = {size} exceeds coset budget {budget}")
        self.size = size
        self.budget = budget


@dataclass
class CosetTable:
    F: SmallField
    n: int
    reps: list[np.ndarray]          # canonical representative matrices
    keys: list[tuple]               # canonical keys, same order
    index: dict                     # key -> position
    sigma_of: list[tuple[int, ...]]

    @property
    def size(self) -> int:
        return len(self.reps)

    def act(self, g: np.ndarray, i: int) -> int:
        u, sigma, _ = bruhat(self.F, self.F.matmul(g, self.reps[i]))
        return self.index[coset_key(self.F, u, sigma)]

    def act_map(self, g: np.ndarray) -> np.ndarray:
        """Permutation i -> act(g, i) as an int32 array."""
        out = np.empty(self.size, dtype=np.int32)
        for i in range(self.size):
            out[i] = self.act(g, i)
        return out


def index_GB(n: int, q: int) -> int:
    out = 1
    for j in range(1, n + 1):
        out *= w(j, q=q)
    return out


def build_coset_table(F: SmallField, n: int, budget: int = 200_000) -> CosetTable:
    size = index_GB(n, F.q)
    if size > budget:
        raise BudgetExceededError(size, budget)
    reps, keys, sigma_of = [], [], []
    index = {}
    for sigma in itertools.permutations(range(1, n + 1)):
        P = perm_matrix(sigma, F)
        _, minus = u_sigma_roots(perm_inverse(sigma))
        for coeffs in itertools.product(range(F.q), repeat=len(minus)):
            u = F.identity(n)
            for (i, j), a in zip(minus, coeffs):
                u[i - 1, j - 1] = a  # positions are independent: u is
                # determined entrywise on its support
            key = (sigma, coeffs)
            index[key] = len(reps)
            reps.append(F.matmul(u, P))
            keys.append(key)
            sigma_of.append(sigma)
    assert len(reps) == size
    return CosetTable(F=F, n=n, reps=reps, keys=keys, index=index,
                      sigma_of=sigma_of)


# ---------------------------------------------------------------------------
# generators


def generators(F: SmallField, n: int) -> list[np.ndarray]:
    """Verified generating set: fundamental transpositions, the root
    elements t_{i,i+1}(theta), and diag(theta, 1, ..., 1) when q > 2."""
    gens = []
    for i in range(1, n):
        sigma = list(range(1, n + 1))
        sigma[i - 1], sigma[i] = sigma[i], sigma[i - 1]
        gens.append(perm_matrix(tuple(sigma), F))
    for i in range(1, n):
        gens.append(F.t_ij(n, i, i + 1, F.theta))
    if F.q > 2:
        D = F.identity(n)
        D[0, 0] = F.theta
        gens.append(D)
    return gens


def u_generators(F: SmallField, n: int) -> list[np.ndarray]:
    """All fundamental root elements t_{i,i+1}(c), c != 0; they generate
    U (commutators supply the non-fundamental roots)."""
    return [F.t_ij(n, i, i + 1, c) for i in range(1, n) for c in range(1, F.q)]


def group_closure_order(F: SmallField, gens: list[np.ndarray], cap: int = 10**6) -> int:
    """Order of the generated group by BFS; for small-n verification."""
    seen = {tuple(F.identity(len(gens[0])).flat)}
    frontier = [F.identity(gens[0].shape[0])]
    while frontier:
        nxt = []
        for M in frontier:
            for g in gens:
                Mg = F.matmul(M, g)
                key = tuple(Mg.flat)
                if key not in seen:
                    seen.add(key)
                    nxt.append(Mg)
                    if len(seen) > cap:
                        raise RuntimeError("closure cap exceeded")
        frontier = nxt
    return len(seen)


def gl_order(n: int, q: int) -> int:
    out = 1
    for k in range(n):
        out *= q**n - q**k
    return out
