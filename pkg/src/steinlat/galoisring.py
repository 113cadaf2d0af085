"""Parameter context and the truncated coefficient ring.

The coefficient ring R is modeled by the Galois ring GR(l^N, f): the
unramified extension of Z/l^N of degree f, where f is the multiplicative
order of l mod p, so that the ring contains a primitive p-th root of
unity.  Its residue field K = F_{l^f} hosts all mod-l linear algebra.

Elements are length-f coefficient vectors mod l^N relative to a fixed
monic modulus: a Hensel lift of the lexicographically least monic
degree-f factor of the p-th cyclotomic polynomial over F_l.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import valuation
from .valuation import nu, prime_power, is_prime, s_seq


@dataclass(frozen=True)
class Context:
    """All derived parameters for a triple (n, q, ell).

    ``m = -1`` (and empty digit/s tuples) encodes the degenerate case
    e > n, where the filtration collapses to the single term L.
    """

    n: int
    q: int
    p: int
    a: int
    ell: int
    e: int
    d: int
    m: int
    b: int
    s: tuple[int, ...]  # s_0..s_m
    x: tuple[int, ...]  # base-ell digits of floor(n/e), least significant first
    f: int
    N: int

    @property
    def nfloor(self) -> int:
        return self.n // self.e


def build_context(n: int, q: int, ell: int, precision: int | None = None) -> Context:
    """Validate (n, q, ell) and compute every derived invariant.

    Default truncation precision is N = b + 2: elementary divisor
    exponents of the Gram matrix never exceed b, and the +2 margin
    guards intermediate sums.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"q = {q} is not a prime power")
    p, a = pp
    if not is_prime(ell):
        raise ValueError(f"ell = {ell} is not prime")
    if ell == p:
        raise ValueError("ell must differ from the characteristic of F_q")
    e = valuation.compute_e(ell, q)
    d = valuation.compute_d(ell, q)
    nfloor = n // e
    if nfloor == 0:
        m, x, s, b = -1, (), (), 0
    else:
        digits = []
        t = nfloor
        while t:
            digits.append(t % ell)
            t //= ell
        m = len(digits) - 1
        x = tuple(digits)
        s = tuple(s_seq(i, ell=ell, d=d) for i in range(m + 1))
        b = sum(si * xi for si, xi in zip(s, x))
    # multiplicative order of ell mod p
    f, t = 1, ell % p
    while t != 1:
        t = (t * ell) % p
        f += 1
    N = precision if precision is not None else b + 2
    if N < b + 2:
        raise ValueError(f"precision {N} below required {b + 2}")
    return Context(n=n, q=q, p=p, a=a, ell=ell, e=e, d=d, m=m, b=b, s=s, x=x, f=f, N=N)


# ---------------------------------------------------------------------------
# polynomial helpers over F_ell (coefficient lists, low degree first)


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[int], b: list[int], ell: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % ell
    return _poly_trim(out)


def _poly_divmod(a: list[int], b: list[int], ell: int) -> tuple[list[int], list[int]]:
    a = a[:]
    binv = pow(b[-1], -1, ell)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and _poly_trim(a):
        if not a or len(a) < len(b):
            break
        c = (a[-1] * binv) % ell
        k = len(a) - len(b)
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] = (a[k + i] - c * bi) % ell
        _poly_trim(a)
    return _poly_trim(q), _poly_trim(a)


def _poly_xgcd(a: list[int], b: list[int], ell: int):
    r0, r1 = a[:], b[:]
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while _poly_trim(r1[:]):
        q, r = _poly_divmod(r0, r1, ell)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_trim([(x - y) % ell for x, y in
                                 _zip_longest(s0, _poly_mul(q, s1, ell))])
        t0, t1 = t1, _poly_trim([(x - y) % ell for x, y in
                                 _zip_longest(t0, _poly_mul(q, t1, ell))])
    # normalize gcd to be monic
    lead_inv = pow(r0[-1], -1, ell)
    r0 = [(c * lead_inv) % ell for c in r0]
    s0 = [(c * lead_inv) % ell for c in s0]
    t0 = [(c * lead_inv) % ell for c in t0]
    return r0, s0, t0


def _zip_longest(a: list[int], b: list[int]):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


def _cyclotomic_factor(p: int, ell: int, f: int) -> list[int]:
    """Lexicographically least monic degree-f factor of Phi_p over F_ell."""
    phi = [1] * p  # 1 + x + ... + x^(p-1)
    if f == p - 1:
        return phi
    # enumerate monic candidates in lex order of (c_0, ..., c_{f-1})
    for code in range(ell**f):
        coeffs = []
        t = code
        for _ in range(f):
            coeffs.append(t % ell)
            t //= ell
        cand = coeffs + [1]
        _, rem = _poly_divmod(phi, cand, ell)
        if not rem:
            return cand
    raise RuntimeError("no degree-f factor found (unreachable for valid f)")


class GaloisRing:
    """GR(l^N, f) with a fixed Hensel-lifted modulus.

    Elements are numpy int64 arrays of shape (f,) with entries mod l^N;
    vectorized code works on arrays whose last axis has length f.
    """

    def __init__(self, ctx: Context):
        self.ctx = ctx
        self.ell = ctx.ell
        self.N = ctx.N
        self.f = ctx.f
        self.p = ctx.p
        self.mod = ctx.ell**ctx.N
        g0 = _cyclotomic_factor(ctx.p, ctx.ell, ctx.f)
        self.modulus = self._hensel_lift(g0)
        # reduction table: x^(f+k) mod modulus, k = 0..f-2, as rows of length f
        self._red = self._reduction_rows()
        self._zeta = self._compute_zeta()
        self._zeta_pows = [self.one()]
        for _ in range(ctx.p - 1):
            self._zeta_pows.append(self.mul(self._zeta_pows[-1], self._zeta))

    # -- construction ------------------------------------------------------

    def _hensel_lift(self, g0: list[int]) -> list[int]:
        """Lift the factorization Phi_p = g*h from mod l to mod l^N."""
        ell, p, N = self.ell, self.p, self.N
        phi = [1] * p
        h0, _ = _poly_divmod(phi, g0, ell)[0], None
        h0 = _poly_divmod(phi, g0, ell)[0]
        gcd, a0, b0 = _poly_xgcd(g0, h0, ell)
        assert gcd == [1], "factor and cofactor must be coprime mod ell"
        g = g0[:]
        hh = h0[:]
        modk = ell
        while modk < ell**N:
            modk_next = min(modk * ell, ell**N)
            # e = (Phi - g*h) / modk  mod ell
            prod = self._zmul(g, hh, ell**N)
            err = [(c1 - c2) % (ell**N) for c1, c2 in _zip_longest(phi, prod)]
            assert all(c % modk == 0 for c in err)
            ebar = _poly_trim([(c // modk) % ell for c in err])
            # u = b0*ebar mod g0 (deg < f), v = (ebar - u*h0)/g0 over F_ell
            u = _poly_divmod(_poly_mul(b0, ebar, ell), g0, ell)[1]
            num = _poly_trim([(x - y) % ell for x, y in
                              _zip_longest(ebar, _poly_mul(u, h0, ell))])
            v, rem = _poly_divmod(num, g0, ell)
            assert not rem
            g = [(c1 + modk * c2) % (ell**N) for c1, c2 in _zip_longest(g, u)]
            hh = [(c1 + modk * c2) % (ell**N) for c1, c2 in _zip_longest(hh, v)]
            modk = modk_next
        assert len(g) == self.f + 1 and g[-1] == 1
        return g

    @staticmethod
    def _zmul(a: list[int], b: list[int], mod: int) -> list[int]:
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % mod
        return out

    def _reduction_rows(self) -> np.ndarray:
        """Rows r_k with x^(f+k) = r_k . (1, x, ..., x^(f-1)) mod modulus."""
        f, mod = self.f, self.mod
        rows = np.zeros((max(f - 1, 1), f), dtype=np.int64)
        cur = [(-c) % mod for c in self.modulus[:f]]  # x^f
        for k in range(f - 1):
            rows[k] = cur
            nxt = [0] + cur[:-1]
            nxt = [(c + cur[-1] * (-m) % mod) % mod for c, m in zip(nxt, self.modulus[:f])]
            cur = nxt
        return rows

    def _compute_zeta(self) -> np.ndarray:
        p, ell, mod = self.p, self.ell, self.mod
        if self.f > 1:
            z = np.zeros(self.f, dtype=np.int64)
            z[1] = 1
            return z
        # f = 1: p | ell - 1; Teichmueller lift of the least primitive
        # p-th root of unity mod ell
        root = None
        for t in range(2, ell):
            if pow(t, p, ell) == 1 and pow(t, 1, ell) != 1:
                # t has order p iff t^p = 1 and t != 1 (p prime)
                root = t
                break
        if root is None:
            raise RuntimeError("no primitive p-th root mod ell")
        t = root
        while True:
            t2 = pow(t, ell, mod)
            if t2 == t:
                break
            t = t2
        return np.array([t], dtype=np.int64)

    # -- arithmetic --------------------------------------------------------

    def zero(self) -> np.ndarray:
        return np.zeros(self.f, dtype=np.int64)

    def one(self) -> np.ndarray:
        z = np.zeros(self.f, dtype=np.int64)
        z[0] = 1
        return z

    def from_int(self, k: int) -> np.ndarray:
        z = np.zeros(self.f, dtype=np.int64)
        z[0] = k % self.mod
        return z

    def add(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x + y) % self.mod

    def sub(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x - y) % self.mod

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of two elements (shape (f,) each)."""
        f = self.f
        conv = np.zeros(2 * f - 1, dtype=object)
        for i in range(f):
            if x[i]:
                conv[i:i + f] += int(x[i]) * y.astype(object)
        out = conv[:f].copy()
        for k in range(f - 1):
            if conv[f + k]:
                out += int(conv[f + k]) * self._red[k].astype(object)
        return np.array([int(c) % self.mod for c in out], dtype=np.int64)

    def val(self, x: np.ndarray) -> int:
        """l-adic valuation; returns N as the at-least-N token for 0."""
        if not x.any():
            return self.N
        return min(nu(int(c), self.ell) for c in x if c)

    def unit_inverse(self, x: np.ndarray) -> np.ndarray:
        if self.val(x) != 0:
            raise ValueError("not a unit in the Galois ring")
        # invert mod ell via brute search in the residue field, then lift
        inv = None
        xbar = x % self.ell
        for code in range(self.ell**self.f):
            cand = np.array([(code // self.ell**i) % self.ell for i in range(self.f)],
                            dtype=np.int64)
            prod = self.mul(xbar, cand) % self.ell
            if prod[0] == 1 and not prod[1:].any():
                inv = cand
                break
        assert inv is not None
        y = inv
        # Newton: y <- y(2 - xy), doubling precision each step
        for _ in range(self.N.bit_length() + 1):
            t = self.sub(self.from_int(2), self.mul(x, y))
            y = self.mul(y, t)
        assert self.val(self.sub(self.mul(x, y), self.one())) >= self.N
        return y

    def zeta_p(self) -> np.ndarray:
        return self._zeta.copy()

    def zeta_pow(self, k: int) -> np.ndarray:
        return self._zeta_pows[k % self.p].copy()

    def to_K(self, x: np.ndarray) -> np.ndarray:
        """Reduction mod ell, as a length-f vector over F_ell."""
        return x % self.ell

    # -- residue field tables ---------------------------------------------

    def residue_field(self) -> "KField":
        return KField(self)


class KField:
    """F_{l^f} in packed form: code = sum c_i * l^i for coefficients c_i.

    Carries the dense operation tables the linear-algebra kernels index
    into.  Sizes are tiny (l^f is at most a few hundred).
    """

    def __init__(self, ring: GaloisRing):
        self.ell = ring.ell
        self.f = ring.f
        self.size = ring.ell**ring.f
        if self.size > 2048:
            raise ValueError(
                f"residue field F_{{{self.ell}^{self.f}}} is too large for "
                "dense int16 operation tables")
        ell, f, size = self.ell, self.f, self.size
        mod_bar = [c % ell for c in ring.modulus]

        def unpack(code):
            return [(code // ell**i) % ell for i in range(f)]

        def pack(coeffs):
            return sum((c % ell) * ell**i for i, c in enumerate(coeffs))

        self._unpack, self._pack = unpack, pack
        dt = np.int16
        self.add_t = np.zeros((size, size), dtype=dt)
        self.mul_t = np.zeros((size, size), dtype=dt)
        self.neg_t = np.zeros(size, dtype=dt)
        self.inv_t = np.zeros(size, dtype=dt)
        for a in range(size):
            ca = unpack(a)
            self.neg_t[a] = pack([-c for c in ca])
            for b in range(size):
                cb = unpack(b)
                self.add_t[a, b] = pack([x + y for x, y in zip(ca, cb)])
                prod = _poly_mul(ca, cb, ell)
                _, rem = _poly_divmod(prod, mod_bar, ell)
                rem = rem + [0] * (f - len(rem))
                self.mul_t[a, b] = pack(rem)
        for a in range(1, size):
            for b in range(1, size):
                if self.mul_t[a, b] == 1:
                    self.inv_t[a] = b
                    break
            else:
                raise RuntimeError("residue field modulus not irreducible")

    def pack_vec(self, coeff_rows: np.ndarray) -> np.ndarray:
        """(..., f) coefficient array mod l -> packed codes."""
        out = np.zeros(coeff_rows.shape[:-1], dtype=np.int16)
        for i in range(self.f):
            out = out + (coeff_rows[..., i] % self.ell).astype(np.int16) * self.ell**i
        return out.astype(np.int16)

    def unpack_vec(self, codes: np.ndarray) -> np.ndarray:
        out = np.zeros(codes.shape + (self.f,), dtype=np.int16)
        t = codes.astype(np.int64)
        for i in range(self.f):
            out[..., i] = t % self.ell
            t //= self.ell
        return out
