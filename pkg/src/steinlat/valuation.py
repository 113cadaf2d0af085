"""l-adic valuations of q-analog products.

Everything here is pure integer arithmetic on Python big ints.  The two
invariants that drive the rest of the package are

    e = least i >= 2 such that l divides (q^i - 1)/(q - 1),
    d = nu_l((q^e - 1)/(q - 1)),

together with the cumulative valuations h(a) of the products
w(1)w(2)...w(a), where w(a) = (q^a - 1)/(q - 1).  The function ``h`` is
the brute-force reference; ``h_fast`` evaluates the same quantity from
the base-l digits of floor(a/e) and the sequence s_0 = d,
s_{i+1} = l*s_i + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


def nu(x: int, ell: int) -> int:
    """Largest k with ell^k dividing x.  Rejects x = 0 (infinite valuation)."""
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    x = abs(x)
    k = 0
    while x % ell == 0:
        x //= ell
        k += 1
    return k


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, a) with q = p^a and p prime, or None."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if p * p > q:
            break
        if q % p:
            continue
        a, m = 0, q
        while m % p == 0:
            m //= p
            a += 1
        return (p, a) if m == 1 else None
    return (q, 1)


def compute_e(ell: int, q: int) -> int:
    """Least i >= 2 with ell | (q^i - 1)/(q - 1).

    Equals ell when ell | q - 1, and the order of q mod ell otherwise;
    either way the scan terminates by i = ell.
    """
    if q % ell == 0:
        raise ValueError("ell must not divide q")
    i = 2
    while True:
        if ((q**i - 1) // (q - 1)) % ell == 0:
            return i
        i += 1


def compute_d(ell: int, q: int) -> int:
    e = compute_e(ell, q)
    return nu((q**e - 1) // (q - 1), ell)


@dataclass(frozen=True)
class ValParams:
    """The pair (e, d) attached to (ell, q), with its defining invariants."""

    ell: int
    q: int
    e: int
    d: int

    @classmethod
    def from_pair(cls, ell: int, q: int) -> "ValParams":
        if not is_prime(ell):
            raise ValueError(f"ell = {ell} is not prime")
        pp = prime_power(q)
        if pp is None:
            raise ValueError(f"q = {q} is not a prime power")
        if q % ell == 0:
            raise ValueError("ell must not divide q")
        e = compute_e(ell, q)
        d = compute_d(ell, q)
        return cls(ell=ell, q=q, e=e, d=d)


def w(a: int, b: int = 1, *, q: int) -> int:
    """Exact quotient (q^a - 1)/(q^b - 1); requires b | a."""
    if a % b:
        raise ValueError(f"b = {b} does not divide a = {a}")
    num, den = q**a - 1, q**b - 1
    assert num % den == 0
    return num // den


def g(a: int, *, ell: int, q: int) -> int:
    """nu_ell(w(a)); g(1) = 0 since w(1) = 1."""
    return nu(w(a, q=q), ell)


@lru_cache(maxsize=None)
def _h_table(a: int, ell: int, q: int) -> int:
    if a == 0:
        return 0
    return _h_table(a - 1, ell, q) + g(a, ell=ell, q=q)


def h(a: int, *, ell: int, q: int) -> int:
    """Brute-force nu_ell(w(1)w(2)...w(a)).  Test oracle for h_fast."""
    if a < 1:
        raise ValueError("a must be >= 1")
    return _h_table(a, ell, q)


def s_seq(i: int, *, ell: int, d: int) -> int:
    """s_0 = d, s_{i+1} = ell*s_i + 1."""
    s = d
    for _ in range(i):
        s = ell * s + 1
    return s


def h_fast(a: int, *, ell: int, q: int, e: int | None = None, d: int | None = None) -> int:
    """h(a) from the base-ell digits y_i of floor(a/e): sum y_i * s_i.

    Zero for a < e (no factor w(j), j <= a, is divisible by ell then).
    """
    if e is None:
        e = compute_e(ell, q)
    if d is None:
        d = compute_d(ell, q)
    t = a // e
    total, i = 0, 0
    while t:
        total += (t % ell) * s_seq(i, ell=ell, d=d)
        t //= ell
        i += 1
    return total


def find_q(ell: int, e: int, s: int, search_bound: int) -> int | None:
    """Least prime q <= search_bound with compute_e = e and d >= s.

    Only the parameter shapes (ell = 2 = e) or (ell odd, e >= 2, e | ell-1)
    are accepted.  Returns None on exhaustion; no nonexistence claim is made.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if ell == 2:
        if e != 2:
            raise ValueError("for ell = 2 only e = 2 is supported")
    else:
        if not is_prime(ell):
            raise ValueError("ell must be prime")
        if e < 2 or (ell - 1) % e != 0:
            raise ValueError("need e >= 2 and e | ell - 1")
    for q in range(2, search_bound + 1):
        if q == ell or not is_prime(q):
            continue
        if compute_e(ell, q) == e and compute_d(ell, q) >= s:
            return q
    return None
