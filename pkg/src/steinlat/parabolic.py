"""Standard-parabolic combinatorics.

Standard parabolic subgroups of GL_n(q) are encoded as compositions of
n (ordered block sizes) or, equivalently, as subsets J of the n-1
fundamental transpositions.  The distinguished family P* consists of
the labels [z_0, ..., z_m] whose parts are all 1 or e*l^i; the integer
invariants

    phi(P) = nu_l([P : B]) = s_0 z_0 + ... + s_m z_m,
    theta(P) = b - phi(P),      b = phi(G),

drive the whole filtration calculus.  V is the number of distinct phi
(equivalently theta) values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .galoisring import Context
from .valuation import nu, w


# ---------------------------------------------------------------------------
# compositions


@dataclass(frozen=True)
class Composition:
    """Ordered list of positive block sizes summing to n."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts or any(p < 1 for p in self.parts):
            raise ValueError("parts must be positive")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def to_subset(self) -> frozenset[int]:
        """The set J of fundamental indices i (1-based) with i, i+1 in
        one block: the complement of the proper partial sums."""
        cuts = set(itertools.accumulate(self.parts[:-1]))
        return frozenset(i for i in range(1, self.n) if i not in cuts)

    @classmethod
    def from_subset(cls, J: frozenset[int] | set[int], n: int) -> "Composition":
        parts, size = [], 1
        for i in range(1, n):
            if i in J:
                size += 1
            else:
                parts.append(size)
                size = 1
        parts.append(size)
        return cls(tuple(parts))

    def sorted_desc(self) -> tuple[int, ...]:
        return tuple(sorted(self.parts, reverse=True))


def all_compositions(n: int):
    """All 2^(n-1) compositions of n."""
    for mask in range(1 << (n - 1)):
        parts, size = [], 1
        for i in range(n - 1):
            if mask >> i & 1:
                size += 1
            else:
                parts.append(size)
                size = 1
        parts.append(size)
        yield Composition(tuple(parts))


def partition_string(parts: tuple[int, ...]) -> str:
    """Descending parts with exponents for repeats, e.g. (4,2,2,1,1) ->
    '42^21^2'."""
    out = []
    for p, grp in itertools.groupby(sorted(parts, reverse=True)):
        k = len(list(grp))
        base = str(p) if p < 10 else f"({p})"
        out.append(base if k == 1 else f"{base}^{k}")
    return "".join(out)


# ---------------------------------------------------------------------------
# the digit map delta and the star labels


def delta(a: int, ctx: Context) -> tuple[int, ...]:
    """(y_-1, y_0, ..., y_m): remainder of a mod e, then base-l digits
    of floor(a/e), zero-padded to the fixed length m+1."""
    if not 1 <= a <= ctx.n:
        raise ValueError(f"a = {a} out of range [1, {ctx.n}]")
    y = [a % ctx.e]
    t = a // ctx.e
    for _ in range(ctx.m + 1):
        y.append(t % ctx.ell)
        t //= ctx.ell
    assert t == 0
    return tuple(y)


def delta_sum(P: Composition, ctx: Context) -> tuple[int, ...]:
    """Componentwise sum of delta over the parts."""
    total = [0] * (ctx.m + 2)
    for a in P.parts:
        for i, yi in enumerate(delta(a, ctx)):
            total[i] += yi
    return tuple(total)


@dataclass(frozen=True)
class StarLabel:
    """[z_0, ..., z_m]: z_i blocks of size e*l^i plus z_-1 singletons."""

    z: tuple[int, ...]
    ctx: Context = field(compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(self.z) != self.ctx.m + 1:
            raise ValueError("label length must be m + 1")
        if any(zi < 0 for zi in self.z) or self.z_minus1 < 0:
            raise ValueError("label does not fit inside n")

    @property
    def z_minus1(self) -> int:
        return self.ctx.n - self.ctx.e * sum(
            zi * self.ctx.ell**i for i, zi in enumerate(self.z))

    def to_composition(self) -> Composition:
        """Parts in descending order: e*l^m blocks first, singletons last."""
        parts: list[int] = []
        for i in range(self.ctx.m, -1, -1):
            parts.extend([self.ctx.e * self.ctx.ell**i] * self.z[i])
        parts.extend([1] * self.z_minus1)
        return Composition(tuple(parts))

    def partition_string(self) -> str:
        return partition_string(self.to_composition().parts)

    def phi(self) -> int:
        return sum(si * zi for si, zi in zip(self.ctx.s, self.z))

    def theta(self) -> int:
        return self.ctx.b - self.phi()


def star_of(P: Composition, ctx: Context) -> StarLabel:
    """The canonical P* member attached to P, via the digit sum of its
    parts."""
    if P.n != ctx.n:
        raise ValueError("composition of the wrong n")
    return StarLabel(delta_sum(P, ctx)[1:], ctx)


# ---------------------------------------------------------------------------
# valuations of parabolic indices


def index_PB(P: Composition, ctx: Context) -> int:
    """[P : B] as an exact big integer: product over blocks of the
    q-factorial-style products of w(j)."""
    out = 1
    for a in P.parts:
        for j in range(2, a + 1):
            out *= w(j, q=ctx.q)
    return out


def phi(P: Composition | StarLabel, ctx: Context | None = None) -> int:
    if isinstance(P, StarLabel):
        return P.phi()
    assert ctx is not None
    return star_of(P, ctx).phi()


def theta(P: Composition | StarLabel, ctx: Context | None = None) -> int:
    if isinstance(P, StarLabel):
        return P.theta()
    assert ctx is not None
    return ctx.b - phi(P, ctx)


# ---------------------------------------------------------------------------
# enumeration of P*


def enumerate_star(ctx: Context) -> list[StarLabel]:
    """All labels [z_0..z_m] with e * sum z_i l^i <= n, duplicate-free."""
    out: list[StarLabel] = []

    def rec(i: int, z: list[int], used: int):
        if i > ctx.m:
            out.append(StarLabel(tuple(z), ctx))
            return
        block = ctx.e * ctx.ell**i
        for zi in range((ctx.n - used) // block + 1):
            z.append(zi)
            rec(i + 1, z, used + zi * block)
            z.pop()

    rec(0, [], 0)
    return out


def count_star(ctx: Context) -> int:
    """|P*| by the counting recursion over the last allowed block size."""
    e, ell = ctx.e, ctx.ell

    @lru_cache(maxsize=None)
    def lam(i: int, n: int) -> int:
        if i == -1:
            return 1
        block = e * ell**i
        return sum(lam(i - 1, n - block * j) for j in range(n // block + 1))

    return lam(ctx.m, ctx.n)


def pvalues(ctx: Context) -> list[int]:
    """Sorted list of attained theta values."""
    return sorted({lab.theta() for lab in enumerate_star(ctx)})


def star_classes(c: int, ctx: Context) -> list[StarLabel]:
    """All members of P* with theta = c (possibly empty)."""
    if c < 0:
        raise ValueError("c must be >= 0")
    labs = [lab for lab in enumerate_star(ctx) if lab.theta() == c]
    labs.sort(key=lambda lab: lab.z)
    return labs


# ---------------------------------------------------------------------------
# V and the closed formulas


@dataclass(frozen=True)
class VCountReport:
    """Brute-force V together with the closed-formula cross-checks.

    X counts attained phi values below d*floor(n/e); Y counts those
    below d^2*l.  flags records, per formula, whether its hypothesis
    held and whether it matched the brute-force count.
    """

    V: int
    A: int
    Z: int
    C: int
    X: int
    Y: int
    pvalues: tuple[int, ...]
    phi_values: tuple[int, ...]
    flags: tuple[tuple[str, bool, bool], ...]  # (name, applicable, agrees)

    def all_applicable_agree(self) -> bool:
        return all(ok for _, applicable, ok in self.flags if applicable)


def v_count(ctx: Context) -> VCountReport:
    ell, d, m, x = ctx.ell, ctx.d, ctx.m, ctx.x
    phis = sorted({lab.phi() for lab in enumerate_star(ctx)})
    thetas = tuple(sorted(ctx.b - p for p in phis))
    V = len(phis)
    if m == -1:
        return VCountReport(V=1, A=1, Z=1, C=1, X=0, Y=0, pvalues=(0,),
                            phi_values=(0,), flags=(("degenerate", True, V == 1),))

    def geo(k: int) -> int:  # 1 + l + ... + l^k
        return (ell ** (k + 1) - 1) // (ell - 1)

    A = 1 + sum(x[k] * geo(k) for k in range(m + 1))
    Z = 1 + sum(x[k] * ctx.s[k] for k in range(m + 1))
    C = 1 + sum(x[k] * geo(k - 1) for k in range(1, m + 1))
    nfloor = ctx.nfloor
    X = sum(1 for p in phis if p < d * nfloor)
    Y = sum(1 for p in phis if p < d * d * ell)

    flags = [
        ("V=C+X", True, V == C + X),
        ("A<=V<=Z", True, A <= V <= Z),
        ("X>=nfloor", True, X >= nfloor),
    ]
    if nfloor >= d * ell:
        flags.append(("V=Z-d^2*l+Y", True, V == Z - d * d * ell + Y))
        flags.append(("Y>=l*d*(d+1)/2", True, Y >= ell * d * (d + 1) // 2))
        if d <= ell:
            flags.append(("V=Z-l*d*(d-1)/2", True,
                          V == Z - ell * d * (d - 1) // 2))
        else:
            flags.append(("V=Z-l*d*(d-1)/2", False, True))
    else:
        flags.append(("V=Z-d^2*l+Y", False, True))
        flags.append(("Y>=l*d*(d+1)/2", False, True))
        flags.append(("V=Z-l*d*(d-1)/2", False, True))
    if d == 1:
        flags.append(("d=1: V=b+1 all values", True,
                      V == ctx.b + 1 and thetas == tuple(range(ctx.b + 1))))
    else:
        flags.append(("d=1: V=b+1 all values", False, True))
    return VCountReport(V=V, A=A, Z=Z, C=C, X=X, Y=Y,
                        pvalues=thetas, phi_values=tuple(phis),
                        flags=tuple(flags))


def count_star_closed(ctx: Context) -> int | None:
    """Closed forms for |P*| where available; None when no hypothesis
    applies.  Valid under the injectivity hypotheses (see
    injectivity_verdict), when c(L) = V = |P*|."""
    ell, d, m, x = ctx.ell, ctx.d, ctx.m, ctx.x
    nfloor = ctx.nfloor
    if m == -1:
        return 1
    if d <= ell:
        ok = nfloor <= d * ell
    elif d == ell + 1:
        ok = nfloor <= ell * ell
    else:
        ok = nfloor < ell * ell + ell
    if not ok:
        return None
    if m == 0:
        return nfloor + 1
    if m == 1:
        return (x[1] + 1) * (x[1] * ell // 2 + x[0] + 1)
    if m == 2 and x[2] == 1 and x[1] == 0:
        return (ell**3 + ell**2) // 2 + (x[0] + 1) * ell + 2 * (x[0] + 1)
    return None


# ---------------------------------------------------------------------------
# refinement up to rearrangement


def refines_up_to_equiv(Q: Composition, P: Composition) -> bool:
    """True iff the parts of Q can be grouped into blocks whose sums are
    a rearrangement of the parts of P (backtracking over targets)."""
    if Q.n != P.n:
        raise ValueError("compositions of different n")
    q_parts = sorted(Q.parts, reverse=True)
    targets = sorted(P.parts, reverse=True)

    def _solve_full(ts: list[int], avail: list[int]) -> bool:
        if not ts:
            return not avail
        target = ts[0]
        seen: set[tuple[int, ...]] = set()

        def pick(tgt: int, av: list[int], start: int, chosen: list[int]) -> bool:
            if tgt == 0:
                key = tuple(chosen)
                if key in seen:
                    return False
                seen.add(key)
                return _solve_full(ts[1:], av)
            prev = None
            for i in range(start, len(av)):
                p = av[i]
                if p > tgt or p == prev:
                    continue
                prev = p
                chosen.append(p)
                if pick(tgt - p, av[:i] + av[i + 1:], i, chosen):
                    return True
                chosen.pop()
            return False

        return pick(target, avail, 0, [])

    return _solve_full(targets, q_parts)


# ---------------------------------------------------------------------------
# injectivity of theta on P*


@dataclass(frozen=True)
class InjectivityVerdict:
    injective: bool
    case: str  # which hypothesis branch decided
    witness: tuple[StarLabel, StarLabel] | None  # colliding pair if any


def injectivity_verdict(ctx: Context) -> InjectivityVerdict:
    """Decide injectivity of theta on P* from the (d, floor(n/e))
    trichotomy, with an explicit colliding pair when non-injective."""
    ell, d, m = ctx.ell, ctx.d, ctx.m
    nfloor = ctx.nfloor
    if m == -1:
        return InjectivityVerdict(True, "degenerate", None)

    def label(*entries: int) -> StarLabel:
        z = list(entries) + [0] * (m + 1 - len(entries))
        return StarLabel(tuple(z), ctx)

    if d <= ell:
        injective = nfloor <= d * ell
        case = "d<=l"
        if not injective:
            wit = (label(d * ell + 1), label(0, d))
    elif d == ell + 1:
        injective = nfloor <= ell * ell
        case = "d=l+1"
        if not injective:
            if nfloor >= ell * ell + ell:
                wit = (label(ell, 0, 1), label(0, ell + 1))
            else:
                wit = (label(ell * ell + 1), label(0, 0, 1))
    else:
        injective = nfloor < ell * ell + ell
        case = "d>l+1"
        if not injective:
            wit = (label(ell, 0, 1), label(0, ell + 1))
    if injective:
        return InjectivityVerdict(True, case, None)
    assert wit[0].phi() == wit[1].phi(), "witness pair must collide"
    return InjectivityVerdict(False, case, wit)


# ---------------------------------------------------------------------------
# the explicit descending chains


def a10_chain(ctx: Context) -> list[tuple[StarLabel, int]]:
    """Chain in P* from the label of G downward, phi dropping by exactly
    1 per step.

    First process: while some entry beyond index 0 is nonzero, trade the
    last nonzero entry for l copies one level down; this yields C terms
    ending at [floor(n/e), 0, ..., 0].  When floor(n/e) >= d*l a second
    process continues: replace [a, 0, ...] by [a - (d*l+1), d, 0, ...]
    (same phi, not re-listed) and run the first process d more steps to
    reach [a-1, 0, ...], repeating down to [d*l, 0, ...].
    """
    if ctx.m == -1:
        return [(StarLabel((), ctx), 0)]
    m, ell, d = ctx.m, ctx.ell, ctx.d

    def step(z: tuple[int, ...]) -> tuple[int, ...]:
        j = max(i for i in range(m + 1) if z[i] != 0)
        assert j >= 1
        out = list(z)
        out[j] -= 1
        out[j - 1] += ell
        return tuple(out)

    chain: list[tuple[StarLabel, int]] = []
    z = ctx.x
    lab = StarLabel(z, ctx)
    chain.append((lab, lab.phi()))
    while any(z[1:]):
        z = step(z)
        lab = StarLabel(z, ctx)
        chain.append((lab, lab.phi()))
    nfloor = ctx.nfloor
    if nfloor >= d * ell:
        for a in range(nfloor, d * ell, -1):
            z = tuple([a - (d * ell + 1), d] + [0] * (m - 1))
            for _ in range(d):
                z = step(z)
                lab = StarLabel(z, ctx)
                chain.append((lab, lab.phi()))
            assert z[0] == a - 1 and not any(z[1:])
    for (la, pa), (lb, pb) in zip(chain, chain[1:]):
        assert pa - 1 == pb, "phi must drop by exactly 1 along the chain"
        assert pa == la.phi() and pb == lb.phi()
    return chain
