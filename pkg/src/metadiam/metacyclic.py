"""Metacyclic group arithmetic, word norms, and bounded path construction.

Two presentation families are supported:

* split:    < x, y | x^m = y^n = 1, x^-1 y x = y^k >
* general:  < x, y | x^m0 = y^ell, y^n = 1, x^-1 y x = y^k >

Elements are plain (a, b) pairs in normal form x^a y^b with canonical
exponent ranges.  Word norms are graph distances from the identity in the
Cayley graph over {x, x^-1, y, y^-1}, computed by breadth-first search over
a flat state array.  An independent norm oracle evaluates the same
quantity as a minimum over syllable-bounded path shapes, without any graph
search, which is what makes cross-checking the two meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coverage import (
    ExponentSeq,
    find_representation,
    minimal_cover_sequences,
    sequence_weight,
)
from .residue import MAX_MODULUS, UnitContext, build_context

DEFAULT_STATE_BUDGET = 10**6

Element = tuple[int, int]


class StateBudgetExceeded(RuntimeError):
    """A norm table would need more states than the configured budget."""


def _validate_common(m: int, n: int, k: int) -> None:
    if n < 3:
        raise ValueError(f"modulus too small: n={n} (need n >= 3)")
    if n >= MAX_MODULUS or m >= MAX_MODULUS:
        raise ValueError("orders must stay below 2^31")
    if m < 1:
        raise ValueError(f"x order must be >= 1, got m={m}")
    if not 1 <= k < n or math.gcd(k, n) != 1:
        raise ValueError(f"not a unit: k={k} mod {n}")


@dataclass(frozen=True)
class SplitGroup:
    """Split extension of Z_n by Z_m, with x acting on y by k-th powers.

    The action is well defined only when k^m == 1 (mod n); without that the
    presented group collapses below order m*n, so it is rejected here.
    """

    m: int
    n: int
    k: int

    def __post_init__(self) -> None:
        _validate_common(self.m, self.n, self.k)
        if pow(self.k, self.m, self.n) != 1:
            raise ValueError(
                f"k^m != 1 (mod n): ord({self.k} mod {self.n}) does not divide m={self.m}"
            )

    @property
    def order(self) -> int:
        return self.m * self.n

    @property
    def x_order(self) -> int:
        return self.m

    @property
    def ell(self) -> int:
        # x^m = y^ell with ell = n means x^m = 1: the split case
        return self.n

    def identity(self) -> Element:
        return (0, 0)

    def element(self, a: int, b: int) -> Element:
        return (a % self.m, b % self.n)

    def multiply(self, g: Element, h: Element) -> Element:
        a1, b1 = g
        a2, b2 = h
        return ((a1 + a2) % self.m, (b1 * pow(self.k, a2, self.n) + b2) % self.n)

    def invert(self, g: Element) -> Element:
        a, b = g
        ai = (-a) % self.m
        return (ai, (-b * pow(self.k, ai, self.n)) % self.n)

    def context(self) -> UnitContext:
        return build_context(self.n, self.k)


@dataclass(frozen=True)
class GeneralGroup:
    """General metacyclic presentation with x^m0 identified with y^ell.

    Validation enforces the three compatibility conditions; each failure is
    reported by name.  Normal form is x^a y^b with 0 <= a < m0, 0 <= b < n,
    and multiplying past x^m0 deposits a central y^ell carry.
    """

    m0: int
    ell: int
    n: int
    k: int

    def __post_init__(self) -> None:
        _validate_common(self.m0, self.n, self.k)
        problems = []
        if pow(self.k, self.m0, self.n) != 1:
            problems.append(f"k^m0 == 1 (mod n) fails: {self.k}^{self.m0} mod {self.n} != 1")
        if (self.ell * (self.k - 1)) % self.n != 0:
            problems.append(f"n | ell*(k-1) fails: {self.n} does not divide {self.ell}*{self.k - 1}")
        if self.ell < 1 or self.n % self.ell != 0:
            problems.append(f"ell | n fails: {self.ell} does not divide {self.n}")
        if problems:
            raise ValueError("invalid metacyclic presentation: " + "; ".join(problems))

    @property
    def order(self) -> int:
        return self.m0 * self.n

    @property
    def x_order(self) -> int:
        return self.m0

    def identity(self) -> Element:
        return (0, 0)

    def element(self, a: int, b: int) -> Element:
        return (a % self.m0, b % self.n)

    def multiply(self, g: Element, h: Element) -> Element:
        a1, b1 = g
        a2, b2 = h
        total = a1 + a2
        q, a = divmod(total, self.m0)
        b = (b1 * pow(self.k, a2, self.n) + b2 + q * self.ell) % self.n
        return (a, b)

    def invert(self, g: Element) -> Element:
        a, b = g
        ai = (-a) % self.m0
        q = 1 if a else 0
        return (ai, (-(b * pow(self.k, ai, self.n) + q * self.ell)) % self.n)

    def cover(self) -> SplitGroup:
        """The split group that surjects onto this one (x -> x, y -> y)."""
        return SplitGroup(self.m0 * self.n // self.ell, self.n, self.k)


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class Path:
    """Word written as a product of x^a y^b blocks, one (a, b) per step."""

    steps: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple((int(a), int(b)) for a, b in self.steps))

    @property
    def syllables(self) -> int:
        return len(self.steps)

    @property
    def length(self) -> int:
        return sum(abs(a) + abs(b) for a, b in self.steps)

    def inverse(self) -> "Path":
        """Reversed path with negated exponents; same length."""
        if not self.steps:
            return self
        rev = list(reversed(self.steps))
        out = [(0, -rev[0][1])]
        for j in range(len(rev) - 1):
            out.append((-rev[j][0], -rev[j + 1][1]))
        out.append((-rev[-1][0], 0))
        trimmed = [s for s in out if s != (0, 0)]
        return Path(tuple(trimmed))


def is_reduced_path(group, path: Path) -> bool:
    """No interior zero x-exponent, no non-final zero y-exponent (mod orders)."""
    m, n = group.x_order, group.n
    t = path.syllables
    for i, (a, b) in enumerate(path.steps):
        if i >= 1 and a % m == 0:
            return False
        if i <= t - 2 and b % n == 0:
            return False
    return True


def eval_path(group, path: Path):
    """Left-to-right product of the path's blocks.

    Returns (element, syllables, length, reduced).
    """
    g = group.identity()
    for a, b in path.steps:
        g = group.multiply(g, group.element(a, b))
    return g, path.syllables, path.length, is_reduced_path(group, path)


# ---------------------------------------------------------------------------
# BFS norms


@dataclass(frozen=True)
class NormTable:
    """Word norms of every element, indexed by a*n + b."""

    m: int
    n: int
    norms: np.ndarray
    diameter: int

    def norm(self, a: int, b: int) -> int:
        return int(self.norms[(a % self.m) * self.n + (b % self.n)])

    def write_csv(self, fh) -> None:
        fh.write("a,b,norm\n")
        for a in range(self.m):
            base = a * self.n
            for b in range(self.n):
                fh.write(f"{a},{b},{int(self.norms[base + b])}\n")
        fh.write(f"# diameter={self.diameter}\n")


def read_norm_csv(fh) -> NormTable:
    """Parse a table produced by :meth:`NormTable.write_csv`."""
    header = fh.readline().strip()
    if header != "a,b,norm":
        raise ValueError(f"unexpected header: {header!r}")
    entries: dict[tuple[int, int], int] = {}
    diameter = None
    for line in fh:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line.lstrip("# ").partition("=")
            if key.strip() == "diameter":
                diameter = int(val)
            continue
        a_s, b_s, d_s = line.split(",")
        entries[(int(a_s), int(b_s))] = int(d_s)
    m = max(a for a, _ in entries) + 1
    n = max(b for _, b in entries) + 1
    norms = np.full(m * n, -1, dtype=np.int32)
    for (a, b), d in entries.items():
        norms[a * n + b] = d
    if diameter is None or np.any(norms < 0):
        raise ValueError("incomplete norm table")
    return NormTable(m=m, n=n, norms=norms, diameter=diameter)


def _generator_maps(group) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """State index maps for right multiplication by x, x^-1, y, y^-1."""
    m, n, k = group.x_order, group.n, group.k
    ell = group.ell
    kinv = pow(k, -1, n)
    idx = np.arange(m * n, dtype=np.int64)
    a, b = idx // n, idx % n
    # g*x: exponent a+1, carry y^ell when wrapping past m
    carry_up = np.where(a + 1 == m, ell, 0)
    xp = ((a + 1) % m) * n + (b * k + carry_up) % n
    # g*x^-1 = g*(m-1, -ell if a == 0 else 0) after simplification
    carry_dn = np.where(a == 0, -ell, 0)
    xm = ((a - 1) % m) * n + (b * kinv + carry_dn) % n
    yp = a * n + (b + 1) % n
    ym = a * n + (b - 1) % n
    return xp, xm, yp, ym


def _bfs_small(size: int, maps) -> np.ndarray:
    # plain deque BFS; beats array passes for small or path-like graphs
    from collections import deque

    xp, xm, yp, ym = (m.tolist() for m in maps)
    dist = [-1] * size
    dist[0] = 0
    queue = deque([0])
    while queue:
        s = queue.popleft()
        d = dist[s] + 1
        for t in (xp[s], xm[s], yp[s], ym[s]):
            if dist[t] < 0:
                dist[t] = d
                queue.append(t)
    return np.array(dist, dtype=np.int32)


def norm_table(group, max_states: int = DEFAULT_STATE_BUDGET) -> NormTable:
    """Exact word norms by breadth-first search from the identity."""
    size = group.order
    if size > max_states:
        raise StateBudgetExceeded(
            f"norm table needs {size} states, budget is {max_states}"
        )
    maps = _generator_maps(group)
    if size <= 1 << 14:
        dist = _bfs_small(size, maps)
        return NormTable(m=group.x_order, n=group.n, norms=dist, diameter=int(dist.max()))
    xp, xm, yp, ym = maps
    dist = np.full(size, -1, dtype=np.int32)
    dist[0] = 0
    frontier = np.array([0], dtype=np.int64)
    d = 0
    while frontier.size:
        d += 1
        nxt = np.concatenate((xp[frontier], xm[frontier], yp[frontier], ym[frontier]))
        nxt = nxt[dist[nxt] < 0]
        if nxt.size == 0:
            break
        dist[nxt] = d
        frontier = np.unique(nxt)
    return NormTable(m=group.x_order, n=group.n, norms=dist, diameter=int(dist.max()))


# ---------------------------------------------------------------------------
# independent syllable-bounded norm oracle


def _minplus_unit_cost(dist: np.ndarray, u: int, n: int) -> np.ndarray:
    """out[x] = min_t dist[(x - t*u) mod n] + |t|.

    Walking the residues in u-steps turns this into a circular distance
    transform with unit slope, done with two cumulative-minimum sweeps over
    a doubled array (the spurious |t| >= n terms cost too much to matter).
    """
    order = (np.arange(n, dtype=np.int64) * u) % n
    p = dist[order].astype(np.int64)
    e = np.concatenate((p, p))
    idx = np.arange(2 * n, dtype=np.int64)
    fwd = (np.minimum.accumulate(e - idx) + idx)[n:]
    rev = (np.minimum.accumulate(e[::-1] - idx) + idx)[::-1][:n]
    out = np.empty(n, dtype=np.int64)
    out[order] = np.minimum(fwd, rev)
    return out


def _window_rep_tables(ctx: UnitContext) -> dict[tuple[int, int], np.ndarray]:
    """rep[(c0, w)][b] = cheapest signed sum for b over k-powers c0..c0+w-1 (mod alpha)."""
    n, alpha = ctx.n, ctx.alpha
    rep: dict[tuple[int, int], np.ndarray] = {}
    big = np.int64(1 << 40)
    for c0 in range(alpha):
        d = np.full(n, big, dtype=np.int64)
        d[0] = 0
        for w in range(1, alpha + 1):
            d = _minplus_unit_cost(d, ctx.power(c0 + w - 1), n)
            rep[(c0, w)] = d
    return rep


def syllable_norm_table(group: SplitGroup) -> np.ndarray:
    """Word norms as a minimum over syllable-bounded path shapes, no BFS.

    Any product of x/y blocks is a walk on integer x-heights: it starts at
    some integer congruent to the target x-exponent mod m, ends at 0, and
    each y-block fires at the current height h, contributing against k^h.
    For a fixed window [lo, hi] of visited heights the cheapest walk cost
    has a closed form, and the cheapest y-cost only depends on the window's
    set of height classes mod alpha, which is a cyclic interval.  Minimizing
    over all windows of width up to alpha (plus the full-class wide windows)
    therefore gives the exact norm of every element at once.  Shapes with
    one y-block per class are enough, so the syllable count never needs to
    exceed the order of k.
    """
    ctx = group.context()
    m, n, alpha = group.m, group.n, ctx.alpha
    rep = _window_rep_tables(ctx)
    big = np.int64(1 << 40)
    out = np.full((m, n), big, dtype=np.int64)
    avals = np.arange(m, dtype=np.int64)

    def fold(xcost: np.ndarray, repv: np.ndarray) -> None:
        np.minimum(out, xcost[:, None] + repv[None, :], out=out)

    # narrow windows: width w <= alpha, containing height 0
    for w in range(1, alpha + 1):
        for lo in range(1 - w, 1):
            hi = lo + w - 1
            xcost = np.full(m, big, dtype=np.int64)
            for cand in (avals, avals - m, avals + m):
                ok = (cand >= lo) & (cand <= hi)
                cost = (hi - lo) + np.minimum((hi - cand) - lo, (cand - lo) + hi)
                xcost = np.where(ok, np.minimum(xcost, cost), xcost)
            fold(xcost, rep[(lo % alpha, w)])

    # wide windows: width >= alpha makes every class available
    rep_full = rep[(0, alpha)]
    for cand in (avals, avals - m):
        span = np.abs(cand)
        # window exactly spanning {0, cand} once it is already wide enough
        direct = np.where(span >= alpha - 1, span, big)
        fold(direct, rep_full)
        # otherwise stretch to width alpha, sliding over all offsets
        base_lo = np.minimum(0, cand)
        base_hi = np.maximum(0, cand)
        for off in range(alpha):
            lo = base_lo - off
            hi = lo + alpha - 1
            ok = hi >= base_hi
            cost = (alpha - 1) + np.minimum((hi - cand) - lo, (cand - lo) + hi)
            fold(np.where(ok, cost, big), rep_full)

    return out


# ---------------------------------------------------------------------------
# constructive bounded paths


def bounded_path(
    group: SplitGroup,
    target: Element,
    mps: tuple[ExponentSeq, tuple[int, ...]] | None = None,
) -> Path:
    """Path to ``target`` whose length realizes the diameter bound.

    Requires the order of k to be even with k^(alpha/2) == -1 (mod n).  The
    path descends through the entries of a minimal realizing sequence of
    least degree; with the target's x-exponent centered into
    (-floor(m/2), floor(m/2)], three regimes arise: descend directly, invert
    the target first, or start with a short backward stub.  The resulting
    length never exceeds floor(m/2) + weight, plus the least degree when
    the order of k equals m.
    """
    m, n = group.m, group.n
    ctx = group.context()
    if not ctx.neg_one:
        raise ValueError(
            "theorem hypothesis not met: need even order with k^(alpha/2) == -1 (mod n)"
        )
    a, b = group.element(*target)
    if (a, b) == (0, 0):
        return Path(())
    if mps is None:
        res = minimal_cover_sequences(ctx)
        seq = min(
            (s for s in res.sequences if s.degree == res.min_degree),
            key=lambda s: s.entries,
        )
        _, budgets = sequence_weight(ctx, seq)
    else:
        seq, budgets = mps
        seq = seq if isinstance(seq, ExponentSeq) else ExponentSeq(ctx.alpha, tuple(seq))
    half = m // 2
    ac = a if a <= half else a - m  # centered representative in (-half, half]

    def descend(xi: int, fiber: int) -> Path:
        coeffs = find_representation(ctx, seq, budgets, fiber)
        e = seq.entries
        steps = [(xi, coeffs[0])]
        for j in range(len(e) - 1):
            steps.append((e[j] - e[j + 1], coeffs[j + 1]))
        return Path(tuple(steps))

    i1 = seq.degree
    if i1 <= ac <= half:
        return descend(ac - i1, b)
    if -half <= ac <= -i1:
        ainv, binv = group.invert((a, b))
        acinv = ainv if ainv <= half else ainv - m
        return descend(acinv - i1, binv).inverse()
    # |ac| < i1
    if ac >= 0:
        return descend(ac - i1, b)
    ainv, binv = group.invert((a, b))
    acinv = ainv if ainv <= half else ainv - m
    return descend(acinv - i1, binv).inverse()
