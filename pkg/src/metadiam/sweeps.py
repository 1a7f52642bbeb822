"""Verification sweeps over small parameter ranges.

Each sweep returns a :class:`SweepReport` with the number of facts checked
and a list of violations (empty on a clean run).  The sweeps are the
machine checks behind the acceptance criteria: weight-machinery properties,
diameter bound coverage (including the unconditional conjectured bound),
reduction oracles, and the quotient-versus-cover diameter comparison.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .coverage import (
    ExponentSeq,
    FormalSum,
    codual,
    dual,
    full_weight,
    minimal_cover_sequences,
    reduce_sum,
    sequence_weight,
)
from .metacyclic import GeneralGroup, SplitGroup, norm_table, syllable_norm_table
from .residue import UnitContext, build_context

SWEEP_NAMES = ("props", "bounds", "reductions")


@dataclass
class SweepReport:
    """Outcome of one sweep.

    ``violations`` are contradictions of proved statements within their
    hypotheses (a clean run has none).  ``flags`` are counterexamples to
    merely conjectured statements; finding them is a report, not a failure.
    """

    name: str
    checked: int = 0
    violations: list[str] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    rows: list[tuple] = field(default_factory=list)
    elapsed: float = 0.0

    ROW_HEADER = ("m", "n", "k", "alpha", "neg_one", "weight", "min_degree",
                  "diam", "bound", "status")

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "SweepReport") -> None:
        self.checked += other.checked
        self.violations.extend(other.violations)
        self.flags.extend(other.flags)
        self.rows.extend(other.rows)
        self.elapsed += other.elapsed

    def write_rows_csv(self, fh) -> None:
        """One CSV row per swept tuple (only the bounds sweep fills rows)."""
        import csv

        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(self.ROW_HEADER)
        for row in self.rows:
            writer.writerow(row)

    def summary(self) -> str:
        state = "ok" if self.ok else f"{len(self.violations)} violation(s)"
        if self.flags:
            state += f", {len(self.flags)} conjecture counterexample(s) flagged"
        return f"{self.name}: {self.checked} checks, {state} [{self.elapsed:.1f}s]"


def unit_contexts(
    max_n: int,
    alpha_max: int | None = None,
    neg_one: bool = False,
    ns: list[int] | None = None,
):
    """All unit contexts with 3 <= n <= max_n, optionally filtered.

    ``ns`` restricts to an explicit modulus list (used to shard sweeps
    across worker processes without changing their outcome).
    """
    for n in ns if ns is not None else range(3, max_n + 1):
        if n < 3:
            continue
        for k in range(1, n):
            if math.gcd(k, n) != 1:
                continue
            ctx = build_context(n, k)
            if alpha_max is not None and ctx.alpha > alpha_max:
                continue
            if neg_one and not ctx.neg_one:
                continue
            yield ctx


def _subset_weights(ctx: UnitContext) -> dict[tuple[int, ...], int]:
    """Weight of every nonempty exponent subset of [0, alpha-1]."""
    out: dict[tuple[int, ...], int] = {}
    for size in range(1, ctx.alpha + 1):
        for comb in itertools.combinations(range(ctx.alpha), size):
            entries = tuple(sorted(comb, reverse=True))
            out[entries] = sequence_weight(ctx, entries)[0]
    return out


def _minimal_from_table(ctx: UnitContext, wt: dict[tuple[int, ...], int]):
    """Support-minimal realizing sequences read off the full weight table."""
    target = wt[tuple(range(ctx.alpha - 1, -1, -1))]
    out = []
    for entries, w in wt.items():
        if entries[-1] != 0 or w != target:
            continue
        dels = [entries[:j] + entries[j + 1 :] for j in range(len(entries) - 1)]
        if all(wt[d] > target for d in dels):
            out.append(entries)
    return target, sorted(out)


def sweep_weight_properties(
    max_n: int = 40, alpha_max: int = 12, ns: list[int] | None = None
) -> SweepReport:
    """Exhaustive weight-machinery properties over small contexts.

    Per context: the singleton sequence weighs floor(n/2); the dual and
    codual transforms preserve weight; refining a sequence never raises its
    weight; the complete sequence attains the minimum over every subset;
    minimal realizing sequences from an independent full-table scan agree
    with the production search; their least degree obeys the half-order
    bound when k^(alpha/2) == -1; and the extreme degrees and codegrees of
    the minimal sequences pair up to the order.
    """
    t0 = time.time()
    rep = SweepReport("props")
    for ctx in unit_contexts(max_n, alpha_max=alpha_max, ns=ns):
        n, alpha = ctx.n, ctx.alpha
        wt = _subset_weights(ctx)
        rep.checked += len(wt)
        tag = f"(n={n}, k={ctx.k})"

        if wt[(0,)] != n // 2:
            rep.violations.append(f"{tag}: singleton weight {wt[(0,)]} != {n // 2}")

        complete = tuple(range(alpha - 1, -1, -1))
        if wt[complete] != min(wt.values()):
            rep.violations.append(f"{tag}: complete sequence is not the minimum")

        for entries, w in wt.items():
            seq = ExponentSeq(alpha, entries)
            d = dual(seq)
            if wt[d.entries] != w:
                rep.violations.append(f"{tag}: dual weight differs on {entries}")
            if seq.is_reduced:
                c = codual(seq)
                if wt[c.entries] != w:
                    rep.violations.append(f"{tag}: codual weight differs on {entries}")
            present = set(entries)
            for e in range(alpha):
                if e in present:
                    continue
                finer = tuple(sorted(present | {e}, reverse=True))
                if wt[finer] > w:
                    rep.violations.append(f"{tag}: refinement raised weight on {entries}+{e}")

        target, minimal = _minimal_from_table(ctx, wt)
        res = minimal_cover_sequences(ctx)
        if sorted(s.entries for s in res.sequences) != minimal or res.weight != target:
            rep.violations.append(f"{tag}: minimal-sequence scan disagrees with table")
        seqs = [ExponentSeq(alpha, e) for e in minimal]
        degs = [s.degree for s in seqs]
        if ctx.neg_one and min(degs) > alpha // 2:
            rep.violations.append(f"{tag}: least degree {min(degs)} > alpha/2")
        codegs = [s.codegree for s in seqs if s.codegree is not None]
        if codegs and len(codegs) == len(seqs):
            if max(degs) + min(codegs) != alpha or min(degs) + max(codegs) != alpha:
                rep.violations.append(f"{tag}: degree/codegree symmetry fails")
        rep.checked += 4
    rep.elapsed = time.time() - t0
    return rep


def sweep_diameter_bounds(
    max_n: int = 40,
    max_m: int = 40,
    max_product: int = 5000,
    ns: list[int] | None = None,
) -> SweepReport:
    """Exact diameters against the proved and conjectured bounds.

    Covers every split group with n <= max_n, m <= max_m, m*n <= max_product
    (m must be a multiple of ord(k) for the group to exist).  The proved
    bounds are checked where their hypotheses hold; any breach is a
    violation.  The unconditional floor(m/2) + weight bound is conjectural,
    so groups that breach it are flagged, not failed; such groups do exist,
    the smallest being (m, n, k) = (2, 8, 3) with diameter 4 against a
    conjectured 3.
    """
    t0 = time.time()
    rep = SweepReport("bounds")
    for ctx in unit_contexts(max_n, ns=ns):
        n, k, alpha = ctx.n, ctx.k, ctx.alpha
        weight, _ = full_weight(ctx)
        min_degree = None
        if ctx.neg_one:
            min_degree = minimal_cover_sequences(ctx).min_degree
        for m in range(alpha, max_m + 1, alpha):
            if m * n > max_product:
                break
            diam = norm_table(SplitGroup(m, n, k)).diameter
            base = m // 2 + weight
            tag = f"(m={m}, n={n}, k={k})"
            rep.checked += 1
            status = "ok"
            bound = base
            if ctx.neg_one:
                bound = base + (min_degree if m == alpha else 0)
                if diam > bound:
                    status = "violated"
                    rep.violations.append(f"{tag}: diameter {diam} > proved bound {bound}")
                if 2 * min_degree <= alpha // 2 and diam > base:
                    status = "violated"
                    rep.violations.append(
                        f"{tag}: diameter {diam} > small-degree bound {base}"
                    )
            if diam > base:
                if status == "ok":
                    status = "flagged"
                rep.flags.append(
                    f"{tag}: diameter {diam} > conjectured bound {base} (no hypotheses)"
                )
            rep.rows.append(
                (m, n, k, alpha, ctx.neg_one, weight, min_degree, diam, bound, status)
            )
    rep.elapsed = time.time() - t0
    return rep


def sweep_general_quotient(
    max_n: int = 40, max_states: int = 2000, ns: list[int] | None = None
) -> SweepReport:
    """Quotient diameters never exceed their split cover's diameter.

    Enumerates every valid general presentation with m0 * n <= max_states
    and compares double BFS results; also checks the cover bound when the
    hypotheses hold.
    """
    t0 = time.time()
    rep = SweepReport("general-quotient")
    cover_diam: dict[tuple[int, int, int], int] = {}
    for n in ns if ns is not None else range(3, max_n + 1):
        divisors = [d for d in range(1, n + 1) if n % d == 0]
        for ell in divisors:
            q = n // ell
            for k in range(1, n):
                if math.gcd(k, n) != 1 or (k - 1) % q != 0:
                    continue
                alpha = build_context(n, k).alpha
                for m0 in range(alpha, max_states // n + 1, alpha):
                    pres = GeneralGroup(m0, ell, n, k)
                    diam_q = norm_table(pres).diameter
                    cover = pres.cover()
                    key = (cover.m, n, k)
                    if key not in cover_diam:
                        cover_diam[key] = norm_table(cover).diameter
                    rep.checked += 1
                    if diam_q > cover_diam[key]:
                        rep.violations.append(
                            f"(m0={m0}, ell={ell}, n={n}, k={k}): quotient diameter "
                            f"{diam_q} > cover diameter {cover_diam[key]}"
                        )
    rep.elapsed = time.time() - t0
    return rep


def _random_formal_sums(rng: random.Random, trials: int) -> SweepReport:
    rep = SweepReport("reductions/sums")
    pool = [
        build_context(n, k)
        for n in range(3, 31)
        for k in range(1, n)
        if math.gcd(k, n) == 1 and build_context(n, k).alpha <= 8
    ]
    for _ in range(trials):
        ctx = rng.choice(pool)
        t = rng.randrange(0, 9)
        terms = tuple(
            (rng.randrange(-9, 10), rng.randrange(0, 3 * ctx.alpha)) for _ in range(t)
        )
        fs = FormalSum(terms)
        red = reduce_sum(ctx, fs)
        rep.checked += 1
        tag = f"(n={ctx.n}, k={ctx.k}, terms={terms})"
        if red.value(ctx) != fs.value(ctx):
            rep.violations.append(f"{tag}: value changed")
        if red.acs > fs.acs:
            rep.violations.append(f"{tag}: acs increased {fs.acs} -> {red.acs}")
        if not red.is_collapsed(ctx.alpha):
            rep.violations.append(f"{tag}: result not collapsed")
    return rep


def sweep_reductions(
    max_n: int = 40,
    max_m: int | None = None,
    max_product: int = 5000,
    alpha_max: int = 12,
    sum_trials: int = 100_000,
    seed: int = 20240601,
    ns: list[int] | None = None,
) -> SweepReport:
    """Reduction oracles: formal-sum reduction and the syllable-norm oracle.

    The syllable-bounded norm oracle (no graph search) must agree with BFS
    on every element of every split group in range; the formal-sum reducer
    must preserve values, never raise the absolute coefficient sum, and
    always emit collapsed sums.
    """
    t0 = time.time()
    rep = SweepReport("reductions")
    if sum_trials:
        rep.merge(_random_formal_sums(random.Random(seed), sum_trials))
    for ctx in unit_contexts(max_n, alpha_max=alpha_max, ns=ns):
        n, k, alpha = ctx.n, ctx.k, ctx.alpha
        m_cap = max_product // n if max_m is None else min(max_m, max_product // n)
        for m in range(alpha, m_cap + 1, alpha):
            group = SplitGroup(m, n, k)
            bfs = norm_table(group).norms.reshape(m, n)
            oracle = syllable_norm_table(group)
            rep.checked += m * n
            if not np.array_equal(bfs.astype(np.int64), oracle):
                bad = np.argwhere(bfs.astype(np.int64) != oracle)
                a, b = map(int, bad[0])
                rep.violations.append(
                    f"(m={m}, n={n}, k={k}): oracle {int(oracle[a, b])} != "
                    f"bfs {int(bfs[a, b])} at element ({a}, {b})"
                )
    rep.elapsed = time.time() - t0
    return rep
