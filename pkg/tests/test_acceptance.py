"""Acceptance criteria, one test per criterion, exact tolerances.

Each test prints a single ``criterion N: PASS/FAIL`` line.  The sweeps are
shared module-scoped fixtures; the whole module runs in a few minutes.

Criterion 6's second half asserts that the claimed prime-power weight
interval contains the exactly computed weight at five pinned parameter
points.  Three of those points genuinely escape the claimed interval: the
exact weights, found by exhaustive search with replayable covering
witnesses, sit below the stated lower endpoints (for instance budgets
(1, 1, 1, 0) over ascending powers of 3 mod 16 cover Z_16 at weight 3
against a claimed minimum of 6).  That assertion therefore fails and is
expected to fail; the interval evaluator itself reports the breaches
honestly as violations.
"""

import math

import pytest

from metadiam.bounds import prime_power_weight_interval, prime_weight_bound
from metadiam.coverage import full_weight, sequence_weight
from metadiam.metacyclic import SplitGroup, norm_table
from metadiam.residue import build_context, unit_order
from metadiam.sweeps import (
    sweep_diameter_bounds,
    sweep_reductions,
    sweep_weight_properties,
)
from metadiam.tables import (
    GOLDEN_ROWS_1MOD4,
    GOLDEN_ROWS_3MOD4,
    replay_published_row,
)

GOLDEN = GOLDEN_ROWS_1MOD4 + GOLDEN_ROWS_3MOD4


def report(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="module")
def bounds_sweep():
    return sweep_diameter_bounds(max_n=40, max_m=40, max_product=5000)


@pytest.fixture(scope="module")
def props_sweep():
    return sweep_weight_properties(max_n=40, alpha_max=12)


@pytest.fixture(scope="module")
def reductions_sweep():
    return sweep_reductions(
        max_n=40, max_m=None, max_product=5000, alpha_max=12, sum_trials=100_000
    )


def test_criterion_1_golden_diameters():
    """BFS reproduces every published diameter exactly (tolerance 0)."""
    got = {(m, n, k): norm_table(SplitGroup(m, n, k)).diameter for m, n, k, *_ in GOLDEN}
    want = {(m, n, k): diam for m, n, k, _, _, diam, _ in GOLDEN}
    ok = got == want
    report(1, ok, f"{len(got)} diameters recomputed")
    assert got == want


def test_criterion_2_golden_weights():
    """Exact weights match every published value; witnesses replay."""
    problems = []
    for m, n, k, wt, printed, *_ in GOLDEN:
        ctx = build_context(n, k)
        got, witness = full_weight(ctx)
        if got != wt:
            problems.append(f"wt({n},{k}) = {got} != {wt}")
        if not replay_published_row(m, n, k, printed):
            problems.append(f"({m},{n},{k}) published witness does not cover")
    ctx30 = build_context(30, 7)
    for seq, want in [((1, 0), 5), ((2, 0), 6), ((3, 0), 5)]:
        got, _ = sequence_weight(ctx30, seq)
        if got != want:
            problems.append(f"wt(30,7;{seq}) = {got} != {want}")
    report(2, not problems, f"{len(GOLDEN)} rows + 3 sequence minima; {problems or 'all exact'}")
    assert not problems


def test_criterion_3_bound_columns():
    """floor(m/2) + weight matches the published bound column; diam <= bound."""
    problems = []
    for m, n, k, wt, _, diam, bound in GOLDEN:
        got = m // 2 + full_weight(build_context(n, k))[0]
        if got != bound:
            problems.append(f"({m},{n},{k}): bound {got} != {bound}")
        if diam > got:
            problems.append(f"({m},{n},{k}): diameter {diam} exceeds bound {got}")
    report(3, not problems, f"{len(GOLDEN)} bound columns; {problems or 'all match'}")
    assert not problems


def test_criterion_4_theorem_sweep(bounds_sweep):
    """Exact diameters never exceed the proved bound where hypotheses hold."""
    ok = bounds_sweep.ok
    report(4, ok, f"{bounds_sweep.checked} groups swept (n,m <= 40); "
                  f"violations: {bounds_sweep.violations or 'none'}")
    assert ok, bounds_sweep.violations


def test_criterion_5_weight_properties(props_sweep):
    """Transform invariance, refinement monotonicity, anchors, degree laws."""
    ok = props_sweep.ok
    report(5, ok, f"{props_sweep.checked} checks (n <= 40, order <= 12); "
                  f"violations: {props_sweep.violations or 'none'}")
    assert ok, props_sweep.violations


def _primitive_units(p: int):
    return [k for k in range(2, p) if unit_order(p, k) == p - 1]


def test_criterion_6_prime_weight_bounds():
    """Exact prime weights obey the residue-class and refined bounds, p <= 61.

    The exact weight is the same for every generator of the full unit group
    (the powers are a permutation of the same set), so it is computed once
    per prime; the claim and the refinement membership are then checked for
    every primitive unit.  The invariance itself is verified directly for
    the primes up to 17.
    """
    problems = []
    checked = 0
    for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61]:
        prim = _primitive_units(p)
        exact = {k: full_weight(build_context(p, k))[0] for k in (prim if p <= 17 else prim[:1])}
        if len(set(exact.values())) != 1:
            problems.append(f"p={p}: weight differs across generators: {exact}")
        wt = exact[prim[0]]
        basic = (p + 3 + (p % 4 == 3) * 2) // 4
        for k in prim:
            checked += 1
            rep = prime_weight_bound(p, k, compute_exact=False)
            if rep.bounds["basic"] != basic:
                problems.append(f"p={p}, k={k}: basic bound mismatch")
            if wt > basic:
                problems.append(f"p={p}, k={k}: weight {wt} > bound {basic}")
            if rep.bounds["refinement_applies"] and wt > rep.bounds["refined"]:
                problems.append(
                    f"p={p}, k={k}: weight {wt} > refined bound {rep.bounds['refined']}"
                )
    report(6, not problems, f"prime weight bounds on {checked} primitive units; "
                            f"{problems or 'all within bounds'}")
    assert not problems


def test_criterion_6_prime_power_sandwich():
    """Pinned prime-power intervals must contain the exact weight.

    EXPECTED TO FAIL for (3,3), (2,4), (2,5): the exactly computed weights
    (4, 3, 4, with replayable covering witnesses) fall below the stated
    lower endpoints (9/2, 6, 8).  The evaluator reports these honestly as
    violations; asserting containment anyway keeps the criterion faithful.
    """
    results = []
    for p, e in [(3, 2), (3, 3), (5, 2), (2, 4), (2, 5)]:
        n = p**e
        target = p ** (e - 1) * (p - 1) if p != 2 else 2 ** (e - 2)
        k = next(k for k in range(2, n) if math.gcd(k, p) == 1 and unit_order(n, k) == target)
        rep = prime_power_weight_interval(p, e, k)
        inside = rep.bounds["lower"] <= rep.exact <= rep.bounds["upper"]
        results.append((p, e, k, rep.exact, rep.bounds["lower"], rep.bounds["upper"], inside))
    bad = [r for r in results if not r[-1]]
    report(6, not bad, "prime power sandwich at 5 pinned points; "
                       + ("all contain the exact weight" if not bad else
                          "; ".join(f"(p={p},e={e},k={k}): exact {x} outside [{lo},{hi}]"
                                    for p, e, k, x, lo, hi, _ in bad)))
    assert not bad, bad


def test_criterion_7_reduction_oracles(reductions_sweep):
    """Formal-sum reduction laws and oracle-vs-BFS norm agreement."""
    ok = reductions_sweep.ok
    report(7, ok, f"{reductions_sweep.checked} checks (100k random sums + all group "
                  f"elements, n <= 40, m*n <= 5000); violations: "
                  f"{reductions_sweep.violations or 'none'}")
    assert ok, reductions_sweep.violations


def test_criterion_8_conjecture_and_growth_coverage(bounds_sweep, props_sweep, reductions_sweep):
    """No counterexamples among the hypothesis-backed sweeps above.

    The linear-growth claim and the unconditional diameter bound are not
    theorems at this scale; they are exercised only through the sweeps of
    criteria 4, 5, and 7, all of which must be clean.  The unconditional
    bound is additionally probed empirically and genuinely fails for some
    groups outside all hypotheses (smallest: (m, n, k) = (2, 8, 3),
    diameter 4 against a conjectured 3); those are surfaced as flags here
    for the record, not as violations of anything proved.
    """
    violations = (
        bounds_sweep.violations + props_sweep.violations + reductions_sweep.violations
    )
    detail = f"{len(violations)} violations across sweeps"
    if bounds_sweep.flags:
        detail += (f"; unconditional-bound counterexamples flagged: "
                   f"{len(bounds_sweep.flags)} (e.g. {bounds_sweep.flags[0]})")
    report(8, not violations, detail)
    assert not violations, violations
