"""Evaluators for the diameter and weight bounds, with recorded verdicts.

Every evaluator returns a :class:`BoundReport` carrying the subject, the
hypothesis flags (recorded, never silently required), the bound values, the
exact quantity when it was affordable to compute, and a verdict:

* ``holds``             all hypotheses true, exact value within the bound
* ``violated``          all hypotheses true but the exact value escapes the
                        bound (a counterexample to the claimed statement)
* ``not-applicable``    some hypothesis is false
* ``exact-unavailable`` hypotheses true, exact value not computed

Bound formulas that produce non-integer rationals are kept as exact
fractions; nothing is ever rounded before a comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .coverage import full_weight, minimal_cover_sequences
from .metacyclic import GeneralGroup, SplitGroup, StateBudgetExceeded, norm_table
from .residue import UnitContext, build_context, is_prime, quotient_unit, unit_order

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"
EXACT_UNAVAILABLE = "exact-unavailable"

DEFAULT_DIAMETER_BUDGET = 10**6


@dataclass(frozen=True)
class BoundReport:
    subject: dict
    theorem_id: str
    hypotheses: tuple[tuple[str, bool], ...]
    bounds: dict = field(default_factory=dict)
    exact: int | None = None
    verdict: str = EXACT_UNAVAILABLE
    note: str = ""

    @property
    def hypotheses_ok(self) -> bool:
        return all(ok for _, ok in self.hypotheses)

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return v.numerator if v.denominator == 1 else str(v)
            return v

        return {
            "subject": dict(self.subject),
            "theorem_id": self.theorem_id,
            "hypotheses": [{"name": name, "satisfied": ok} for name, ok in self.hypotheses],
            "bounds": {name: enc(v) for name, v in self.bounds.items()},
            "exact": self.exact,
            "verdict": self.verdict,
            "note": self.note,
        }


def _verdict(hyps_ok: bool, exact, lower, upper) -> str:
    if not hyps_ok:
        return NOT_APPLICABLE
    if exact is None:
        return EXACT_UNAVAILABLE
    if (lower is not None and exact < lower) or (upper is not None and exact > upper):
        return VIOLATED
    return HOLDS


def _try_diameter(m: int, n: int, k: int, budget: int) -> int | None:
    if pow(k, m, n) != 1:
        return None
    try:
        return norm_table(SplitGroup(m, n, k), max_states=budget).diameter
    except StateBudgetExceeded:
        return None


def split_diameter_bound(
    m: int,
    ctx: UnitContext,
    min_degree: int | None = None,
    diameter_budget: int = DEFAULT_DIAMETER_BUDGET,
) -> BoundReport:
    """Diameter bound floor(m/2) + weight, plus the least degree when ord(k) = m.

    Hypotheses: the order of k is even, k^(alpha/2) == -1 (mod n), and the
    order divides m (without which no split group of order m*n exists and
    no exact diameter can be attached).
    """
    n, k, alpha = ctx.n, ctx.k, ctx.alpha
    hyps = (
        ("alpha even", alpha % 2 == 0),
        ("k^(alpha/2) == -1 (mod n)", ctx.neg_one),
        ("ord(k) divides m", pow(k, m, n) == 1),
    )
    weight, _ = full_weight(ctx)
    bound = m // 2 + weight
    bounds = {"weight": weight, "bound": bound}
    if alpha == m:
        if min_degree is None:
            min_degree = minimal_cover_sequences(ctx).min_degree
        bound += min_degree
        bounds.update(min_degree=min_degree, bound=bound)
    hyps_ok = all(ok for _, ok in hyps)
    exact = _try_diameter(m, n, k, diameter_budget) if hyps_ok else None
    return BoundReport(
        subject={"m": m, "n": n, "k": k},
        theorem_id="main",
        hypotheses=hyps,
        bounds=bounds,
        exact=exact,
        verdict=_verdict(hyps_ok, exact, None, bound),
    )


def small_degree_diameter_bound(
    m: int,
    ctx: UnitContext,
    min_degree: int | None = None,
    diameter_budget: int = DEFAULT_DIAMETER_BUDGET,
) -> BoundReport:
    """Diameter bound floor(m/2) + weight under the small-degree condition.

    Adds the hypothesis 2*deg <= floor(alpha/2); the bound then drops the
    degree term regardless of whether ord(k) equals m.
    """
    n, k, alpha = ctx.n, ctx.k, ctx.alpha
    neg = ctx.neg_one
    if min_degree is None and neg:
        min_degree = minimal_cover_sequences(ctx).min_degree
    deg_ok = min_degree is not None and 2 * min_degree <= alpha // 2
    hyps = (
        ("alpha even", alpha % 2 == 0),
        ("k^(alpha/2) == -1 (mod n)", neg),
        ("ord(k) divides m", pow(k, m, n) == 1),
        ("2*deg <= floor(alpha/2)", deg_ok),
    )
    weight, _ = full_weight(ctx)
    bound = m // 2 + weight
    hyps_ok = all(ok for _, ok in hyps)
    exact = _try_diameter(m, n, k, diameter_budget) if hyps_ok else None
    return BoundReport(
        subject={"m": m, "n": n, "k": k},
        theorem_id="prime_corollary",
        hypotheses=hyps,
        bounds={"weight": weight, "min_degree": min_degree, "bound": bound},
        exact=exact,
        verdict=_verdict(hyps_ok, exact, None, bound),
    )


def general_diameter_bound(
    pres: GeneralGroup, diameter_budget: int = DEFAULT_DIAMETER_BUDGET
) -> BoundReport:
    """Bound for a general metacyclic group via its split cover.

    The group surjects onto itself from the split group with x of order
    m0*n/ell, so its diameter is at most the cover's, which in turn is
    bounded by floor(M/2) + weight.  The exact attached value is the
    presented group's own diameter.
    """
    cover_m = pres.m0 * pres.n // pres.ell
    ctx = build_context(pres.n, pres.k)
    weight, _ = full_weight(ctx)
    bound = cover_m // 2 + weight
    hyps = (
        ("alpha even", ctx.alpha % 2 == 0),
        ("k^(alpha/2) == -1 (mod n)", ctx.neg_one),
    )
    hyps_ok = all(ok for _, ok in hyps)
    exact = None
    cover_diam = None
    try:
        exact = norm_table(pres, max_states=diameter_budget).diameter
    except StateBudgetExceeded:
        pass
    try:
        cover_diam = norm_table(pres.cover(), max_states=diameter_budget).diameter
    except StateBudgetExceeded:
        pass
    bounds = {"cover_m": cover_m, "weight": weight, "bound": bound, "cover_diameter": cover_diam}
    return BoundReport(
        subject={"m0": pres.m0, "ell": pres.ell, "n": pres.n, "k": pres.k},
        theorem_id="general_metacyclic",
        hypotheses=hyps,
        bounds=bounds,
        exact=exact,
        verdict=_verdict(hyps_ok, exact, None, bound),
    )


def _primitive_window(p: int, k: int) -> tuple[int, list[int]]:
    """Leading degree and the unit window {k^j : 0 <= j <= i1} for a prime p."""
    i1 = (p - 5) // 4 if p % 4 == 1 else (p - 3) // 4
    window = []
    t = 1
    for _ in range(i1 + 1):
        window.append(t)
        t = t * k % p
    return i1, window


def prime_weight_bound(p: int, k: int, compute_exact: bool = True) -> BoundReport:
    """Weight bounds for a primitive unit modulo an odd prime.

    Reports the residue-class bound ((p+3)/4 or (p+5)/4), the refined
    all-ones bound that applies when 2 lies in the signed unit window, and
    the degree the underlying construction promises.
    """
    if not is_prime(p) or p == 2:
        raise ValueError(f"not an odd prime: {p}")
    if unit_order(p, k) != p - 1:
        raise ValueError(f"not a primitive unit: k={k} mod {p}")
    one_mod_four = p % 4 == 1
    basic = (p + 3) // 4 if one_mod_four else (p + 5) // 4
    refined = (p - 1) // 4 if one_mod_four else (p + 1) // 4
    theorem_degree = (p - 5) // 4 if one_mod_four else (p - 3) // 4
    i1, window = _primitive_window(p, k)
    signed = set(window) | {(p - t) % p for t in window}
    refinement_applies = 2 % p in signed
    exact = None
    if compute_exact:
        exact, _ = full_weight(build_context(p, k))
    hyps = (("p odd prime", True), ("ord(k) == p-1", True))
    effective = refined if refinement_applies else basic
    return BoundReport(
        subject={"p": p, "k": k},
        theorem_id="prime_weight_refined" if refinement_applies else "prime_weight",
        hypotheses=hyps,
        bounds={
            "basic": basic,
            "refined": refined,
            "refinement_applies": refinement_applies,
            "theorem_degree": theorem_degree,
            "window_degree": i1,
        },
        exact=exact,
        verdict=_verdict(True, exact, None, effective),
    )


def prime_power_weight_interval(
    p: int, e: int, k: int, compute_exact: bool | None = None
) -> BoundReport:
    """Claimed two-sided weight interval for maximal-order units mod p^e.

    For odd p the unit must have order p^(e-1)(p-1); for p = 2 it needs
    e >= 4 and order 2^(e-2).  The interval endpoints can be proper
    fractions; they are kept exact.
    """
    if not is_prime(p):
        raise ValueError(f"not a prime: {p}")
    n = p**e
    if math.gcd(k, p) != 1:
        raise ValueError(f"not a unit: k={k} mod {n}")
    m = unit_order(n, k)
    if p != 2:
        required = p ** (e - 1) * (p - 1)
        precondition = ("ord(k) == p^(e-1)*(p-1)", m == required)
        eps = 1 if p % 4 == 1 else -1
        base = Fraction(p + 4 + eps, 4)
        lower = base + (e - 2) * p
        upper = base + (e - 1) * p
        extra = {"epsilon": eps}
    else:
        required = 2 ** (e - 2) if e >= 2 else 1
        precondition = ("e >= 4 and ord(k) == 2^(e-2)", e >= 4 and m == required)
        gamma = 4 if e >= 3 and pow(k, 2 ** (e - 3), n) == n - 1 else 2
        lower = Fraction(gamma + 2 * (e - 2))
        upper = Fraction(gamma + 2 * (e - 1))
        extra = {"gamma": gamma}
    hyps = (precondition,)
    hyps_ok = precondition[1]
    if compute_exact is None:
        compute_exact = hyps_ok and n <= 4096
    exact = None
    if compute_exact and hyps_ok:
        exact, _ = full_weight(build_context(n, k))
    return BoundReport(
        subject={"p": p, "e": e, "k": k},
        theorem_id="prime_power_sandwich",
        hypotheses=hyps,
        bounds={"lower": lower, "upper": upper, **extra},
        exact=exact,
        verdict=_verdict(hyps_ok, exact, lower, upper),
    )


def lifted_weight_interval(
    p: int, e: int, k: int, compute_exact: bool | None = None
) -> BoundReport:
    """Weight interval for k mod p^e from the weight one level down.

    The reduction mod p^(e-1) never decreases difficulty, so the quotient
    weight is a lower bound; lifting adds at most p when p divides ord(k)
    and at most floor(ord(k)/2) otherwise.
    """
    n = p**e
    k0, m0 = quotient_unit(p, e, k)  # validates p, e, k
    m = unit_order(n, k)
    n0 = p ** (e - 1)
    if n0 < 3:
        return BoundReport(
            subject={"p": p, "e": e, "k": k},
            theorem_id="lift_bound",
            hypotheses=(("quotient modulus >= 3", False),),
            verdict=NOT_APPLICABLE,
            note="quotient modulus is 2; weights are defined for moduli >= 3",
        )
    base, _ = full_weight(build_context(n0, k0))
    step = p if m % p == 0 else m // 2
    lower, upper = base, base + step
    if compute_exact is None:
        compute_exact = n <= 4096
    exact = None
    if compute_exact:
        exact, _ = full_weight(build_context(n, k))
    return BoundReport(
        subject={"p": p, "e": e, "k": k, "k0": k0, "ord_k": m, "ord_k0": m0},
        theorem_id="lift_bound",
        hypotheses=(("e >= 2", True),),
        bounds={"lower": lower, "upper": upper, "quotient_weight": base, "step": step},
        exact=exact,
        verdict=_verdict(True, exact, lower, upper),
    )


def degree_bound(ctx: UnitContext) -> BoundReport:
    """Least minimal-sequence degree is at most half the order of k."""
    hyp = ("alpha even and k^(alpha/2) == -1 (mod n)", ctx.neg_one and ctx.alpha > 1)
    if not hyp[1]:
        return BoundReport(
            subject={"n": ctx.n, "k": ctx.k},
            theorem_id="deg_bound",
            hypotheses=(hyp,),
            verdict=NOT_APPLICABLE,
        )
    res = minimal_cover_sequences(ctx)
    bound = ctx.alpha // 2
    return BoundReport(
        subject={"n": ctx.n, "k": ctx.k},
        theorem_id="deg_bound",
        hypotheses=(hyp,),
        bounds={"bound": bound, "weight": res.weight},
        exact=res.min_degree,
        verdict=_verdict(True, res.min_degree, None, bound),
    )
