"""Bound evaluators: values, hypothesis records, and verdict logic."""

from fractions import Fraction

import pytest

from metadiam.bounds import (
    EXACT_UNAVAILABLE,
    HOLDS,
    NOT_APPLICABLE,
    VIOLATED,
    small_degree_diameter_bound,
    degree_bound,
    general_diameter_bound,
    lifted_weight_interval,
    prime_power_weight_interval,
    prime_weight_bound,
    split_diameter_bound,
)
from metadiam.metacyclic import GeneralGroup
from metadiam.residue import build_context
from metadiam.sweeps import sweep_general_quotient


def test_split_diameter_bound_examples():
    rep = split_diameter_bound(60, build_context(61, 2))
    assert rep.hypotheses_ok
    # ord(2 mod 61) = 60 = m, so the bound carries the degree term
    assert rep.bounds["weight"] == 4
    assert rep.bounds["bound"] == 30 + 4 + rep.bounds["min_degree"]
    assert rep.exact == 31 and rep.verdict == HOLDS

    rep = split_diameter_bound(10, build_context(11, 2))
    assert rep.bounds["weight"] == 3 and rep.exact == 6 and rep.verdict == HOLDS

    rep = split_diameter_bound(2, build_context(3, 2))
    assert rep.bounds["bound"] == 1 + 1 + 0  # weight 1, least degree 0
    assert rep.exact == 2 and rep.verdict == HOLDS


def test_split_diameter_bound_not_applicable():
    rep = split_diameter_bound(4, build_context(30, 7))  # 7^2 != -1 (mod 30)
    assert not rep.hypotheses_ok
    assert rep.verdict == NOT_APPLICABLE and rep.exact is None

    rep = split_diameter_bound(5, build_context(13, 2))  # 12 does not divide 5
    assert dict(rep.hypotheses)["ord(k) divides m"] is False
    assert rep.verdict == NOT_APPLICABLE


def test_split_diameter_bound_budget_gate():
    rep = split_diameter_bound(12, build_context(13, 2), diameter_budget=10)
    assert rep.verdict == EXACT_UNAVAILABLE and rep.exact is None
    assert rep.bounds["bound"] >= 9


@pytest.mark.parametrize(
    "m,n,k,bound,diam",
    [(12, 13, 2, 9, 7), (16, 17, 3, 11, 9), (6, 7, 3, 5, 4)],
)
def test_small_degree_diameter_bound_examples(m, n, k, bound, diam):
    rep = small_degree_diameter_bound(m, build_context(n, k))
    assert rep.hypotheses_ok
    assert rep.bounds["bound"] == bound
    assert rep.exact == diam and rep.verdict == HOLDS


def test_small_degree_bound_on_largest_row():
    rep = small_degree_diameter_bound(60, build_context(61, 2))
    assert rep.bounds["bound"] == 34 and rep.exact == 31 and rep.verdict == HOLDS


def test_general_diameter_bound():
    # ell = n reduces exactly to the split bound
    rep = general_diameter_bound(GeneralGroup(6, 7, 7, 3))
    assert rep.bounds["cover_m"] == 6
    assert rep.bounds["bound"] == 3 + 2
    assert rep.exact == 4 and rep.verdict == HOLDS

    rep = general_diameter_bound(GeneralGroup(2, 3, 3, 1))
    assert rep.bounds["cover_m"] == 2
    assert rep.exact is not None and rep.bounds["cover_diameter"] is not None
    assert rep.exact <= rep.bounds["cover_diameter"]

    with pytest.raises(ValueError, match="k\\^m0"):
        general_diameter_bound(GeneralGroup(2, 3, 9, 4))


def test_quotient_never_beats_cover_small_sweep():
    rep = sweep_general_quotient(max_n=15, max_states=400)
    assert rep.ok, rep.violations
    assert rep.checked > 300


def test_prime_weight_bound_examples():
    rep = prime_weight_bound(13, 2)
    assert rep.bounds["basic"] == 4 and rep.exact == 3 and rep.verdict == HOLDS
    assert rep.bounds["refinement_applies"] is True  # 2 is in the unit window
    assert rep.bounds["refined"] == 3 and rep.bounds["theorem_degree"] == 2

    rep = prime_weight_bound(11, 2)
    assert rep.bounds["basic"] == 4 and rep.exact == 3 and rep.verdict == HOLDS

    rep = prime_weight_bound(5, 2)
    assert rep.bounds["basic"] == 2 and rep.exact == 2 and rep.verdict == HOLDS
    assert rep.bounds["refinement_applies"] is False

    with pytest.raises(ValueError, match="primitive"):
        prime_weight_bound(7, 2)  # ord(2 mod 7) = 3
    with pytest.raises(ValueError, match="odd prime"):
        prime_weight_bound(2, 1)


def test_prime_weight_refined_never_exceeds_basic():
    from metadiam.residue import unit_order

    for p in (3, 5, 7, 11, 13, 17, 19, 23):
        for k in range(2, p):
            if unit_order(p, k) != p - 1:
                continue
            rep = prime_weight_bound(p, k, compute_exact=False)
            assert rep.bounds["refined"] <= rep.bounds["basic"]
            assert rep.verdict == EXACT_UNAVAILABLE


def test_prime_power_interval_values():
    rep = prime_power_weight_interval(3, 2, 2)
    assert rep.bounds["lower"] == Fraction(3, 2)
    assert rep.bounds["upper"] == Fraction(9, 2)
    assert rep.exact == 3 and rep.verdict == HOLDS

    rep = prime_power_weight_interval(5, 2, 2)
    assert (rep.bounds["lower"], rep.bounds["upper"]) == (Fraction(5, 2), Fraction(15, 2))
    assert rep.exact == 3 and rep.verdict == HOLDS

    # the evaluator must report honestly when the claimed interval misses
    rep = prime_power_weight_interval(2, 4, 3)
    assert rep.bounds["gamma"] == 2
    assert (rep.bounds["lower"], rep.bounds["upper"]) == (6, 8)
    assert rep.exact == 3 and rep.verdict == VIOLATED

    rep = prime_power_weight_interval(3, 3, 2)
    assert rep.exact == 4 and rep.verdict == VIOLATED


def test_prime_power_interval_preconditions():
    rep = prime_power_weight_interval(3, 2, 4)  # ord(4 mod 9) = 3, not 6
    assert rep.verdict == NOT_APPLICABLE
    rep = prime_power_weight_interval(2, 3, 3)  # needs e >= 4
    assert rep.verdict == NOT_APPLICABLE
    assert rep.bounds["lower"] <= rep.bounds["upper"]


def test_lifted_weight_interval_examples():
    rep = lifted_weight_interval(3, 2, 2)
    assert (rep.bounds["lower"], rep.bounds["upper"]) == (1, 4)
    assert rep.exact == 3 and rep.verdict == HOLDS

    rep = lifted_weight_interval(2, 3, 3)
    assert rep.bounds["step"] == 2  # 2 divides ord(3 mod 8) = 2
    assert rep.bounds["lower"] <= rep.exact <= rep.bounds["upper"]

    # identity unit: the lower endpoint is the quotient's floor(n/2)
    rep = lifted_weight_interval(5, 2, 1)
    assert rep.bounds["lower"] == 5 // 2
    assert rep.verdict == VIOLATED  # lifting the identity blows past the step

    rep = lifted_weight_interval(2, 2, 1)
    assert rep.verdict == NOT_APPLICABLE


def test_degree_bound():
    rep = degree_bound(build_context(30, 7))
    assert rep.verdict == NOT_APPLICABLE  # 7^2 = 19 != 29 (mod 30)

    rep = degree_bound(build_context(13, 2))
    assert rep.exact == 2 and rep.bounds["bound"] == 6 and rep.verdict == HOLDS

    rep = degree_bound(build_context(5, 2))
    assert rep.exact <= 2 and rep.verdict == HOLDS


def test_report_json_encoding():
    rep = prime_power_weight_interval(3, 2, 2)
    obj = rep.to_json()
    assert obj["bounds"]["lower"] == "3/2"
    assert obj["verdict"] == HOLDS
    assert obj["subject"] == {"p": 3, "e": 2, "k": 2}
    assert {h["name"] for h in obj["hypotheses"]}

    rep = small_degree_diameter_bound(12, build_context(13, 2))
    obj = rep.to_json()
    assert obj["bounds"]["bound"] == 9 and isinstance(obj["bounds"]["bound"], int)


def test_violated_only_with_hypotheses_satisfied():
    # structural invariant of every report the evaluators produce
    reports = [
        split_diameter_bound(60, build_context(61, 2)),
        split_diameter_bound(4, build_context(30, 7)),
        small_degree_diameter_bound(12, build_context(13, 2)),
        prime_power_weight_interval(2, 4, 3),
        prime_power_weight_interval(3, 2, 4),
        lifted_weight_interval(5, 2, 1),
        degree_bound(build_context(30, 7)),
    ]
    for rep in reports:
        if rep.verdict == VIOLATED:
            assert rep.hypotheses_ok and rep.exact is not None
        if not rep.hypotheses_ok:
            assert rep.verdict == NOT_APPLICABLE
