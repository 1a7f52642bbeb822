"""Coverage sets over Z_n and their minimal budget weights.

Fix a unit k mod n of order alpha.  For a strictly decreasing exponent
sequence i_1 > ... > i_r and a nonnegative budget vector (L_1, ..., L_r),
the coverage set is

    { b_1 k^(i_1) + ... + b_r k^(i_r)  mod n  :  |b_j| <= L_j }.

The weight of a sequence is the least total budget sum for which the
coverage set is all of Z_n.  This module computes those weights exactly
(iterative deepening over the total, enumerating all compositions at each
level, with lexicographically smallest witnesses), together with the
sequence transforms that preserve them and the support-minimal sequences
that realize the optimum.

Coverage sets are kept as bitmasks over Z_n, so a budget step is a couple of
word rotations; everything here is pure and safe to share across workers.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field

from .residue import UnitContext

TOOL_VERSION = "0.1.0"


class BudgetExceeded(RuntimeError):
    """A search or table would exceed its configured resource budget."""


class SearchTruncated(RuntimeError):
    """An enumeration hit its configured cap before completing."""


# ---------------------------------------------------------------------------
# sequences


@dataclass(frozen=True)
class ExponentSeq:
    """Strictly decreasing exponents in [0, alpha-1].

    ``reduced`` means the sequence ends in 0.  The degree is the leading
    entry; the codegree is the smallest nonzero entry (undefined for the
    singleton (0,)).
    """

    alpha: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.alpha < 1:
            raise ValueError(f"order must be >= 1, got {self.alpha}")
        e = tuple(self.entries)
        object.__setattr__(self, "entries", e)
        if not e:
            raise ValueError("empty exponent sequence")
        if any(not 0 <= x < self.alpha for x in e):
            raise ValueError(f"entries out of [0, {self.alpha - 1}]: {e}")
        if any(a <= b for a, b in zip(e, e[1:])):
            raise ValueError(f"entries not strictly decreasing: {e}")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def is_reduced(self) -> bool:
        return self.entries[-1] == 0

    @property
    def degree(self) -> int:
        return self.entries[0]

    @property
    def codegree(self) -> int | None:
        """Smallest nonzero entry, or None when there is none."""
        nz = [x for x in self.entries if x != 0]
        return min(nz) if nz else None

    @classmethod
    def complete(cls, alpha: int) -> "ExponentSeq":
        """The full descending sequence (alpha-1, ..., 1, 0)."""
        return cls(alpha, tuple(range(alpha - 1, -1, -1)))

    @classmethod
    def singleton(cls, alpha: int) -> "ExponentSeq":
        """The length-1 reduced sequence (0,)."""
        return cls(alpha, (0,))


def _as_entries(seq) -> tuple[int, ...]:
    if isinstance(seq, ExponentSeq):
        return seq.entries
    return tuple(seq)


def _as_seq(ctx_alpha: int, seq) -> ExponentSeq:
    if isinstance(seq, ExponentSeq):
        if seq.alpha != ctx_alpha:
            raise ValueError(f"sequence order {seq.alpha} != context order {ctx_alpha}")
        return seq
    return ExponentSeq(ctx_alpha, tuple(seq))


def dual(seq: ExponentSeq) -> ExponentSeq:
    """Weight-preserving transform onto a reduced sequence of equal length.

    (i_1, ..., i_r) maps to (a-(i_1-i_2), a-(i_1-i_3), ..., a-(i_1-i_r), 0)
    where a is the ambient order.  A length-1 input maps to (0,).
    """
    a = seq.alpha
    e = seq.entries
    if len(e) == 1:
        return ExponentSeq(a, (0,))
    out = tuple(a - (e[0] - e[j]) for j in range(1, len(e))) + (0,)
    return ExponentSeq(a, out)


def codual(seq: ExponentSeq) -> ExponentSeq:
    """Second weight-preserving transform, defined on reduced sequences.

    (i_1, ..., i_{r-1}, 0) maps to (a-i_{r-1}, i_1-i_{r-1}, ..., i_{r-2}-i_{r-1}, 0).
    """
    if not seq.is_reduced:
        raise ValueError(f"codual requires a reduced sequence, got {seq.entries}")
    a = seq.alpha
    e = seq.entries
    if len(e) == 1:
        return ExponentSeq(a, (0,))
    c = e[-2]  # codegree
    out = (a - c,) + tuple(e[j] - c for j in range(len(e) - 2)) + (0,)
    return ExponentSeq(a, out)


def refines(coarse: ExponentSeq, fine: ExponentSeq) -> bool:
    """True iff ``fine`` contains every entry of ``coarse`` (as sets)."""
    if coarse.alpha != fine.alpha:
        raise ValueError("sequences live in different orders")
    return set(coarse.entries) <= set(fine.entries)


# ---------------------------------------------------------------------------
# coverage sets


@dataclass(frozen=True)
class CoverageSet:
    """Subset of Z_n as a bitmask; bit r set means residue r is present."""

    n: int
    mask: int

    @property
    def count(self) -> int:
        return self.mask.bit_count()

    @property
    def covers(self) -> bool:
        return self.mask == (1 << self.n) - 1

    def __contains__(self, r: int) -> bool:
        return bool(self.mask >> (r % self.n) & 1)

    def residues(self) -> list[int]:
        return [r for r in range(self.n) if self.mask >> r & 1]


def _shift_in(mask: int, u: int, lam: int, n: int, full: int) -> int:
    """Add {b*u mod n : |b| <= lam} to every element of ``mask``."""
    if lam == 0:
        return mask
    acc = fwd = bwd = mask
    for _ in range(lam):
        fwd = ((fwd << u) | (fwd >> (n - u))) & full
        bwd = ((bwd >> u) | (bwd << (n - u))) & full
        acc |= fwd | bwd
    return acc


def _cover_mask(ctx: UnitContext, entries: tuple[int, ...], budgets) -> int:
    n = ctx.n
    full = (1 << n) - 1
    mask = 1  # {0}
    for e, lam in zip(entries, budgets):
        mask = _shift_in(mask, ctx.power(e), lam, n, full)
        if mask == full:
            return full
    return mask


def coverage_set(ctx: UnitContext, seq, budgets) -> CoverageSet:
    """The set of signed k-power sums within the given budgets.

    Built incrementally from {0}, one exponent at a time; once full it can
    only stay full, so the build may stop early.
    """
    entries = _as_entries(seq)
    budgets = tuple(budgets)
    if len(entries) != len(budgets):
        raise ValueError(f"length mismatch: {len(entries)} exponents, {len(budgets)} budgets")
    if any(lam < 0 for lam in budgets):
        raise ValueError(f"negative budget in {budgets}")
    _as_seq(ctx.alpha, entries)  # validate
    return CoverageSet(ctx.n, _cover_mask(ctx, entries, budgets))


# ---------------------------------------------------------------------------
# weight search


def _search_at(
    ctx: UnitContext, entries: tuple[int, ...], total: int, positive_heads: bool = False
) -> tuple[int, ...] | None:
    """First covering budget vector with the given total, in lex order.

    Enumerates compositions of ``total`` depth-first, position by position
    with ascending budgets, so the first hit is the lexicographically
    smallest witness.  A branch dies early when even tripling the reachable
    set per remaining unit cannot reach n residues.  With ``positive_heads``
    only compositions that are nonzero on every non-trailing position are
    tried (used by the support-minimality scan, where a zero budget would
    reduce to an already-rejected subsequence).
    """
    n = ctx.n
    full = (1 << n) - 1
    r = len(entries)
    units = [ctx.power(e) for e in entries]
    lo = 1 if positive_heads else 0

    def tail_witness(j: int, rem: int) -> tuple[int, ...] | None:
        # cheapest valid completion once coverage is already full
        heads_left = max(0, (r - 1) - j)
        if rem < lo * heads_left:
            return None
        tail = [lo] * heads_left + [rem - lo * heads_left]
        return tuple(tail[-(r - j) :]) if j < r else ()

    def dfs(j: int, rem: int, mask: int):
        if mask == full:
            return tail_witness(j, rem)
        if j == r or mask.bit_count() * 3**rem < n:
            return None
        if j == r - 1:
            m2 = _shift_in(mask, units[j], rem, n, full)
            return (rem,) if m2 == full else None
        if rem < lo * ((r - 1) - j):
            return None
        for lam in range(lo, rem + 1):
            m2 = _shift_in(mask, units[j], lam, n, full)
            res = dfs(j + 1, rem - lam, m2)
            if res is not None:
                return (lam,) + res
        return None

    if total == 0:
        return None  # n >= 3, so {0} never covers
    return dfs(0, total, 1)


def sequence_weight(ctx: UnitContext, seq) -> tuple[int, tuple[int, ...]]:
    """Minimal total budget covering Z_n over a fixed exponent sequence.

    Returns (weight, witness).  The witness is the lexicographically
    smallest minimizing budget vector; it always replays to full coverage.
    A cover always exists: budget floor(n/2) at any single position already
    covers, since each k^i is a unit.
    """
    s = _as_seq(ctx.alpha, seq)
    entries = s.entries
    for total in range(ctx.n // 2 + 1):
        witness = _search_at(ctx, entries, total)
        if witness is not None:
            return total, witness
    raise AssertionError("unreachable: floor(n/2) at one position always covers")


def level_weight(
    ctx: UnitContext, r: int, max_sequences: int = 200_000
) -> tuple[int, ExponentSeq, tuple[int, ...]]:
    """Minimal weight over all reduced sequences of length r.

    Restricting to reduced sequences loses nothing: the dual transform maps
    any sequence to a reduced one of the same length and weight.  Returns
    (weight, sequence, witness) with deterministic tie-breaking: sequences
    are scanned in ascending tuple order, budgets lexicographically.
    """
    if not 1 <= r <= ctx.alpha:
        raise ValueError(f"level out of range: r={r}, order={ctx.alpha}")
    n_seqs = _combinations_count(ctx.alpha - 1, r - 1)
    if n_seqs > max_sequences:
        raise BudgetExceeded(
            f"level {r} enumeration needs {n_seqs} sequences (cap {max_sequences})"
        )
    seqs = sorted(
        tuple(sorted(extra, reverse=True)) + (0,)
        for extra in itertools.combinations(range(1, ctx.alpha), r - 1)
    )
    for total in range(ctx.n // 2 + 1):
        for entries in seqs:
            witness = _search_at(ctx, entries, total)
            if witness is not None:
                return total, ExponentSeq(ctx.alpha, entries), witness
    raise AssertionError("unreachable")


def _combinations_count(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for j in range(k):
        out = out * (n - j) // (j + 1)
    return out


def full_weight(ctx: UnitContext) -> tuple[int, tuple[int, ...]]:
    """Weight of the complete descending sequence (alpha-1, ..., 1, 0).

    Every sequence refines into the complete one, and refining never raises
    the weight, so this is also the minimum over all levels.
    """
    return sequence_weight(ctx, ExponentSeq.complete(ctx.alpha))


# ---------------------------------------------------------------------------
# support-minimal realizing sequences


@dataclass(frozen=True)
class MinimalCoverResult:
    weight: int
    sequences: tuple[ExponentSeq, ...]
    min_degree: int


def minimal_cover_sequences(ctx: UnitContext, max_length: int | None = None) -> MinimalCoverResult:
    """All reduced sequences realizing the optimal weight minimally.

    A sequence qualifies when its weight equals the complete-sequence weight
    and deleting any single non-trailing entry strictly raises the weight
    (deleting the trailing 0 is excluded, it would leave a non-reduced
    sequence).  Any realizing sequence contains the support of one of its
    witnesses plus the trailing 0, so qualifying sequences have length at
    most weight+1; the scan enumerates supports up to that size, skipping
    supersets of realizing sequences.

    ``max_length`` caps the enumerated support length (default
    min(alpha, 16)); if the mathematical bound weight+1 exceeds it, the scan
    would be incomplete and SearchTruncated is raised instead.
    """
    alpha = ctx.alpha
    w_full, _ = full_weight(ctx)
    cap = min(alpha, 16 if max_length is None else max_length)
    hard = min(alpha, w_full + 1)
    if hard > cap:
        raise SearchTruncated(
            f"minimal sequence scan needs length {hard} > cap {cap} for n={ctx.n}, k={ctx.k}"
        )

    realizes: dict[tuple[int, ...], bool] = {}

    def check(entries: tuple[int, ...], heads_positive: bool) -> bool:
        got = realizes.get(entries)
        if got is None:
            got = _search_at(ctx, entries, w_full, positive_heads=heads_positive) is not None
            realizes[entries] = got
        return got

    minimal: list[ExponentSeq] = []
    for size in range(hard):
        for extra in itertools.combinations(range(1, alpha), size):
            entries = tuple(sorted(extra, reverse=True)) + (0,)
            deletions = [entries[:j] + entries[j + 1 :] for j in range(size)]
            if any(realizes.get(d, False) for d in deletions):
                # superset of a realizer: realizes, but cannot be minimal
                realizes[entries] = True
                continue
            # No proper reduced subsequence realizes, so a cover here must
            # use every non-trailing entry with positive budget.
            if check(entries, heads_positive=True):
                minimal.append(ExponentSeq(alpha, entries))
    return MinimalCoverResult(
        weight=w_full,
        sequences=tuple(minimal),
        min_degree=min(s.degree for s in minimal),
    )


# ---------------------------------------------------------------------------
# representations and formal sums


def find_representation(ctx: UnitContext, seq, budgets, target: int) -> tuple[int, ...]:
    """Coefficients b with sum(b_j * k^(i_j)) == target and |b_j| <= budget_j.

    Forward dynamic program over reachable residues with parent links; the
    budgets must come from a covering vector, so a solution always exists.
    """
    entries = _as_entries(seq)
    budgets = tuple(budgets)
    n = ctx.n
    target %= n
    layers: list[dict[int, tuple[int, int]]] = []
    reach = {0: (0, 0)}
    for e, lam in zip(entries, budgets):
        u = ctx.power(e)
        new: dict[int, tuple[int, int]] = {}
        for res in reach:
            for b in range(-lam, lam + 1):
                t = (res + b * u) % n
                if t not in new:
                    new[t] = (res, b)
        layers.append(new)
        reach = new
    if target not in reach:
        raise ValueError(f"target {target} not reachable within budgets {budgets}")
    coeffs = [0] * len(entries)
    cur = target
    for j in range(len(entries) - 1, -1, -1):
        prev, b = layers[j][cur]
        coeffs[j] = b
        cur = prev
    return tuple(coeffs)


@dataclass(frozen=True)
class FormalSum:
    """Ordered formal sum of signed coefficients against k-powers.

    ``terms`` is a tuple of (coefficient, exponent) pairs with exponents
    >= 0.  The absolute coefficient sum is ``acs``.  The sum is collapsed
    when every exponent class mod alpha carries at most one nonzero
    coefficient.
    """

    terms: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        t = tuple((int(c), int(e)) for c, e in self.terms)
        object.__setattr__(self, "terms", t)
        if any(e < 0 for _, e in t):
            raise ValueError(f"negative exponent in {t}")

    @property
    def acs(self) -> int:
        return sum(abs(c) for c, _ in self.terms)

    def value(self, ctx: UnitContext) -> int:
        return sum(c * ctx.power(e) for c, e in self.terms) % ctx.n

    def is_collapsed(self, alpha: int) -> bool:
        seen = set()
        for c, e in self.terms:
            if c == 0:
                continue
            cls = e % alpha
            if cls in seen:
                return False
            seen.add(cls)
        return True


_LEVEL_CACHE: dict[tuple[int, int, int], tuple[int, ExponentSeq, tuple[int, ...]]] = {}


def _cached_level_weight(ctx: UnitContext, r: int):
    key = (ctx.n, ctx.k, r)
    if key not in _LEVEL_CACHE:
        _LEVEL_CACHE[key] = level_weight(ctx, r)
    return _LEVEL_CACHE[key]


def reduce_sum(ctx: UnitContext, w: FormalSum) -> FormalSum:
    """Collapse a formal sum without changing its value mod n.

    Like k-powers (exponents congruent mod alpha) are merged into a single
    term, which never raises the absolute coefficient sum.  If the
    coefficient sum still overshoots the level weight for the number of
    nonzero terms, the value is re-represented on a weight-minimal sequence
    of that length, bringing acs down to at most that weight.  Sums that
    are already collapsed and within the level weight come back unchanged,
    zero-coefficient terms included.
    """
    alpha = ctx.alpha
    collapsed = w.is_collapsed(alpha)
    if collapsed:
        out = w
        r = sum(1 for c, _ in w.terms if c != 0)
    else:
        sums: dict[int, int] = {}
        for c, e in w.terms:
            cls = e % alpha
            sums[cls] = sums.get(cls, 0) + c
        terms = tuple((c, e) for e, c in sorted(sums.items(), reverse=True) if c != 0)
        out = FormalSum(terms)
        r = len(terms)
    if r == 0:
        return out
    wt_r, seq_r, wit_r = _cached_level_weight(ctx, r)
    if out.acs <= wt_r:
        return out
    coeffs = find_representation(ctx, seq_r, wit_r, w.value(ctx))
    new_terms = tuple((c, e) for c, e in zip(coeffs, seq_r.entries) if c != 0)
    return FormalSum(new_terms)


# ---------------------------------------------------------------------------
# persistent weight records


@dataclass(frozen=True)
class WeightRecord:
    """Cached outcome of one weight search.

    ``label`` is "alpha", "level:R", or "seq:I1,I2,...".  For level records
    the minimizing sequence is stored alongside so the witness can replay.
    """

    n: int
    k: int
    label: str
    weight: int
    witness: tuple[int, ...]
    sequence: tuple[int, ...]
    tool_version: str = TOOL_VERSION

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "sequence": self.label,
            "weight": self.weight,
            "witness": list(self.witness),
            "witness_seq": list(self.sequence),
            "tool_version": self.tool_version,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WeightRecord":
        return cls(
            n=int(obj["n"]),
            k=int(obj["k"]),
            label=str(obj["sequence"]),
            weight=int(obj["weight"]),
            witness=tuple(int(x) for x in obj["witness"]),
            sequence=tuple(int(x) for x in obj["witness_seq"]),
            tool_version=str(obj["tool_version"]),
        )

    def replay_ok(self, ctx: UnitContext) -> bool:
        if sum(self.witness) != self.weight:
            return False
        try:
            return coverage_set(ctx, self.sequence, self.witness).covers
        except ValueError:
            return False


def seq_label(entries) -> str:
    return "seq:" + ",".join(str(x) for x in _as_entries(entries))


class WeightCache:
    """Line-delimited store of weight records, one JSON object per line.

    Records from other tool versions, or records that no longer replay to a
    full cover, are ignored and recomputed by callers.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = str(path)
        self._records: dict[tuple[int, int, str], WeightRecord] = {}
        self._load()

    def _load(self) -> None:
        if not os.path.exists(self.path):
            return
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = WeightRecord.from_json(json.loads(line))
                except (ValueError, KeyError, json.JSONDecodeError):
                    continue
                if rec.tool_version != TOOL_VERSION:
                    continue
                self._records[(rec.n, rec.k, rec.label)] = rec

    def get(self, ctx: UnitContext, label: str) -> WeightRecord | None:
        rec = self._records.get((ctx.n, ctx.k, label))
        if rec is not None and rec.replay_ok(ctx):
            return rec
        return None

    def put(self, rec: WeightRecord) -> None:
        self._records[(rec.n, rec.k, rec.label)] = rec
        os.makedirs(os.path.dirname(os.path.abspath(self.path)), exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec.to_json(), separators=(",", ":")) + "\n")

    def __len__(self) -> int:
        return len(self._records)
