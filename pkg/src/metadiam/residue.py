"""Modular arithmetic restricted to what the weight machinery needs.

Residues are always stored canonically in [0, n-1]; signed coefficients only
ever appear in formal sums and budget bounds, never in stored residues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Moduli must fit comfortably in native 64-bit products.
MAX_MODULUS = 1 << 31


@dataclass(frozen=True)
class UnitContext:
    """Arithmetic environment for a unit k mod n.

    ``alpha`` is the multiplicative order of k, ``powers`` the cycle
    [k^0, k^1, ..., k^(alpha-1)] mod n, and ``neg_one`` is True exactly when
    alpha is even and k^(alpha/2) == n-1 (mod n).
    """

    n: int
    k: int
    alpha: int
    powers: tuple[int, ...]
    neg_one: bool

    def power(self, j: int) -> int:
        """k^j mod n for any integer j."""
        return self.powers[j % self.alpha]

    def __str__(self) -> str:  # pragma: no cover - debugging sugar
        return f"UnitContext(n={self.n}, k={self.k}, alpha={self.alpha})"


def _check_modulus(n: int) -> None:
    if n < 3:
        raise ValueError(f"modulus too small: n={n} (need n >= 3)")
    if n >= MAX_MODULUS:
        raise ValueError(f"modulus too large: n={n} (need n < 2^31)")


def unit_order(n: int, k: int) -> int:
    """Least alpha >= 1 with k^alpha == 1 (mod n).

    Computed by successive multiplication, which avoids factoring the unit
    group order and is O(alpha).
    """
    _check_modulus(n)
    if not 1 <= k < n:
        raise ValueError(f"residue out of range: k={k} for n={n}")
    if math.gcd(k, n) != 1:
        raise ValueError(f"not a unit: k={k} mod {n}")
    alpha = 1
    t = k % n
    while t != 1:
        t = t * k % n
        alpha += 1
    return alpha


def build_context(n: int, k: int) -> UnitContext:
    """Fully populated UnitContext for a unit k mod n."""
    alpha = unit_order(n, k)  # validates n, k
    powers = [1] * alpha
    for j in range(1, alpha):
        powers[j] = powers[j - 1] * k % n
    neg_one = alpha % 2 == 0 and powers[alpha // 2] == n - 1
    return UnitContext(n=n, k=k, alpha=alpha, powers=tuple(powers), neg_one=neg_one)


def is_prime(p: int) -> bool:
    """Deterministic trial-division primality check for small p."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def quotient_unit(p: int, e: int, k: int) -> tuple[int, int]:
    """Image of a unit k mod p^e under reduction mod p^(e-1), with its order.

    Returns (k0, m0) where k0 = k mod p^(e-1) and m0 = ord(k0).  For odd p
    the order drops by exactly a factor p when p divides ord(k) and is
    unchanged otherwise; for p = 2 the quotient of the orders can be 1 or 2
    in either case, so m0 is always computed directly.
    """
    if not is_prime(p):
        raise ValueError(f"not a prime: p={p}")
    if e < 2:
        raise ValueError(f"exponent too small: e={e} (need e >= 2)")
    if k % p == 0:
        raise ValueError(f"not a unit: k={k} mod {p}^{e}")
    n0 = p ** (e - 1)
    k0 = k % n0
    if n0 < 3:
        # quotient modulus 2: the only unit is 1
        return 1, 1
    return k0, unit_order(n0, k0)
