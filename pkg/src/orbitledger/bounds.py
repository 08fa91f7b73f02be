"""Exact integer/rational arithmetic for thresholds, order bounds and coin counts.

Everything here is pure bookkeeping: the orbit-count threshold, the order
bound dim(W) * |A/F| * e^2 * (|W|-1), the tabulated |A/F| caps for small e,
the immediate (|V|-1)/|G| + 1 orbit bound, and the change-making refinement
whose coin set is the divisor list of the order bound.  No floating point is
used in any verdict; square roots are compared through squared integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NoTableEntry, NotExceptional

# The ten exceptional prime powers, in their traditional order.
EXCEPTIONAL_CASES = [
    (17, 4), (19, 4), (7, 6), (5, 8), (7, 8),
    (11, 8), (13, 8), (7, 9), (3, 16), (5, 16),
]

# Printed reference thresholds; case (11, 8) is printed as 155 in the source
# material while the exact value is 154 (see threshold()).
PRINTED_THRESHOLDS = {
    (17, 4): 8, (19, 4): 9, (7, 6): 6, (5, 8): 8, (7, 8): 27,
    (11, 8): 155, (13, 8): 299, (7, 9): 60, (3, 16): 36, (5, 16): 2036,
}

# Published case-level facts reproduced by verify_case: minima from the
# exhaustive/kronecker runs and the naive-bound claims of the arithmetic cases.
REFERENCE_MINIMA = {
    (17, 4): 19,       # exhaustive e=4 search
    (19, 4): 21,       # exhaustive e=4 search
    (7, 6): 8,         # kronecker e=6 search
    (5, 8): 12,        # exhaustive e=8 search (out of desk scope here)
    (7, 8): 34,        # exhaustive e=8 search (out of desk scope here)
    (3, 16): 38,       # change-making at e=8
}

# Upper bounds on the outer quotient |A/F| for the small widths e.
_AF_TABLE = {
    3: 24,
    4: 6**2 * 2,
    6: 24 * 6,
    8: 6**4,
    9: 24**2 * 2,
    16: 6**4 * 24,
}


def threshold(p, n):
    """Smallest integer strictly greater than p**(n/2) / (12 n) + 1.

    Odd n goes through math.isqrt, never floating point; for both parities
    the answer collapses to floor(p**(n/2) / (12 n)) + 2.
    """
    if n % 2 == 0:
        root = p ** (n // 2)
    else:
        root = math.isqrt(p**n)
    return root // (12 * n) + 2


def threshold_certificate(p, n):
    """Exact-arithmetic proof obligations for the threshold value.

    Returns (t, above, below): t = threshold(p, n), above certifies
    t > p**(n/2)/(12n) + 1 and below certifies t - 1 <= p**(n/2)/(12n) + 1,
    both via squared-integer comparisons.
    """
    t = threshold(p, n)
    m = 12 * n
    pn = p**n
    # t > sqrt(pn)/m + 1  <=>  ((t - 1) * m)**2 > pn
    above = ((t - 1) * m) ** 2 > pn
    # t - 1 <= sqrt(pn)/m + 1  <=>  ((t - 2) * m)**2 <= pn
    below = ((t - 2) * m) ** 2 <= pn
    return t, above, below


def af_bound(e):
    """Tabulated cap on the outer quotient order for width e."""
    try:
        return _AF_TABLE[e]
    except KeyError:
        raise NoTableEntry(f"no tabulated quotient bound for e={e}") from None


@dataclass
class StructureBranch:
    """One (e, |W|) branch of an exceptional case."""

    p: int
    n: int
    e: int
    w_size: int
    dim_w: int
    b: int
    af: int
    order_cap: int

    @property
    def galois_factor(self):
        return self.dim_w

    def validate(self):
        assert self.w_size == self.p**self.dim_w
        assert self.w_size ** (self.e * self.b) == self.p**self.n
        assert self.e > 2 and self.n % self.e == 0

    def to_dict(self):
        return {
            "e": self.e, "w_size": self.w_size, "dim_w": self.dim_w, "b": self.b,
            "af_bound": self.af, "order_bound": self.order_cap,
        }


def order_bound(e, w_size, dim_w, af=None):
    """dim(W) * |A/F| * e^2 * (|W| - 1), exact."""
    af = af_bound(e) if af is None else af
    return dim_w * af * e * e * (w_size - 1)


def branch_options(p, n, e):
    """All (w_size, dim_w, b) options for one e: p**n = w_size**(e*b)."""
    out = []
    for b in sorted(d for d in range(1, n // e + 1) if (n // e) % d == 0):
        m = n // (e * b)
        out.append((p**m, m, b))
    return out


def dominant_branch(p, n, e):
    """The (e, w) option with the largest order bound; what the case text uses."""
    best = None
    for w_size, dim_w, b in branch_options(p, n, e):
        cap = order_bound(e, w_size, dim_w)
        if best is None or cap > best.order_cap:
            best = StructureBranch(p, n, e, w_size, dim_w, b, af_bound(e), cap)
    best.validate()
    return best


def admissible_widths(p, n):
    """Divisors e of n with e > 2, coprime to p, and a tabulated quotient cap."""
    return [e for e in range(3, n + 1)
            if n % e == 0 and math.gcd(e, p) == 1 and e in _AF_TABLE]


def naive_lower_bound(v_size, cap):
    """(|V| - 1)/|G| + 1 as an exact rational."""
    if v_size <= 0 or cap <= 0:
        raise ValueError("sizes must be positive")
    return Fraction(v_size - 1, cap) + 1


def divisors(m):
    """All divisors, descending."""
    if m < 1:
        raise ValueError("m must be >= 1")
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d != m // d:
                large.append(m // d)
        d += 1
    return sorted(small + large, reverse=True)


_DP_SENTINEL = np.int32(1 << 30)


def change_making_lb(order_cap, v_size):
    """Minimum number of coins from divisors(order_cap) summing to v_size - 1.

    Exact unbounded coin change; each coin pass is the standard ascending
    relaxation, vectorised per residue class with a running prefix minimum.
    The orbit lower bound that follows is the returned N plus one.
    """
    target = v_size - 1
    if target < 0:
        raise ValueError("v_size must be >= 1")
    if target == 0:
        return 0
    coins = divisors(order_cap)
    # Window reduction: for c below the largest coin d1 let c+ be the smallest
    # coin that is a proper multiple of c (d1 qualifies, so it exists).  An
    # optimal solution uses c at most c+/c - 1 times, else c+/c copies of c
    # collapse into one c+ coin with a strictly smaller count.  The small
    # coins therefore contribute at most M = sum(c+ - c), and at least
    # (target - M) // d1 copies of d1 can be peeled off up front.
    d1 = coins[0]
    bulk = 0
    if target > d1:
        m_window = 0
        for c in coins[1:]:
            cplus = min(x for x in coins if x > c and x % c == 0)
            m_window += cplus - c
        bulk = max(0, (target - m_window) // d1)
        target -= bulk * d1
    if target == 0:
        return bulk
    dp = np.full(target + 1, _DP_SENTINEL, dtype=np.int32)
    dp[0] = 0
    for c in coins:
        if c > target:
            continue
        rows = (target + c) // c
        padded = np.full(rows * c, _DP_SENTINEL, dtype=np.int32)
        padded[: target + 1] = dp
        arr = padded.reshape(rows, c)
        q = np.arange(rows, dtype=np.int32)[:, None]
        arr -= q
        np.minimum.accumulate(arr, axis=0, out=arr)
        arr += q
        np.minimum(dp, arr.reshape(-1)[: target + 1], out=dp)
    n_coins = int(dp[target])
    if n_coins >= int(_DP_SENTINEL):
        raise ArithmeticError("target unreachable; divisor 1 should prevent this")
    return bulk + n_coins


def change_making_lb_brute(order_cap, target):
    """Plain quadratic DP used as an independent oracle for small instances."""
    coins = divisors(order_cap)
    dp = [0] + [None] * target
    for x in range(1, target + 1):
        best = None
        for c in coins:
            if c <= x and dp[x - c] is not None:
                cand = dp[x - c] + 1
                if best is None or cand < best:
                    best = cand
        dp[x] = best
    return dp[target]


@dataclass
class CaseReport:
    """Assembled verdict for one exceptional (p, n)."""

    p: int
    n: int
    threshold_paper: int
    threshold_computed: int
    notes: list = field(default_factory=list)
    branches: list = field(default_factory=list)
    overall: str = "unverified"

    def to_dict(self):
        return {
            "p": self.p,
            "n": self.n,
            "threshold_paper": self.threshold_paper,
            "threshold_computed": self.threshold_computed,
            "notes": list(self.notes),
            "branches": [dict(b) for b in self.branches],
            "overall": self.overall,
        }


ACCEPTED_VERDICTS = ("verified", "consistency-only-with-paper-citation")


def emit_case_report(p, n, branch_results, notes=None):
    """Fold branch results into a CaseReport with the overall verdict rule."""
    if (p, n) not in PRINTED_THRESHOLDS:
        raise NotExceptional(f"{p}**{n} is not one of the exceptional cases")
    report = CaseReport(
        p=p, n=n,
        threshold_paper=PRINTED_THRESHOLDS[(p, n)],
        threshold_computed=threshold(p, n),
        notes=list(notes or []),
        branches=list(branch_results),
    )
    if report.threshold_paper != report.threshold_computed:
        report.notes.append(
            f"printed threshold {report.threshold_paper} differs from the exact value "
            f"{report.threshold_computed}; the case verdict uses the exact value")
    if all(b.get("verdict") in ACCEPTED_VERDICTS for b in report.branches):
        report.overall = "verified"
    else:
        report.overall = "not-verified"
    return report
