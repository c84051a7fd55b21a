"""Irreducibility certificates for monic rational polynomials.

Two one-directional criteria are implemented.  The valuation criterion of
Dumas: if for some prime p every coefficient satisfies the slope bound

    nu_p(a_r) / (n - r)  >=  nu_p(a_0) / n      (0 <= r <= n-1)

and gcd(nu_p(a_0), n) = 1, the polynomial is irreducible over Q.  And a
finite-field oracle: reduce mod several primes, compute the multiset of
irreducible-factor degrees by distinct-degree factorization, and intersect
the subset-sums; if no proper degree survives, no rational factorization can
exist.  Neither criterion can ever certify reducibility, so the third verdict
is "inconclusive".  Every "irreducible" verdict carries a machine-checkable
witness, and Dumas certificates can be re-verified from their JSON form alone.

Polynomials are sequences of rationals, constant term first, leading
coefficient included.  Slope comparisons are cross-multiplied integer
comparisons throughout; nothing here touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import DomainError, InvalidPrimeError
from .exact import INFINITY, Valuation, is_prime, valuation

Coeffs = Sequence[Union[int, Fraction]]


def _as_fractions(coeffs: Coeffs) -> list[Fraction]:
    out = [Fraction(c) for c in coeffs]
    if len(out) < 2:
        raise DomainError("polynomial must have degree >= 1")
    return out


def _require_monic(coeffs: list[Fraction]) -> None:
    if coeffs[-1] != 1:
        raise DomainError(f"polynomial must be monic, leading coefficient {coeffs[-1]}")


# ---------------------------------------------------------------------------
# Newton polygon


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points (r, nu_p(a_r)).

    ``points`` lists the finite-valuation points left to right; ``vertices``
    the hull corners; ``slopes`` the hull segments as (slope, horizontal run)
    pairs, slopes strictly increasing.
    """

    prime: int
    points: tuple[tuple[int, int], ...]
    vertices: tuple[tuple[int, int], ...]
    slopes: tuple[tuple[Fraction, int], ...]

    @classmethod
    def from_valuations(cls, prime: int, vals: Sequence[Valuation]) -> "NewtonPolygon":
        """Build from the full valuation list nu(a_0) .. nu(a_n); INFINITY entries are gaps."""
        pts = [(r, v) for r, v in enumerate(vals) if v is not INFINITY]
        if len(pts) < 2:
            raise DomainError("need at least two finite valuation points")
        # lower hull, left to right (monotone chain)
        hull: list[tuple[int, int]] = []
        for pt in pts:
            while len(hull) >= 2:
                (x1, y1), (x2, y2) = hull[-2], hull[-1]
                # keep the turn strictly convex: drop the middle point when it
                # is on or above the segment hull[-2] -> pt
                if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                    hull.pop()
                else:
                    break
            hull.append(pt)
        slopes = tuple(
            (Fraction(hull[i + 1][1] - hull[i][1], hull[i + 1][0] - hull[i][0]), hull[i + 1][0] - hull[i][0])
            for i in range(len(hull) - 1)
        )
        return cls(prime=prime, points=tuple(pts), vertices=tuple(hull), slopes=slopes)

    def is_single_segment(self) -> bool:
        return len(self.vertices) == 2


def newton_polygon(coeffs: Coeffs, p: int) -> NewtonPolygon:
    """Newton polygon of a monic polynomial with nonzero constant term."""
    cs = _as_fractions(coeffs)
    _require_monic(cs)
    if cs[0] == 0:
        raise DomainError("constant term is zero; factor out x first")
    return NewtonPolygon.from_valuations(p, [valuation(c, p) for c in cs])


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class IrreducibilityCertificate:
    """Outcome of one criterion on one polynomial.

    ``verdict`` is "irreducible" or "inconclusive" (the criteria implemented
    here can never return "reducible"); ``witness`` holds everything needed to
    re-check an "irreducible" verdict mechanically.
    """

    poly_id: str
    coeffs: tuple[Fraction, ...]
    verdict: str
    criterion: str
    primes: tuple[int, ...]
    witness: dict
    reason: Optional[str] = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_json_dict(self) -> dict:
        """JSON document with a stable field order (golden-file friendly).

        For the Dumas criterion: poly, prime, valuations, slope_num, slope_den,
        gcd, verdict, criterion.  ``slope_num``/``slope_den`` encode the chord
        slope -nu_p(a_0)/n in lowest terms; valuations list nu_p(a_r) for
        r = 0 .. n-1 with "inf" marking zero coefficients.
        """
        poly = {
            "id": self.poly_id,
            "degree": self.degree,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }
        if self.criterion == "dumas":
            return {
                "poly": poly,
                "prime": self.primes[0],
                "valuations": self.witness["valuations"],
                "slope_num": self.witness["slope_num"],
                "slope_den": self.witness["slope_den"],
                "gcd": self.witness["gcd"],
                "verdict": self.verdict,
                "criterion": self.criterion,
            }
        return {
            "poly": poly,
            "primes": list(self.primes),
            "patterns": self.witness.get("patterns", {}),
            "skipped": self.witness.get("skipped", []),
            "unexcluded_degrees": self.witness.get("unexcluded_degrees", []),
            "verdict": self.verdict,
            "criterion": self.criterion,
        }


def _json_valuation(v: Valuation) -> Union[int, str]:
    return "inf" if v is INFINITY else int(v)


def dumas_check(coeffs: Coeffs, p: int, poly_id: str = "poly") -> IrreducibilityCertificate:
    """Apply the valuation criterion at p; verdict is irreducible or inconclusive.

    Condition (i), the slope bound, is evaluated by the cross-multiplied
    comparison nu(a_r) * n >= nu(a_0) * (n - r); zero coefficients satisfy it
    vacuously.  Condition (ii) is gcd(|nu(a_0)|, n) = 1.  A zero constant term
    makes the chord undefined and yields "inconclusive".
    """
    cs = _as_fractions(coeffs)
    _require_monic(cs)
    n = len(cs) - 1
    vals = [valuation(c, p) for c in cs[:-1]]
    json_vals = [_json_valuation(v) for v in vals]

    def cert(verdict: str, slope_ok: bool, gcd_val: Optional[int], reason: Optional[str]) -> IrreducibilityCertificate:
        v0 = vals[0]
        witness = {
            "valuations": json_vals,
            "slope_num": None if v0 is INFINITY else -int(v0),
            "slope_den": None if v0 is INFINITY else n,
            "gcd": gcd_val,
            "slope_condition": slope_ok,
        }
        if witness["slope_num"] is not None:
            g = math.gcd(abs(witness["slope_num"]), witness["slope_den"])
            if g > 1:
                witness["slope_num"] //= g
                witness["slope_den"] //= g
        return IrreducibilityCertificate(
            poly_id=poly_id,
            coeffs=tuple(cs),
            verdict=verdict,
            criterion="dumas",
            primes=(p,),
            witness=witness,
            reason=reason,
        )

    v0 = vals[0]
    if v0 is INFINITY:
        return cert("inconclusive", False, None, "zero constant term")
    slope_ok = all(v is INFINITY or v * n >= v0 * (n - r) for r, v in enumerate(vals))
    g = math.gcd(abs(v0), n)
    if slope_ok and g == 1:
        return cert("irreducible", True, g, None)
    reason = []
    if not slope_ok:
        reason.append("slope condition fails")
    if g != 1:
        reason.append(f"gcd(nu(a_0), n) = {g}")
    return cert("inconclusive", slope_ok, g, "; ".join(reason))


def recheck_dumas_certificate(doc: Mapping) -> bool:
    """Re-verify a Dumas certificate from its JSON document alone.

    Recomputes every valuation from the serialized coefficients with a naive
    division loop (independent of the library's valuation code), compares them
    with the recorded ones, and re-evaluates both conditions.  Returns True
    only for a sound "irreducible" certificate.
    """
    poly = doc["poly"]
    p = doc["prime"]
    coeffs = [Fraction(s) for s in poly["coeffs"]]
    n = poly["degree"]
    if len(coeffs) != n + 1 or coeffs[-1] != 1 or n < 1:
        return False

    def nu(x: Fraction) -> Union[int, None]:
        if x == 0:
            return None  # stands for infinity
        num, den, v = abs(x.numerator), x.denominator, 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        return v

    vals = [nu(c) for c in coeffs[:-1]]
    recorded = [None if s == "inf" else int(s) for s in doc["valuations"]]
    if vals != recorded:
        return False
    if vals[0] is None:
        return False
    if doc["verdict"] != "irreducible":
        return False
    slope_ok = all(v is None or v * n >= vals[0] * (n - r) for r, v in enumerate(vals))
    if not slope_ok:
        return False
    if math.gcd(abs(vals[0]), n) != 1:
        return False
    # recorded chord must match the recomputed one
    g = math.gcd(abs(vals[0]), n)
    if (doc["slope_num"], doc["slope_den"]) != (-vals[0] // g, n // g):
        return False
    return True


# ---------------------------------------------------------------------------
# finite-field degree patterns (distinct-degree factorization, no splitting)


def _gf_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _gf_rem(a: list[int], f: list[int], p: int) -> list[int]:
    a = a[:]
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        if c:
            for i, fc in enumerate(f):
                a[shift + i] = (a[shift + i] - c * fc) % p
        _gf_trim(a)
    return a

def _gf_div(a: list[int], f: list[int], p: int) -> list[int]:
    a = a[:]
    df = len(f) - 1
    q = [0] * max(len(a) - df, 1)
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        q[shift] = c
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _gf_trim(a)
    return _gf_trim(q)


def _gf_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _gf_trim(out)


def _gf_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _gf_trim(a[:]), _gf_trim(b[:])
    while b:
        a, b = b, _gf_rem(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _gf_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _gf_rem(a, f, p)
    while e:
        if e & 1:
            result = _gf_rem(_gf_mul(result, base, p), f, p)
        e >>= 1
        if e:
            base = _gf_rem(_gf_mul(base, base, p), f, p)
    return result


def distinct_degree_pattern(int_coeffs: Sequence[int], p: int) -> Optional[list[int]]:
    """Degree multiset of the irreducible factors of f mod p, or None.

    Returns None when the reduction is unusable: p divides the leading
    coefficient, or f mod p is not squarefree.  Uses distinct-degree
    factorization only; the factors themselves are never split, so the result
    is deterministic.  The returned multiset always sums to deg f.
    """
    if not is_prime(p):
        raise InvalidPrimeError(f"p = {p} is not prime")
    if int_coeffs[-1] % p == 0:
        return None
    f = _gf_trim([c % p for c in int_coeffs])
    n = len(f) - 1
    if n < 1:
        return None
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]
    deriv = _gf_trim([(i * c) % p for i, c in enumerate(f)][1:])
    if not deriv or len(_gf_gcd(f, deriv, p)) > 1:
        return None

    pattern: list[int] = []
    g = f[:]
    h = [0, 1]  # the polynomial x
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = _gf_powmod(h, p, g, p)
        h_minus_x = h[:] + [0] * (2 - len(h))
        h_minus_x[1] = (h_minus_x[1] - 1) % p
        common = _gf_gcd(_gf_trim(h_minus_x), g, p)
        if len(common) > 1:
            deg = len(common) - 1
            pattern.extend([d] * (deg // d))
            g = _gf_div(g, common, p)
            if len(g) - 1 < 1:
                break
            h = _gf_rem(h, g, p)
    if len(g) - 1 > 0:
        pattern.append(len(g) - 1)
    return sorted(pattern)


def _subset_sum_bits(pattern: Iterable[int]) -> int:
    bits = 1
    for d in pattern:
        bits |= bits << d
    return bits


def finite_field_degree_patterns(
    int_coeffs: Sequence[int], primes: Sequence[int], poly_id: str = "poly"
) -> IrreducibilityCertificate:
    """Degree-pattern oracle over an explicit prime list.

    The input must be a primitive integer polynomial (callers clear
    denominators).  Primes with non-squarefree reduction, or dividing the
    leading coefficient, are skipped and recorded.  Verdict "irreducible" when
    some pattern is the single block {n}, or when the intersection of the
    subset-sums of all collected patterns contains no proper degree; otherwise
    "inconclusive", with the surviving degrees reported.
    """
    if len(int_coeffs) < 2:
        raise DomainError("polynomial must have degree >= 1")
    n = len(int_coeffs) - 1
    coeffs = tuple(Fraction(c) for c in int_coeffs)
    patterns: dict[int, list[int]] = {}
    skipped: list[int] = []
    for p in primes:
        pat = distinct_degree_pattern(int_coeffs, p)
        if pat is None:
            skipped.append(p)
        else:
            patterns[p] = pat

    def cert(verdict: str, unexcluded: list[int], reason: Optional[str]) -> IrreducibilityCertificate:
        return IrreducibilityCertificate(
            poly_id=poly_id,
            coeffs=coeffs,
            verdict=verdict,
            criterion="finite-field-pattern",
            primes=tuple(patterns),
            witness={
                "patterns": {str(p): patterns[p] for p in sorted(patterns)},
                "skipped": sorted(skipped),
                "unexcluded_degrees": unexcluded,
            },
            reason=reason,
        )

    if not patterns:
        return cert("inconclusive", list(range(1, n)), "no usable primes")
    if any(pat == [n] for pat in patterns.values()):
        return cert("irreducible", [], None)
    bits = (1 << (n + 1)) - 1
    for pat in patterns.values():
        bits &= _subset_sum_bits(pat)
    unexcluded = [d for d in range(1, n) if (bits >> d) & 1]
    if not unexcluded:
        return cert("irreducible", [], None)
    return cert("inconclusive", unexcluded, f"degrees {unexcluded} not excluded")


def recheck_pattern_certificate(doc: Mapping) -> bool:
    """Re-verify a degree-pattern certificate from its JSON document.

    Recomputes the pattern at every recorded prime and redoes the subset-sum
    exclusion.  Returns True only for a sound "irreducible" verdict.
    """
    poly = doc["poly"]
    coeffs = [Fraction(s) for s in poly["coeffs"]]
    if any(c.denominator != 1 for c in coeffs):
        return False
    ints = [c.numerator for c in coeffs]
    n = poly["degree"]
    if len(ints) != n + 1 or doc["verdict"] != "irreducible":
        return False
    pats = []
    for p_str, recorded in doc["patterns"].items():
        pat = distinct_degree_pattern(ints, int(p_str))
        if pat != recorded:
            return False
        pats.append(pat)
    if not pats:
        return False
    if any(pat == [n] for pat in pats):
        return True
    bits = (1 << (n + 1)) - 1
    for pat in pats:
        bits &= _subset_sum_bits(pat)
    return not any((bits >> d) & 1 for d in range(1, n))


# ---------------------------------------------------------------------------
# helpers for callers


def primitive_integer_polynomial(coeffs: Coeffs) -> list[int]:
    """Clear denominators and divide out the content; preserves the root set."""
    cs = _as_fractions(coeffs)
    lcm = 1
    for c in cs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in cs]
    content = 0
    for c in ints:
        content = math.gcd(content, c)
    return [c // content for c in ints]


def select_witness_primes(
    int_coeffs: Sequence[int],
    floor: int = 0,
    max_keep: int = 10,
    max_examined: int = 120,
) -> tuple[Optional[list[int]], int]:
    """Walk primes above ``floor`` and pick a small witness set for the oracle.

    Keeps a prime only when its degree pattern strictly shrinks the set of
    not-yet-excluded proper factor degrees (non-squarefree reductions are
    skipped outright), and stops as soon as the kept patterns jointly exclude
    every proper degree.  Returns (kept_primes, primes_examined); kept is None
    if no proof emerged within the caps, which is the honest outcome for a
    reducible input.
    """
    n = len(int_coeffs) - 1
    proper_mask = ((1 << n) - 1) & ~1  # bits 1 .. n-1
    remaining = proper_mask
    kept: list[int] = []
    p = max(floor, 1)
    examined = 0
    while examined < max_examined and len(kept) < max_keep:
        p += 1
        if not is_prime(p):
            continue
        examined += 1
        pat = distinct_degree_pattern(int_coeffs, p)
        if pat is None:
            continue
        if pat == [n]:
            return [p], examined
        sums = _subset_sum_bits(pat)
        if remaining & sums != remaining:
            kept.append(p)
            remaining &= sums
            if not remaining:
                return kept, examined
    return None, examined
