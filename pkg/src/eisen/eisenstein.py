"""Expansion of the weight-k Eisenstein series over the weight-4/weight-6 generators.

Normalization: G_k = 2 zeta(k) E_k, and the object computed here is the
coefficient vector w(k) = (w_{a,k}) of

    G_k = sum over 4a+6b=k of  w_{a,k} G_4^a G_6^b .

Two independent recurrences produce w(k): a convolution recurrence with no
derivative term (Rademacher's identity for power sums of divisor functions,
the production path) and Popa's recurrence, which involves the weight-2
generator and a derivative and exercises the quasimodular ring.  The two
must agree exactly; the q-expansion of either must match the divisor-sum
q-expansion after scaling by 2 zeta(k) / pi^k.  All three paths are exposed.

Internally the table builder works on integer numerator vectors over a per
weight common denominator; per-coefficient Fraction reduction happens once
per weight.  This matters: naive Fraction arithmetic normalizes on every
multiply and is ~25x slower at weight 500.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Mapping, Union

from .errors import ConsistencyError, DomainError, MissingWeightError
from .exact import INFINITY, Valuation, bernoulli, divisor_power_sum, valuation, zeta_ratio
from .qmring import E2, GradedForm, serre_derivative

#: coefficient vector of one weight: E4-exponent a -> w_{a,k}; b = (k-4a)/6 implied
WVector = dict[int, Fraction]

#: the weight-2 constant d_2 = -1/8 (the general formula below evaluated at k=2)
D2 = Fraction(-1, 8)


def exponents(k: int) -> list[tuple[int, int]]:
    """All (a, b) with 4a + 6b = k, a ascending."""
    return [(a, (k - 4 * a) // 6) for a in range(k // 4 + 1) if (k - 4 * a) % 6 == 0]


@dataclass(frozen=True)
class RecurrenceConstants:
    """The pair (c_k, d_k) scaling the left side of Popa's recurrence."""

    c: Fraction
    d: Fraction


def popa_d(k: int) -> Fraction:
    """d_k = (-1)^(k/2) (k-1)! / 2^(k+1), for even k >= 2."""
    if k < 2 or k % 2:
        raise DomainError(f"k must be even and >= 2, got {k}")
    sign = -1 if (k // 2) % 2 else 1
    return Fraction(sign * math.factorial(k - 1), 2 ** (k + 1))


def popa_c(k: int) -> Fraction:
    """c_k = k / (2(k/2+1)(k/2-1)) + (-1)^(k/2) (k/2)! (k/2-2)! / (2(k-1)!), even k >= 4."""
    if k < 4 or k % 2:
        raise DomainError(f"k must be even and >= 4, got {k}")
    h = k // 2
    sign = -1 if h % 2 else 1
    return Fraction(k, 2 * (h + 1) * (h - 1)) + Fraction(
        sign * math.factorial(h) * math.factorial(h - 2), 2 * math.factorial(k - 1)
    )


def constants(k: int) -> RecurrenceConstants:
    """Exact (c_k, d_k) for even k >= 4; the recurrence divides by c_k d_k."""
    c = popa_c(k)
    if c == 0:
        raise ConsistencyError(f"c_{k} vanished; the recurrence would divide by zero")
    return RecurrenceConstants(c=c, d=popa_d(k))


# ---------------------------------------------------------------------------
# table


class EisensteinTable:
    """Memoized map weight -> coefficient vector w(k), built bottom-up.

    Weights 4 and 6 are the generators themselves and are axioms; every higher
    even weight is filled by the convolution recurrence when ``extend`` is
    called.  Entries are immutable once present.  Reads are safe from multiple
    threads after the single-writer build phase.
    """

    def __init__(self) -> None:
        self._w: dict[int, WVector] = {4: {1: Fraction(1)}, 6: {0: Fraction(1)}}
        self._origin: dict[int, str] = {4: "closed-form", 6: "closed-form"}
        self._scaled: dict[int, tuple[dict[int, int], int]] = {}

    def __contains__(self, k: int) -> bool:
        return k in self._w

    def weights(self) -> list[int]:
        return sorted(self._w)

    def max_weight(self) -> int:
        return max(self._w)

    def w_vector(self, k: int) -> WVector:
        if k not in self._w:
            raise MissingWeightError(f"weight {k} not in table (extend first)")
        return dict(self._w[k])

    def origin(self, k: int) -> str:
        if k not in self._origin:
            raise MissingWeightError(f"weight {k} not in table")
        return self._origin[k]

    # -- scaled-integer view used by the recurrences -------------------------

    def _scaled_vector(self, k: int) -> tuple[dict[int, int], int]:
        cached = self._scaled.get(k)
        if cached is not None:
            return cached
        vec = self._w.get(k)
        if vec is None:
            raise MissingWeightError(f"weight {k} not in table (extend first)")
        den = 1
        for c in vec.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        scaled = ({a: int(c * den) for a, c in vec.items()}, den)
        self._scaled[k] = scaled
        return scaled

    def _store(self, k: int, vec: WVector, origin: str) -> None:
        self._w[k] = {a: vec[a] for a in sorted(vec)}
        self._origin[k] = origin

    # -- building -------------------------------------------------------------

    def extend(self, k_max: int, method: str = "rademacher") -> "EisensteinTable":
        """Fill all even weights up to k_max; returns self.

        The default method is the convolution recurrence.  At each weight
        k = 12 * 2^m (m >= 1) the symmetric and folded orderings of the
        convolution sum are both evaluated and compared exactly.
        """
        if method not in ("rademacher", "popa"):
            raise DomainError(f"unknown method {method!r}")
        for k in range(8, k_max + 1, 2):
            if k in self._w:
                continue
            if method == "rademacher":
                vec = rademacher_expand(k, self)
                if k % 12 == 0:
                    q = k // 12
                    if q >= 2 and q & (q - 1) == 0:
                        folded = rademacher_expand_folded(k, self)
                        if folded != vec:
                            raise ConsistencyError(
                                f"folded convolution disagrees at weight {k}"
                            )
            else:
                vec = popa_expand(k, self)
            self._store(k, vec, method)
        return self

    # -- conversions ------------------------------------------------------------

    def graded_form(self, k: int) -> GradedForm:
        """G_k as a polynomial over the generators: sum w_{a,k} r4^a r6^b E4^a E6^b.

        Coefficients absorb the ratios r_m = 2 zeta(m)/pi^m, so the q-expansion
        of the returned form equals r_k times the normalized series of E_k.
        """
        vec = self.w_vector(k)
        r4, r6 = zeta_ratio(4), zeta_ratio(6)
        return GradedForm(
            k, {(0, a, (k - 4 * a) // 6): w * r4**a * r6 ** ((k - 4 * a) // 6) for a, w in vec.items()}
        )

    def e_polynomial(self, k: int) -> GradedForm:
        """E_k in the E4/E6 basis (constant q-coefficient 1)."""
        return self.graded_form(k) * (Fraction(1) / zeta_ratio(k))

    def canonical_entry(self, k: int) -> str:
        """Stable text form of one entry: ``k; a,b:num/den; ...`` ascending in a."""
        vec = self.w_vector(k)
        parts = [str(k)]
        for a in sorted(vec):
            c = vec[a]
            parts.append(f"{a},{(k - 4 * a) // 6}:{c.numerator}/{c.denominator}")
        return "; ".join(parts)

    # -- persistence -------------------------------------------------------------

    def dump_csv(self, path: Union[str, Path]) -> None:
        """Write all entries as CSV rows (k, a, b, num/den), sorted."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "a", "b", "w"])
            for k in self.weights():
                vec = self._w[k]
                for a in sorted(vec):
                    c = vec[a]
                    writer.writerow([k, a, (k - 4 * a) // 6, f"{c.numerator}/{c.denominator}"])

    @classmethod
    def load_csv(cls, path: Union[str, Path]) -> "EisensteinTable":
        """Re-ingest a dump; validates index structure and the two base weights."""
        table = cls()
        loaded: dict[int, WVector] = {}
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["k", "a", "b", "w"]:
                raise ConsistencyError(f"unexpected table header {header!r}")
            for row in reader:
                k, a, b = int(row[0]), int(row[1]), int(row[2])
                if 4 * a + 6 * b != k:
                    raise ConsistencyError(f"bad index row {row!r}: 4a+6b != k")
                loaded.setdefault(k, {})[a] = Fraction(row[3])
        for k in sorted(loaded):
            if k in (4, 6):
                if loaded[k] != table._w[k]:
                    raise ConsistencyError(f"base weight {k} differs from its axiom")
                continue
            table._store(k, loaded[k], "ingested")
        return table


# ---------------------------------------------------------------------------
# the convolution recurrence


def _scaled_convolution(
    terms: Iterable[tuple[int, int, int]],
    get_scaled: Callable[[int], tuple[dict[int, int], int]],
) -> tuple[dict[int, int], int]:
    """Accumulate coeff * w(m1) x w(m2) over integer vectors.

    ``terms`` yields (coeff, m1, m2).  The accumulator is kept over a running
    least common denominator so no Fraction normalization happens inside the
    double loop.
    """
    acc: dict[int, int] = {}
    acc_den = 1
    for coeff, m1, m2 in terms:
        nums1, den1 = get_scaled(m1)
        nums2, den2 = get_scaled(m2)
        pair_den = den1 * den2
        g = math.gcd(acc_den, pair_den)
        lcm = acc_den // g * pair_den
        if lcm != acc_den:
            grow = lcm // acc_den
            if grow != 1:
                for key in acc:
                    acc[key] *= grow
            acc_den = lcm
        mult = (lcm // pair_den) * coeff
        for a1, v1 in nums1.items():
            for a2, v2 in nums2.items():
                key = a1 + a2
                acc[key] = acc.get(key, 0) + mult * v1 * v2
    return acc, acc_den


def _reduce_scaled(acc: dict[int, int], num_mult: int, den: int) -> WVector:
    return {a: Fraction(v * num_mult, den) for a, v in acc.items() if v}


def rademacher_expand(k: int, table: EisensteinTable) -> WVector:
    """w(k) from the convolution identity

        (k/2-3)(k-1)(k+1) G_k = 3 sum_{p=2}^{k/2-2} (2p-1)(k-2p-1) G_{2p} G_{k-2p}.

    Needs all even weights 4 .. k-4 in the table.  k = 6 is outside the domain
    (the left factor k/2-3 vanishes there).
    """
    if k == 6:
        raise DomainError("k = 6 makes the left factor k/2 - 3 vanish")
    if k < 8 or k % 2:
        raise DomainError(f"k must be even and >= 8, got {k}")
    acc, den = _scaled_convolution(
        ((3 * (2 * p - 1) * (k - 2 * p - 1), 2 * p, k - 2 * p) for p in range(2, k // 2 - 1)),
        table._scaled_vector,
    )
    return _reduce_scaled(acc, 1, den * (k // 2 - 3) * (k - 1) * (k + 1))


def rademacher_expand_folded(k: int, table: EisensteinTable) -> WVector:
    """The same sum with the terms p and k/2 - p paired, valid for k = 0 mod 4:

        ... = 3 ( 2 sum_{p=2}^{k/4-1} (2p-1)(k-2p-1) G_{2p} G_{k-2p} + (k/2-1)^2 G_{k/2}^2 ).

    Must agree exactly with the symmetric ordering; ``extend`` compares the two
    at every weight 12 * 2^m.
    """
    if k % 4 or k < 8:
        raise DomainError(f"folding needs k = 0 mod 4 and k >= 8, got {k}")
    terms = [(6 * (2 * p - 1) * (k - 2 * p - 1), 2 * p, k - 2 * p) for p in range(2, k // 4)]
    terms.append((3 * (k // 2 - 1) ** 2, k // 2, k // 2))
    acc, den = _scaled_convolution(terms, table._scaled_vector)
    return _reduce_scaled(acc, 1, den * (k // 2 - 3) * (k - 1) * (k + 1))


# ---------------------------------------------------------------------------
# Popa's recurrence


def _require_weights(table: EisensteinTable, needed: Iterable[int]) -> None:
    missing = sorted({m for m in needed if m not in table})
    if missing:
        raise MissingWeightError(f"table is missing prerequisite weights {missing}")


def popa_expand(k: int, table: EisensteinTable, route: str = "graded") -> WVector:
    """w(k) from Popa's recurrence

        c_k d_k G_k = sum_{j odd, 3 <= j <= k/2-2} (C(k/2,j) + C(k/2-2,j)) d_{j+1} d_{k-j-1} G_{j+1} G_{k-j-1}
                      + (k-2) d_2 d_{k-2} G_2 G_{k-2}
                      + (d_{k-2}/2) * (q d/dq) G_{k-2}
                      + (k/2) d_{k/2}^2 G_{k/2}^2        [term present only when k/2 is even]

    The weight-2 generator introduced by the G_2 term cancels exactly against
    the one produced by differentiating G_{k-2}; a nonzero residue raises
    ConsistencyError.  Two routes are implemented: ``graded`` runs in the
    quasimodular ring and performs the cancellation structurally;
    ``precancelled`` substitutes the combined closed form of the two middle
    terms and never materializes the weight-2 generator.  They must agree.
    """
    if k < 8 or k % 2:
        raise DomainError(f"k must be even and >= 8, got {k}")
    if route == "graded":
        return _popa_graded(k, table)
    if route == "precancelled":
        return _popa_precancelled(k, table)
    raise DomainError(f"unknown route {route!r}")


def _popa_common_terms(k: int) -> list[tuple[Fraction, int, int]]:
    # the product sum plus, for k = 0 mod 4, the square term; all in G-language
    out = []
    for j in range(3, k // 2 - 1, 2):
        coeff = (math.comb(k // 2, j) + math.comb(k // 2 - 2, j)) * popa_d(j + 1) * popa_d(k - j - 1)
        out.append((coeff, j + 1, k - j - 1))
    if k % 4 == 0:
        out.append((Fraction(k, 2) * popa_d(k // 2) ** 2, k // 2, k // 2))
    return out


def _popa_graded(k: int, table: EisensteinTable) -> WVector:
    _require_weights(table, range(4, k - 1, 2))
    r4, r6 = zeta_ratio(4), zeta_ratio(6)

    acc = GradedForm.zero(k)
    for coeff, m1, m2 in _popa_common_terms(k):
        acc = acc + coeff * (table.graded_form(m1) * table.graded_form(m2))

    # G_2 term: the stored representation of G_2 is r_2 E_2 = E_2 / 3
    g_km2 = table.graded_form(k - 2)
    dk2 = popa_d(k - 2)
    acc = acc + ((k - 2) * D2 * dk2 * Fraction(1, 3)) * (E2 * g_km2)
    # derivative term
    acc = acc + (dk2 / 2) * serre_derivative(g_km2)

    cd = popa_c(k) * popa_d(k)
    acc = acc * (Fraction(1) / cd)

    vec: WVector = {}
    for (e2, a, b), c in acc.terms().items():
        if e2:
            raise ConsistencyError(
                f"weight-2 generator failed to cancel at weight {k}: residue {c} on E2^{e2} E4^{a} E6^{b}"
            )
        vec[a] = c / (r4**a * r6**b)
    return vec


def _popa_precancelled(k: int, table: EisensteinTable) -> WVector:
    _require_weights(table, range(4, k - 1, 2))
    acc: dict[int, Fraction] = {}

    def add(a: int, v: Fraction) -> None:
        if v:
            acc[a] = acc.get(a, Fraction(0)) + v

    for coeff, m1, m2 in _popa_common_terms(k):
        w1, w2 = table._w[m1], table._w[m2]
        for a1, v1 in w1.items():
            for a2, v2 in w2.items():
                add(a1 + a2, coeff * v1 * v2)

    # combined closed form of the G_2 and derivative terms: after cancellation
    # they contribute -(d_{k-2}/2) * sum w_{a,k-2} ( (7a/2) G4^(a-1) G6^(b+1)
    #                                              + (15b/7) G4^(a+2) G6^(b-1) )
    half_dk2 = popa_d(k - 2) / 2
    for a, w in table._w[k - 2].items():
        b = (k - 2 - 4 * a) // 6
        scale = -half_dk2 * w
        if a:
            add(a - 1, scale * Fraction(7 * a, 2))
        if b:
            add(a + 2, scale * Fraction(15 * b, 7))

    cd = popa_c(k) * popa_d(k)
    return {a: v / cd for a, v in acc.items() if v}


# ---------------------------------------------------------------------------
# independent q-expansion and valuation summaries


def q_expansion_direct(k: int, n_terms: int) -> list[Fraction]:
    """The series 1 - (2k/B_k) sum_{n>=1} sigma_{k-1}(n) q^n, truncated."""
    if k < 4 or k % 2:
        raise DomainError(f"k must be even and >= 4, got {k}")
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    scale = Fraction(-2 * k) / bernoulli(k)
    out = [Fraction(1)]
    for n in range(1, n_terms):
        out.append(scale * divisor_power_sum(n, k - 1))
    return out


def min_valuation2(vec: Mapping[int, Fraction]) -> Valuation:
    """Minimum 2-adic valuation over a coefficient vector (nonempty)."""
    if not vec:
        raise DomainError("empty coefficient vector")
    best: Valuation = INFINITY
    for c in vec.values():
        v = valuation(c, 2)
        if v < best:
            best = v
    return best
