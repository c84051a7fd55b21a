"""Monic polynomials in X = j encoding the non-elliptic zeros of E_k.

Every even weight k >= 4 decomposes uniquely as k = 12m + 4*delta + 6*epsilon
with delta in {0, 1, 2} and epsilon in {0, 1}; then

    E_k = Delta^m E_4^delta E_6^epsilon phi_k(j),

where Delta = (E_4^3 - E_6^2)/1728 and j = E_4^3/Delta, and phi_k is the monic
degree-m polynomial whose roots are the j-invariants of the zeros of E_k away
from j = 0 and j = 1728.  Two routes compute phi_k: exact division in the
E4/E6 basis (works for every even k) and, for k = 0 mod 12, a closed-form
expression for each coefficient directly in terms of the expansion vector
w(k).  The routes must agree exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError, DomainError
from .exact import Valuation, valuation, zeta_ratio
from .eisenstein import EisensteinTable

# k mod 12 -> (delta, epsilon); the degree is m = (k - 4*delta - 6*epsilon)/12
_ELLIPTIC: dict[int, tuple[int, int]] = {
    0: (0, 0),
    2: (2, 1),
    4: (1, 0),
    6: (0, 1),
    8: (2, 0),
    10: (1, 1),
}


def elliptic_exponents(k: int) -> tuple[int, int, int]:
    """(m, delta, epsilon) with k = 12m + 4*delta + 6*epsilon, even k >= 4."""
    if k < 4 or k % 2:
        raise DomainError(f"k must be even and >= 4, got {k}")
    delta, epsilon = _ELLIPTIC[k % 12]
    m = (k - 4 * delta - 6 * epsilon) // 12
    return m, delta, epsilon


@dataclass(frozen=True)
class GekelerPolynomial:
    """Monic polynomial in X = j attached to weight k, plus elliptic exponents.

    ``coeffs`` is constant-term first and includes the leading 1.
    """

    k: int
    coeffs: tuple[Fraction, ...]
    delta: int
    epsilon: int

    def __post_init__(self) -> None:
        m = len(self.coeffs) - 1
        if self.coeffs[-1] != 1:
            raise ConsistencyError(f"phi_{self.k} is not monic: leading {self.coeffs[-1]}")
        if self.k != 12 * m + 4 * self.delta + 6 * self.epsilon:
            raise ConsistencyError(
                f"weight bookkeeping broken: k={self.k}, m={m}, delta={self.delta}, epsilon={self.epsilon}"
            )
        if self.delta not in (0, 1, 2) or self.epsilon not in (0, 1):
            raise ConsistencyError(f"elliptic exponents out of range: {self.delta}, {self.epsilon}")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self) -> str:
        m = self.degree
        if m == 0:
            return "1"
        pieces = []
        for r in range(m, -1, -1):
            c = self.coeffs[r]
            if not c:
                continue
            mono = "X" if r == 1 else f"X^{r}" if r else ""
            if r == m:
                pieces.append(mono)
            else:
                sign = " - " if c < 0 else " + "
                mag = abs(c)
                coeff_s = f"{mag}" if mag != 1 or not mono else ""
                sep = "*" if coeff_s and mono else ""
                pieces.append(f"{sign}{coeff_s}{sep}{mono}")
        return "".join(pieces)


def _from_table(k: int, table: EisensteinTable) -> dict[int, Fraction]:
    """E-basis coefficients of E_k: exponent a -> u_a with E_k = sum u_a E4^a E6^b."""
    vec = table.w_vector(k)
    r4, r6, rk = zeta_ratio(4), zeta_ratio(6), zeta_ratio(k)
    return {a: w * r4**a * r6 ** ((k - 4 * a) // 6) / rk for a, w in vec.items()}


def phi_by_division(k: int, table: EisensteinTable) -> GekelerPolynomial:
    """phi_k by exact division of E_k by Delta^m E_4^delta E_6^epsilon.

    After stripping the elliptic factors, every remaining monomial is a power
    of A = E_4^3 times a power of B = E_6^2 with total Delta-degree m; the
    substitution B = A - 1728*Delta rewrites the quotient as a polynomial in
    j = A/Delta.  Each structural step that could leave a remainder is checked
    and raises ConsistencyError if violated, as is monicity of the result.
    """
    m, delta, epsilon = elliptic_exponents(k)
    u = _from_table(k, table)

    # strip E4^delta E6^epsilon, then fold into p_alpha * A^alpha * B^(m-alpha)
    p: dict[int, Fraction] = {}
    for a, coeff in u.items():
        b = (k - 4 * a) // 6
        a2, b2 = a - delta, b - epsilon
        if a2 < 0 or b2 < 0:
            raise ConsistencyError(
                f"E_{k} is not divisible by E4^{delta} E6^{epsilon}: monomial ({a},{b})"
            )
        if a2 % 3 or b2 % 2:
            raise ConsistencyError(f"non-cube/non-square residue at weight {k}: ({a2},{b2})")
        alpha = a2 // 3
        if alpha + b2 // 2 != m:
            raise ConsistencyError(f"Delta-degree mismatch at weight {k}: ({a2},{b2}) vs m={m}")
        p[alpha] = p.get(alpha, Fraction(0)) + coeff

    coeffs = []
    for r in range(m + 1):
        sign = -1 if (m - r) % 2 else 1
        total = Fraction(0)
        for alpha in range(r + 1):
            pa = p.get(alpha)
            if pa:
                total += pa * math.comb(m - alpha, r - alpha)
        coeffs.append(total * sign * Fraction(1728) ** (m - r))
    if coeffs[-1] != 1:
        raise ConsistencyError(f"phi_{k} came out non-monic: {coeffs[-1]}")
    return GekelerPolynomial(k=k, coeffs=tuple(coeffs), delta=delta, epsilon=epsilon)


def phi_closed_form(k: int, table: EisensteinTable) -> GekelerPolynomial:
    """phi_k for k = 0 mod 12 by the closed coefficient formula

        t_{k,r} = (2 / r_k) (-1)^(k/12 - r)
                  sum_{a=0}^{r} w_{3a,k} 2^(2k/3 - 6r - 2a - 1)
                                / (3^(k/4 + 3r) 5^(a + k/6) 7^(k/6 - 2a))
                                * C(k/12 - a, k/12 - r)

    with r_k = 2 zeta(k)/pi^k.  Cross-checked against phi_by_division; any
    discrepancy is a hard failure in the callers that compare routes.
    """
    if k % 12:
        raise DomainError(f"closed form needs k = 0 mod 12, got {k}")
    if k < 12:
        raise DomainError(f"k must be >= 12, got {k}")
    m = k // 12
    vec = table.w_vector(k)
    two_over_rk = Fraction(2) / zeta_ratio(k)
    coeffs = []
    for r in range(m + 1):
        sign = -1 if (m - r) % 2 else 1
        total = Fraction(0)
        for a in range(r + 1):
            w = vec.get(3 * a)
            if not w:
                continue
            term = (
                w
                * Fraction(2) ** (2 * k // 3 - 6 * r - 2 * a - 1)
                / (Fraction(3) ** (k // 4 + 3 * r) * Fraction(5) ** (a + k // 6) * Fraction(7) ** (k // 6 - 2 * a))
            )
            total += term * math.comb(m - a, m - r)
        coeffs.append(two_over_rk * sign * total)
    if coeffs[-1] != 1:
        raise ConsistencyError(f"closed form for phi_{k} came out non-monic: {coeffs[-1]}")
    return GekelerPolynomial(k=k, coeffs=tuple(coeffs), delta=0, epsilon=0)


def valuation_profile(phi: GekelerPolynomial, p: int) -> tuple[Valuation, ...]:
    """(nu_p(t_0), ..., nu_p(t_{m-1})): valuations of the non-leading coefficients."""
    return tuple(valuation(c, p) for c in phi.coeffs[:-1])
