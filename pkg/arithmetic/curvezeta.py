"""
Hyperelliptic family y^2 = (x - t) * prod_{i=1}^{2g} (x - i) over finite fields.

Specialises the family at t in F_{q^n}, counts points over F_{q^{nm}} and
recovers the characteristic polynomial of Frobenius h(T) (monic, degree 2g) from
the counts with Newton's identities and the functional equation.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import mpmath
import numpy as np
from sympy import Poly, symbols

from .conf import setting
from .errors import GenusPrimeConflict, InternalError, NotSquarefree
from .ffield import (
    FieldDescriptor,
    FieldElement,
    build_field,
    character_table,
    element_table,
    embed_subfield,
    poly_values,
    row_indices,
    square_root_counts,
)

logger = logging.getLogger(__name__)

T = symbols("T")

# Relative tolerance of the numerical root-modulus check
ROOT_MODULUS_TOLERANCE = 1e-9


# =============================================================================
# Curves
# =============================================================================


@dataclass(frozen=True)
class Curve:
    """Smooth model y^2 = f(x) with f = (x - t) prod (x - i), deg f = 2g + 1."""

    g: int
    base: FieldDescriptor
    t: FieldElement
    f_coeffs: tuple[FieldElement, ...]  # little-endian, monic

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def n(self) -> int:
        return self.base.m


def specialize_curve(g: int, q: int, n: int, t, budget: int | None = None) -> Curve:
    """
    Specialise the family at t.

    Args:
        g: Genus >= 1
        q: Odd prime with q > 2g
        n: Degree of the base field F_{q^n}
        t: FieldElement of F_{q^n}, an index, or a little-endian coefficient list
        budget: Enumeration budget for the base field

    Returns:
        Curve with expanded f coefficients
    """
    base = build_field(q, n, budget=budget)
    if q <= 2 * g:
        raise GenusPrimeConflict(f"q = {q} must exceed 2g = {2 * g} for prod (x - i) to be squarefree")

    if isinstance(t, int):
        if not 0 <= t < base.size:
            raise ValueError(f"t index {t} is outside F_{{{q}^{n}}} (size {base.size})")
        t = base.from_index(t)
    else:
        t = base.element(t)

    for i in range(1, 2 * g + 1):
        if t == base.element(i):
            raise NotSquarefree(f"t = {t} coincides with the fixed root {i}")

    # Expand (x - t) * prod (x - i) one linear factor at a time
    coeffs = [-t, base.one]
    for i in range(1, 2 * g + 1):
        shifted = [base.zero] + coeffs
        scaled = [c * (-i) for c in coeffs] + [base.zero]
        coeffs = [a + b for a, b in zip(shifted, scaled, strict=True)]

    return Curve(g=g, base=base, t=t, f_coeffs=tuple(coeffs))


@lru_cache(maxsize=32)
def _extension_data(curve: Curve, m: int, budget: int | None):
    big = build_field(curve.q, curve.n * m, budget=budget)
    embedding = embed_subfield(big, curve.base)
    coeffs = [embedding(c) for c in curve.f_coeffs]
    return big, coeffs


def _f_value_indices(curve: Curve, m: int, start: int, stop: int, budget: int | None) -> tuple[FieldDescriptor, np.ndarray]:
    big, coeffs = _extension_data(curve, m, budget)
    points = element_table(big)[start:stop]
    return big, row_indices(big, poly_values(big, coeffs, points))


def character_sum(curve: Curve, m: int, start: int = 0, stop: int | None = None, budget: int | None = None) -> int:
    """Sum of chi(f(x)) over the elements of F_{q^{nm}} with index in [start, stop)."""
    big = build_field(curve.q, curve.n * m, budget=budget)
    stop = big.size if stop is None else stop
    _, values = _f_value_indices(curve, m, start, stop, budget)
    return int(character_table(big)[values].astype(np.int64).sum())


def count_points(curve: Curve, m: int = 1, budget: int | None = None) -> int:
    """
    #C(F_{q^{nm}}) for the smooth projective model.

    One point at infinity (deg f is odd) plus 1 + chi(f(x)) points over each x.
    The character sum is reduced over partitions of the x-range.
    """
    big = build_field(curve.q, curve.n * m, budget=budget)
    chunk = setting("WEYL_COUNT_CHUNK")
    total = 0
    for start in range(0, big.size, chunk):
        total += character_sum(curve, m, start, min(start + chunk, big.size), budget=budget)
    return 1 + big.size + total


def count_points_direct(curve: Curve, m: int = 1, budget: int | None = None) -> int:
    """Independent count: for every x, the number of y with y^2 = f(x), found by squaring every y."""
    big, values = _f_value_indices(curve, m, 0, build_field(curve.q, curve.n * m, budget=budget).size, budget)
    return 1 + int(square_root_counts(big)[values].sum())


# =============================================================================
# Weil polynomials
# =============================================================================


@dataclass(frozen=True)
class WeilPolynomial:
    """Monic characteristic polynomial of Frobenius, h_coeffs little-endian of length 2g + 1."""

    h_coeffs: tuple[int, ...]
    g: int
    q: int
    n: int

    @property
    def w(self) -> int:
        return self.q**self.n

    @property
    def reciprocal(self) -> tuple[int, ...]:
        """Coefficients of P(T) = T^{2g} h(1/T), the zeta numerator."""
        return tuple(reversed(self.h_coeffs))

    @property
    def poly(self) -> Poly:
        return Poly(list(reversed(self.h_coeffs)), T)

    def power_sums(self, count: int) -> list[int]:
        return power_sums(self.h_coeffs, count)

    def predicted_count(self, m: int) -> int:
        """#C(F_{q^{nm}}) implied by h."""
        return self.w**m + 1 - self.power_sums(m)[m - 1]

    def to_dict(self) -> dict:
        return {"h": list(self.h_coeffs), "g": self.g, "q": self.q, "n": self.n}


def power_sums(h_coeffs, count: int) -> list[int]:
    """
    Power sums s_1..s_count of the roots of a monic polynomial (Newton's identities).

    Args:
        h_coeffs: Little-endian monic integer coefficients
        count: Number of power sums

    Returns:
        [s_1, ..., s_count]
    """
    d = len(h_coeffs) - 1
    # e_k from h = sum_k (-1)^k e_k T^{d-k}
    e = [(-1) ** k * h_coeffs[d - k] for k in range(d + 1)]
    sums: list[int] = []
    for k in range(1, count + 1):
        # s_k = sum_{i<k} (-1)^{i-1} e_i s_{k-i} + (-1)^{k-1} k e_k, with e_i = 0 for i > d
        value = (-1) ** (k - 1) * k * e[k] if k <= d else 0
        for i in range(1, min(k, d + 1)):
            value += (-1) ** (i - 1) * e[i] * sums[k - i - 1]
        sums.append(value)
    return sums


def weil_from_power_sums(sums: list[int], g: int, w: int) -> tuple[int, ...]:
    """
    Rebuild h from s_1..s_g: Newton's identities give e_1..e_g and the
    functional equation e_{2g-k} = w^{g-k} e_k gives the rest.
    """
    e = [1]
    for k in range(1, g + 1):
        total = sum((-1) ** (i - 1) * e[k - i] * sums[i - 1] for i in range(1, k + 1))
        if total % k:
            raise InternalError(f"Newton identity for e_{k} is not integral")
        e.append(total // k)
    for k in range(g + 1, 2 * g + 1):
        e.append(w ** (k - g) * e[2 * g - k])
    # h = sum_k (-1)^k e_k T^{2g-k}
    coeffs = [0] * (2 * g + 1)
    for k in range(2 * g + 1):
        coeffs[2 * g - k] = (-1) ** k * e[k]
    return tuple(coeffs)


def zeta_numerator(curve: Curve, budget: int | None = None) -> WeilPolynomial:
    """Characteristic polynomial of Frobenius from the counts over F_{q^{n}}, ..., F_{q^{ng}}."""
    w = curve.q**curve.n
    sums = [w**m + 1 - count_points(curve, m, budget=budget) for m in range(1, curve.g + 1)]
    h = weil_from_power_sums(sums, curve.g, w)
    logger.debug(f"zeta numerator g={curve.g} q={curve.q} n={curve.n} t={curve.t}: h={h}")
    return WeilPolynomial(h_coeffs=h, g=curve.g, q=curve.q, n=curve.n)


# =============================================================================
# Validation
# =============================================================================


@dataclass(frozen=True)
class WeilValidation:
    """Pass/fail per check, plus the worst relative deviation of a root modulus from w^{1/2}."""

    functional_equation: bool
    root_moduli: bool
    coefficient_bounds: bool
    max_relative_deviation: float
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "functional_equation": self.functional_equation,
            "root_moduli": self.root_moduli,
            "coefficient_bounds": self.coefficient_bounds,
            "max_relative_deviation": self.max_relative_deviation,
            "passed": self.passed,
            "failures": list(self.failures),
        }


def functional_equation_holds(h_coeffs, g: int, w: int) -> bool:
    return all(h_coeffs[j] == w ** (g - j) * h_coeffs[2 * g - j] for j in range(g + 1))


def validate_weil(weil: WeilPolynomial) -> WeilValidation:
    """
    Check a Weil polynomial: functional equation (exact), root moduli w^{1/2}
    (numerical, on the squarefree part) and |c_{2g-i}| <= C(2g, i) w^{i/2} (exact).
    """
    g, w, h = weil.g, weil.w, weil.h_coeffs
    failures = []

    functional = functional_equation_holds(h, g, w)
    if not functional:
        failures.append("functional_equation")

    # |c|^2 <= C^2 w^i avoids irrational square roots
    bounds = all(h[2 * g - i] ** 2 <= comb(2 * g, i) ** 2 * w**i for i in range(1, 2 * g + 1))
    if not bounds:
        failures.append("coefficient_bounds")

    # Repeated roots would cost half the working precision, so use the squarefree part
    squarefree = weil.poly.sqf_part()
    with mpmath.workdps(50):
        roots = mpmath.polyroots([int(c) for c in squarefree.all_coeffs()], maxsteps=200, extraprec=100)
        target = mpmath.sqrt(w)
        deviation = max((abs(abs(r) - target) / target for r in roots), default=mpmath.mpf(0))
    deviation = float(deviation)
    moduli = deviation <= ROOT_MODULUS_TOLERANCE
    if not moduli:
        failures.append("root_moduli")

    return WeilValidation(
        functional_equation=functional,
        root_moduli=moduli,
        coefficient_bounds=bounds,
        max_relative_deviation=deviation,
        failures=tuple(failures),
    )
