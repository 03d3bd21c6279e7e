"""
Integer polynomial toolkit for Weil polynomials.

Polynomials are passed around as little-endian integer coefficient tuples (the
layout of ``WeilPolynomial.h_coeffs``); ``as_poly`` converts them, or a
WeilPolynomial, or a sympy Poly, into a sympy Poly over ZZ in T.

Splitting statements are made relative to the order Z[pi], i.e. to h itself.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from sympy import Poly, divisors, integer_nthroot, nextprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add,
    gf_factor,
    gf_factor_sqf,
    gf_from_int_poly,
    gf_mul,
    gf_mul_ground,
    gf_pow,
    gf_sqf_p,
)

from .conf import setting
from .curvezeta import T, functional_equation_holds
from .errors import InconsistentLift, NotCMSymmetric, NotSquarefree

logger = logging.getLogger(__name__)


def as_poly(h) -> Poly:
    """Coerce a coefficient tuple (little-endian), WeilPolynomial or Poly to a Poly over ZZ."""
    if isinstance(h, Poly):
        return h
    coeffs = getattr(h, "h_coeffs", h)
    return Poly([int(c) for c in reversed(tuple(coeffs))], T, domain=ZZ)


def coefficients(poly: Poly) -> tuple[int, ...]:
    """Little-endian integer coefficients of a Poly."""
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def iter_primes(start: int = 2):
    """Primes >= start in increasing order."""
    p = start - 1
    while True:
        p = nextprime(p)
        yield p


# =============================================================================
# Factorisation patterns
# =============================================================================


@dataclass(frozen=True)
class FactorPattern:
    """Factorisation shape of h mod l as sorted (degree, multiplicity) pairs."""

    l: int
    factors: tuple[tuple[int, int], ...]
    squarefree: bool
    polys: tuple[tuple[tuple[int, ...], int], ...] = field(default=(), compare=False, repr=False)

    @property
    def degree(self) -> int:
        return sum(d * m for d, m in self.factors)

    @property
    def is_irreducible(self) -> bool:
        return self.factors == ((self.degree, 1),)

    def __str__(self):
        return "{" + ", ".join(f"({d},{m})" for d, m in self.factors) + "}"


def _reduce(poly: Poly, l: int) -> list[int]:
    return gf_from_int_poly([int(c) for c in poly.all_coeffs()], l)


def gamma_reciprocal(factor, gamma: int, l: int) -> tuple[int, ...]:
    """
    f*(T) = T^k f(gamma/T) / f(0) for a monic f of degree k over F_l (big-endian).

    Its roots are gamma/alpha for the roots alpha of f.
    """
    k = len(factor) - 1
    constant = int(factor[-1]) % l
    # coefficient of T^{k-j} in T^k f(gamma/T) is f_j gamma^j, with f_j = factor[k - j] the coefficient of T^j
    reciprocal = [int(factor[k - j]) * pow(gamma, j, l) % l for j in range(k + 1)]
    scale = pow(constant, -1, l)
    return tuple(c * scale % l for c in reciprocal)


def factor_mod_l(h, l: int) -> FactorPattern:
    """
    Factor a monic integer polynomial over F_l.

    Args:
        h: Monic integer polynomial
        l: Prime

    Returns:
        FactorPattern; the product of the factors is checked against h mod l
    """
    reduced = _reduce(as_poly(h), l)
    _, factors = gf_factor(reduced, l, ZZ)

    product = [1]
    for f, k in factors:
        product = gf_mul(product, gf_pow(f, k, l, ZZ), l, ZZ)
    if product != reduced:
        raise InconsistentLift(f"factors of h mod {l} do not multiply back to h")

    return FactorPattern(
        l=l,
        factors=tuple(sorted((len(f) - 1, k) for f, k in factors)),
        squarefree=all(k == 1 for _, k in factors),
        polys=tuple((tuple(f), k) for f, k in factors),
    )


# =============================================================================
# Irreducibility over Q
# =============================================================================


class IrreducibilityVerdict(NamedTuple):
    """Outcome of irreducibility_over_Q."""

    status: str  # "irreducible", "reducible" or "inconclusive"
    certificate_prime: int | None
    factors: tuple[tuple[tuple[int, ...], int], ...]  # witness factorisation (little-endian, multiplicity)
    primes_examined: int
    method: str

    @property
    def is_irreducible(self) -> bool:
        return self.status == "irreducible"

    @property
    def is_reducible(self) -> bool:
        return self.status == "reducible"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "certificate_prime": self.certificate_prime,
            "factors": [[list(f), k] for f, k in self.factors],
            "primes_examined": self.primes_examined,
            "method": self.method,
        }


def _reducible(poly: Poly, primes_examined: int, method: str) -> IrreducibilityVerdict:
    _, factors = poly.factor_list()
    witness = tuple((coefficients(f), k) for f, k in factors)
    return IrreducibilityVerdict("reducible", None, witness, primes_examined, method)


def rational_roots(poly: Poly) -> list[int]:
    """Distinct integer (hence all rational) roots of a monic integer polynomial."""
    coeffs = coefficients(as_poly(poly))
    roots = []
    if coeffs[0] == 0:
        # Root 0; the remaining roots are those of h / T^k
        roots.append(0)
        shift = next(k for k, c in enumerate(coeffs) if c)
        coeffs = coeffs[shift:]
    quotient = as_poly(coeffs)
    roots.extend(r for d in divisors(abs(coeffs[0])) for r in (d, -d) if quotient.eval(r) == 0)
    return roots


def irreducibility_over_Q(h, prime_budget: int | None = None, fallback: bool = True) -> IrreducibilityVerdict:
    """
    Decide irreducibility of a monic squarefree integer polynomial.

    Runs a rational-root screen, then looks for a prime l not dividing disc(h)
    with h irreducible mod l among the first ``prime_budget`` primes, then (for
    degree <= 8, when ``fallback`` is set) factors over Q by Zassenhaus lifting.

    Raises:
        NotSquarefree: gcd(h, h') is not constant
    """
    poly = as_poly(h)
    prime_budget = setting("WEYL_PRIME_BUDGET") if prime_budget is None else prime_budget
    degree = poly.degree()

    if poly.gcd(poly.diff()).degree() > 0:
        raise NotSquarefree(f"{poly.as_expr()} has a repeated factor over Q")

    if degree == 1:
        return IrreducibilityVerdict("irreducible", None, (), 0, "linear")

    if rational_roots(poly):
        return _reducible(poly, 0, "rational_root")

    disc = poly_discriminant(poly)
    primes = iter_primes()
    for examined in range(1, prime_budget + 1):
        l = next(primes)
        if disc % l == 0:
            continue
        if factor_mod_l(poly, l).is_irreducible:
            return IrreducibilityVerdict("irreducible", l, (), examined, "reduction")

    if fallback and degree <= 8:
        _, factors = poly.factor_list()
        if len(factors) == 1 and factors[0][1] == 1:
            return IrreducibilityVerdict("irreducible", None, (), prime_budget, "zassenhaus")
        return _reducible(poly, prime_budget, "zassenhaus")

    return IrreducibilityVerdict("inconclusive", None, (), prime_budget, "reduction")


# =============================================================================
# Discriminants and real subfields
# =============================================================================


def poly_discriminant(h) -> int:
    """disc(h) = (-1)^{d(d-1)/2} Res(h, h') for monic h; 1 for linear h."""
    poly = as_poly(h)
    if poly.degree() <= 1:
        return 1
    return int(poly.discriminant())


def weight_from_constant(h) -> int:
    """w with h(0) = w^g for a CM-symmetric h of degree 2g."""
    poly = as_poly(h)
    g = poly.degree() // 2
    constant = int(poly.eval(0))
    if constant <= 0:
        raise NotCMSymmetric(f"h(0) = {constant} is not a positive g-th power")
    w, exact = integer_nthroot(constant, g)
    if not exact:
        raise NotCMSymmetric(f"h(0) = {constant} is not a {g}-th power")
    return int(w)


def real_subfield_poly(h, w: int) -> tuple[int, ...]:
    """
    The monic h_real of degree g with h(T) = T^g h_real(T + w/T).

    Peels r_k T^{g-k} (T^2 + w)^k off h for k = g down to 0 and requires a zero
    remainder.

    Args:
        h: Monic integer polynomial of degree 2g
        w: Frobenius weight q^n

    Returns:
        Little-endian coefficients of h_real
    """
    poly = as_poly(h)
    degree = poly.degree()
    coeffs = coefficients(poly)
    if degree % 2 or not functional_equation_holds(coeffs, degree // 2, w):
        raise NotCMSymmetric(f"{poly.as_expr()} does not satisfy the functional equation with w = {w}")
    g = degree // 2

    quadratic = Poly(T**2 + w, T, domain=ZZ)
    remainder = poly
    real = [0] * (g + 1)
    for k in range(g, -1, -1):
        r_k = int(remainder.coeff_monomial(T ** (g + k)))
        real[k] = r_k
        if r_k:
            remainder = remainder - Poly(T ** (g - k), T, domain=ZZ) * quadratic**k * r_k
    if not remainder.is_zero:
        raise NotCMSymmetric(f"resubstitution left {remainder.as_expr()}")
    return tuple(real)


# =============================================================================
# Signed cycle types
# =============================================================================

REGULAR = "regular"
RAMIFIED = "ramified"
NONREGULAR = "nonregular"


@dataclass(frozen=True)
class SignedCycleType:
    """
    Conjugacy invariant of W_g: cycles of (length, sign) with sign +1 or -1,
    sorted by length with + before -. The Ramified and NonRegular values carry
    no cycles.
    """

    cycles: tuple[tuple[int, int], ...] = ()
    kind: str = REGULAR

    @classmethod
    def from_cycles(cls, cycles) -> "SignedCycleType":
        return cls(cycles=tuple(sorted(((int(k), int(s)) for k, s in cycles), key=lambda c: (c[0], -c[1]))))

    @classmethod
    def ramified(cls) -> "SignedCycleType":
        return cls(kind=RAMIFIED)

    @classmethod
    def nonregular(cls) -> "SignedCycleType":
        return cls(kind=NONREGULAR)

    @classmethod
    def parse(cls, text: str) -> "SignedCycleType":
        """Inverse of str(): "1+,2-", "Ramified" or "NonRegular"."""
        if text == "Ramified":
            return cls.ramified()
        if text == "NonRegular":
            return cls.nonregular()
        cycles = []
        for part in text.split(","):
            part = part.strip()
            if len(part) < 2 or part[-1] not in "+-" or not part[:-1].isdigit() or int(part[:-1]) < 1:
                raise ValueError(f"not a signed cycle: {part!r}")
            cycles.append((int(part[:-1]), 1 if part[-1] == "+" else -1))
        return cls.from_cycles(cycles)

    @property
    def is_regular(self) -> bool:
        return self.kind == REGULAR

    @property
    def is_ramified(self) -> bool:
        return self.kind == RAMIFIED

    @property
    def lengths(self) -> tuple[int, ...]:
        """Underlying S_g cycle type."""
        return tuple(sorted(k for k, _ in self.cycles))

    @property
    def size(self) -> int:
        return sum(self.lengths)

    @property
    def minus_count(self) -> int:
        return sum(1 for _, s in self.cycles if s < 0)

    @property
    def is_split_completely(self) -> bool:
        return self.is_regular and bool(self.cycles) and all(c == (1, 1) for c in self.cycles)

    def __str__(self):
        if self.kind == RAMIFIED:
            return "Ramified"
        if self.kind == NONREGULAR:
            return "NonRegular"
        return ",".join(f"{k}{'+' if s > 0 else '-'}" for k, s in self.cycles)


class CycleTypeClassifier:
    """
    Signed cycle types of one (h, h_real) pair at many primes.

    Discriminants and the integer polynomials are computed once, which is what
    census scans need.
    """

    def __init__(self, h, h_real=None, w: int | None = None):
        self.h = as_poly(h)
        self.g = self.h.degree() // 2
        self.w = weight_from_constant(self.h) if w is None else w
        if h_real is None:
            h_real = real_subfield_poly(self.h, self.w)
        self.h_real = as_poly(h_real)
        if self.h_real.degree() != self.g:
            raise InconsistentLift(f"deg h_real = {self.h_real.degree()} but g = {self.g}")

    @cached_property
    def disc_h(self) -> int:
        return poly_discriminant(self.h)

    @cached_property
    def disc_real(self) -> int:
        return poly_discriminant(self.h_real)

    @cached_property
    def ramified_modulus(self) -> int:
        return self.disc_h * self.disc_real

    def is_ramified(self, l: int) -> bool:
        return self.ramified_modulus % l == 0

    def _lift(self, factor: list[int], l: int) -> list[int]:
        """T^k r(T + w/T) mod l for a monic factor r of degree k (big-endian galoistools)."""
        k = len(factor) - 1
        quadratic = [1, 0, self.w % l]
        lifted: list[int] = []
        for j, c in enumerate(reversed(factor)):
            if c:
                # c * T^{k-j} (T^2 + w)^j
                term = gf_mul(gf_pow(quadratic, j, l, ZZ), [1] + [0] * (k - j), l, ZZ)
                lifted = gf_add(lifted, gf_mul_ground(term, c, l, ZZ), l, ZZ)
        return lifted

    def classify(self, l: int) -> SignedCycleType:
        if self.is_ramified(l):
            return SignedCycleType.ramified()

        h_mod = _reduce(self.h, l)
        real_mod = _reduce(self.h_real, l)
        if not gf_sqf_p(h_mod, l, ZZ):
            raise InconsistentLift(f"h is not squarefree mod {l} although {l} does not divide disc(h)")

        product = [1]
        cycles = []
        for r in gf_factor_sqf(real_mod, l, ZZ)[1]:
            k = len(r) - 1
            lifted = self._lift(r, l)
            degrees = sorted(len(f) - 1 for f in gf_factor_sqf(lifted, l, ZZ)[1])
            if degrees == [k, k]:
                cycles.append((k, 1))
            elif degrees == [2 * k]:
                cycles.append((k, -1))
            else:
                raise InconsistentLift(f"factor of degree {k} of h_real lifts to degrees {degrees} mod {l}")
            product = gf_mul(product, lifted, l, ZZ)

        if product != h_mod:
            raise InconsistentLift(f"lifted factors of h_real do not multiply to h mod {l}")
        return SignedCycleType.from_cycles(cycles)


def signed_cycle_type(h, h_real, l: int, w: int | None = None) -> SignedCycleType:
    """
    Signed cycle type of Frobenius at l.

    Args:
        h: Monic integer polynomial of degree 2g
        h_real: Its real subfield polynomial of degree g
        l: Prime
        w: Frobenius weight; defaults to the g-th root of h(0)

    Returns:
        Ramified when l divides disc(h) * disc(h_real), otherwise the cycles read
        off the factorisation of h_real mod l and the lift of each factor to h
    """
    return CycleTypeClassifier(h, h_real, w).classify(l)
