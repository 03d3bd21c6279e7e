"""
Weyl CM certification.

A Weyl CM field is a CM field of degree 2g whose normal closure has Galois group
W_g = (Z/2)^g x| S_g. Certification is evidence based and one-sided: Certified
is a proof, Inconclusive is not a refutation. For g = 2 an exact quartic Galois
oracle settles the question independently.
"""

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

from sympy import Poly, isprime
from sympy.ntheory.primetest import is_square
from sympy.polys.domains import ZZ

from .conf import setting
from .curvezeta import T
from .errors import NotCMSymmetric, NotIrreducible, NotQuartic, NotSquarefree
from .weilpoly import (
    CycleTypeClassifier,
    IrreducibilityVerdict,
    SignedCycleType,
    as_poly,
    coefficients,
    irreducibility_over_Q,
    iter_primes,
    poly_discriminant,
    rational_roots,
    real_subfield_poly,
)

logger = logging.getLogger(__name__)

CERTIFIED = "Certified"
REFUTED = "Refuted"
INCONCLUSIVE = "Inconclusive"


# =============================================================================
# CM check
# =============================================================================


class CMReport(NamedTuple):
    is_cm: bool
    no_real_roots: bool
    real_roots_of_h: int
    real_roots_of_h_real: int | None
    h_real: tuple[int, ...] | None
    conditional: bool  # irreducibility of h was not known
    witness: dict | None

    def to_dict(self) -> dict:
        return {
            "is_cm": self.is_cm,
            "no_real_roots": self.no_real_roots,
            "real_roots_of_h": self.real_roots_of_h,
            "real_roots_of_h_real": self.real_roots_of_h_real,
            "h_real": list(self.h_real) if self.h_real is not None else None,
            "conditional": self.conditional,
            "witness": self.witness,
        }


def _real_root_witness(poly: Poly) -> dict:
    (low, high), _ = poly.intervals()[0]
    if low != high:
        low, high = poly.refine_root(low, high, eps=1e-15)
    root = float((low + high) / 2)
    return {"real_root": root, "interval": [str(low), str(high)]}


def cm_check(h, w: int, irreducible: bool | None = None) -> CMReport:
    """
    Check that Q(pi) is a CM field.

    (a) h has no real roots: gcd(h, T^2 - w) is trivial and Sturm counting finds
    no real root. (b) h_real has g real roots. (b) is skipped when (a) fails.

    Args:
        h: Monic integer polynomial of degree 2g
        w: Frobenius weight
        irreducible: Known irreducibility of h; None flags the report as conditional

    Raises:
        NotCMSymmetric: h does not satisfy the functional equation (from real_subfield_poly)
    """
    poly = as_poly(h)
    g = poly.degree() // 2

    shares_sqrt_w = poly.gcd(Poly(T**2 - w, T, domain=ZZ)).degree() > 0
    real_roots = int(poly.count_roots())
    no_real_roots = not shares_sqrt_w and real_roots == 0
    conditional = irreducible is None

    if not no_real_roots:
        return CMReport(False, False, real_roots, None, None, conditional, _real_root_witness(poly))

    h_real = real_subfield_poly(poly, w)
    real_count = int(as_poly(h_real).count_roots())
    is_cm = real_count == g
    witness = None if is_cm else {"h_real_real_roots": real_count, "expected": g}
    return CMReport(is_cm, True, 0, real_count, h_real, conditional, witness)


# =============================================================================
# Quartic oracle
# =============================================================================


def _is_square_in(value: int, disc: int) -> bool:
    """Whether a rational integer is a square in Q(sqrt(disc))."""
    if value == 0:
        return True
    return (value > 0 and is_square(value)) or (value * disc > 0 and is_square(value * disc))


def quartic_galois_oracle(h) -> str:
    """
    Galois group of an irreducible monic quartic: S4, A4, D4, C4 or V4.

    Uses the resolvent cubic y^3 - b y^2 + (ac - 4d) y - (a^2 d - 4bd + c^2) of
    T^4 + aT^3 + bT^2 + cT + d. With exactly one rational resolvent root theta,
    the group is C4 when both T^2 - theta T + d and T^2 + aT + (b - theta) split
    over Q(sqrt(disc)), and D4 otherwise.
    """
    poly = as_poly(h)
    if poly.degree() != 4:
        raise NotQuartic(f"degree {poly.degree()} polynomial given")
    if not poly.is_monic:
        raise NotQuartic("quartic must be monic")
    _, factors = poly.factor_list()
    if len(factors) != 1 or factors[0][1] != 1:
        raise NotIrreducible(f"{poly.as_expr()} is reducible over Q")

    d, c, b, a, _ = coefficients(poly)
    resolvent = Poly([1, -b, a * c - 4 * d, -(a * a * d - 4 * b * d + c * c)], T, domain=ZZ)
    roots = sorted(set(rational_roots(resolvent)))
    disc = poly_discriminant(poly)

    if len(roots) == 3:
        return "V4"
    if not roots:
        return "A4" if disc > 0 and is_square(disc) else "S4"
    if len(roots) != 1:
        raise NotIrreducible("resolvent cubic of an irreducible quartic has a repeated root")

    theta = roots[0]
    if _is_square_in(theta * theta - 4 * d, disc) and _is_square_in(a * a - 4 * (b - theta), disc):
        return "C4"
    return "D4"


# =============================================================================
# Certification
# =============================================================================


@dataclass(frozen=True)
class WeylCertificate:
    status: str
    evidence: tuple[tuple[int, SignedCycleType], ...]
    criteria_met: dict = field(default_factory=dict)
    refutation_reason: str | None = None
    witness: dict | None = None
    primes_examined: int = 0
    oracle_label: str | None = None

    @property
    def is_certified(self) -> bool:
        return self.status == CERTIFIED

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "evidence": [[l, str(t)] for l, t in self.evidence],
            "criteria_met": dict(self.criteria_met),
            "refutation_reason": self.refutation_reason,
            "witness": self.witness,
            "primes_examined": self.primes_examined,
            "oracle_label": self.oracle_label,
        }


def is_transposition_type(lengths: tuple[int, ...]) -> bool:
    """Some power of the element is a transposition: exactly one 2-cycle, all other cycles odd."""
    return lengths.count(2) == 1 and all(k % 2 for k in lengths if k != 2)


def has_long_prime_cycle(lengths: tuple[int, ...], g: int) -> bool:
    """Some power is a p-cycle with p prime and p > g/2."""
    return any(isprime(k) and 2 * k > g and lengths.count(k) == 1 for k in lengths)


def is_kernel_witness(cycle_type: SignedCycleType, g: int) -> bool:
    """Trivial S_g part and sign weight w with w odd and 0 < w < g, or w = 1."""
    if not cycle_type.is_regular or any(k != 1 for k in cycle_type.lengths):
        return False
    weight = cycle_type.minus_count
    return weight == 1 or (weight % 2 == 1 and 0 < weight < g)


def _refuted(reason: str, witness: dict, criteria: dict, evidence=(), examined: int = 0, label=None) -> WeylCertificate:
    logger.info(f"Weyl certification refuted: {reason}")
    return WeylCertificate(
        status=REFUTED,
        evidence=tuple(evidence),
        criteria_met=criteria,
        refutation_reason=reason,
        witness=witness,
        primes_examined=examined,
        oracle_label=label,
    )


def certify_weyl(
    h,
    q: int,
    n: int,
    prime_budget: int | None = None,
    use_oracle: bool = True,
    w: int | None = None,
) -> WeylCertificate:
    """
    Certify that Q(pi) is a Weyl CM field.

    Pipeline: irreducibility over Q, CM check, full S_g projection, full kernel
    (Z/2)^g from signed cycle types at unramified primes. For g = 2 the quartic
    oracle refutes any field whose group is not D4.

    Args:
        h: Monic integer polynomial of degree 2g
        q: Prime of the curve's base field
        n: Extension degree
        prime_budget: Primes examined for irreducibility and for evidence
        use_oracle: Consult the quartic oracle when g = 2
        w: Frobenius weight, defaults to q^n

    Returns:
        WeylCertificate
    """
    poly = as_poly(h)
    g = poly.degree() // 2
    w = q**n if w is None else w
    prime_budget = setting("WEYL_PRIME_BUDGET") if prime_budget is None else prime_budget
    criteria = {"irreducible": False, "cm": False, "sg_projection_full": False, "kernel_full": False}

    # (1) Irreducibility
    try:
        verdict = irreducibility_over_Q(poly, prime_budget)
    except NotSquarefree as e:
        return _refuted("NotSquarefree", {"message": str(e)}, criteria)
    if verdict.is_reducible:
        return _refuted("Reducible", {"factors": [[list(f), k] for f, k in verdict.factors]}, criteria)
    criteria["irreducible"] = verdict.is_irreducible

    # (2) CM
    try:
        cm = cm_check(poly, w, irreducible=verdict.is_irreducible or None)
    except NotCMSymmetric as e:
        return _refuted("NotCMSymmetric", {"message": str(e)}, criteria)
    if not cm.is_cm:
        return _refuted("NotCM", cm.witness, criteria)
    criteria["cm"] = True

    # (3) S_g projection, structural part
    real_verdict: IrreducibilityVerdict = irreducibility_over_Q(cm.h_real, prime_budget)
    if real_verdict.is_reducible:
        # A reducible h_real means Q(pi) is not primitive over its real subfield
        sg_structural = False
    elif g == 1:
        sg_structural = True
    elif g == 2:
        sg_structural = real_verdict.is_irreducible
    elif g == 3:
        real_disc = poly_discriminant(cm.h_real)
        sg_structural = real_verdict.is_irreducible and not (real_disc > 0 and is_square(real_disc))
    else:
        sg_structural = real_verdict.is_irreducible

    # (3)-(4) evidence at unramified primes
    classifier = CycleTypeClassifier(poly, cm.h_real, w)
    evidence = []
    transposition = long_cycle = g <= 3
    kernel = False
    examined = 0
    primes = iter_primes()
    while examined < prime_budget:
        if sg_structural and transposition and long_cycle and kernel:
            break
        l = next(primes)
        examined += 1
        if classifier.is_ramified(l):
            continue
        cycle_type = classifier.classify(l)
        evidence.append((l, cycle_type))
        if g >= 4:
            transposition = transposition or is_transposition_type(cycle_type.lengths)
            long_cycle = long_cycle or has_long_prime_cycle(cycle_type.lengths, g)
        kernel = kernel or is_kernel_witness(cycle_type, g)

    criteria["sg_projection_full"] = sg_structural and transposition and long_cycle
    criteria["kernel_full"] = kernel
    status = CERTIFIED if all(criteria.values()) else INCONCLUSIVE

    label = None
    if g == 2 and use_oracle and criteria["irreducible"]:
        label = quartic_galois_oracle(poly)
        if label != "D4":
            return _refuted("OracleGroup", {"group": label}, criteria, evidence, examined, label)

    logger.debug(f"Weyl certification of {coefficients(poly)}: {status} after {examined} primes")
    return WeylCertificate(
        status=status,
        evidence=tuple(evidence),
        criteria_met=criteria,
        primes_examined=examined,
        oracle_label=label,
    )
