"""
Family scans and sequence construction.

Scans y^2 = (x - t) prod (x - i) over every t in F_{q^n}, keeps the members
whose Frobenius satisfies prescribed local conditions, certifies and censuses
them, and selects one field per extension degree n the way the sequence
construction does: ramification forced at a product of small primes, splitting
tested at auxiliary primes in a window, best split-prime count wins.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from sympy import isprime, primerange

from arithmetic.census import (
    CensusReport,
    DiscWindowVerdict,
    Lemma31Verdict,
    disc_window,
    lemma31_condition1,
    split_census,
    split_count_below_lemma_bound,
)
from arithmetic.curvezeta import WeilPolynomial, specialize_curve, validate_weil, zeta_numerator
from arithmetic.errors import (
    ConfigError,
    ConflictingConstraints,
    DegenerateD,
    EmptyWindow,
    InsufficientCensus,
    NotPrime,
    NotSquarefree,
)
from arithmetic.ffield import build_field
from arithmetic.weilpoly import (
    CycleTypeClassifier,
    SignedCycleType,
    factor_mod_l,
    gamma_reciprocal,
    poly_discriminant,
    real_subfield_poly,
    signed_cycle_type,
)
from arithmetic.weylcert import WeylCertificate, certify_weyl
from config.timing import timed

from .sympstat import FAMILY, TypeDistribution, coset_type_distribution, sp_order, tv_distance

logger = logging.getLogger(__name__)

SPLIT_COMPLETELY = "split_completely"
REPEATED_ROOT = "repeated_root"
INERT_PAIR = "inert_pair"
TYPE_EQUALS = "type_equals"
CONDITION_KINDS = (SPLIT_COMPLETELY, REPEATED_ROOT, INERT_PAIR, TYPE_EQUALS)

# Census bound used when 2 (log D)^5 would be larger
DEFAULT_CENSUS_CAP = 100_000


def json_int(value: int) -> int | str:
    """Integers that do not fit in 64 bits serialize as decimal strings."""
    return value if -(2**63) <= value < 2**63 else str(value)


# =============================================================================
# Local conditions
# =============================================================================


@dataclass(frozen=True)
class LocalCondition:
    """A prescription for Frobenius at one prime l."""

    prime: int
    kind: str
    cycle_type: SignedCycleType | None = None

    def __post_init__(self):
        if self.kind not in CONDITION_KINDS:
            raise ConfigError(f"unknown condition kind: {self.kind}")
        if self.kind == TYPE_EQUALS and self.cycle_type is None:
            raise ConfigError("type_equals needs a cycle type")

    @classmethod
    def parse(cls, text: str) -> "LocalCondition":
        """"kind@l" or "type_equals@l:1+,1-"."""
        kind, _, rest = text.partition("@")
        prime, _, type_text = rest.partition(":")
        try:
            cycle_type = SignedCycleType.parse(type_text) if type_text else None
            prime = int(prime)
        except ValueError as e:
            raise ConfigError(f"malformed condition {text!r}: {e}") from e
        return cls(prime=prime, kind=kind.strip(), cycle_type=cycle_type)

    def holds(self, weil: WeilPolynomial) -> bool:
        """Check the condition against h alone."""
        l = self.prime
        if self.kind == REPEATED_ROOT:
            return not factor_mod_l(weil.h_coeffs, l).squarefree
        if self.kind == SPLIT_COMPLETELY:
            return factor_mod_l(weil.h_coeffs, l).factors == ((1, 1),) * (2 * weil.g)
        if self.kind == INERT_PAIR:
            pattern = factor_mod_l(weil.h_coeffs, l)
            gamma = weil.w % l
            return gamma != 0 and any(
                len(f) == 3 and k == 1 and gamma_reciprocal(f, gamma, l) == tuple(f) for f, k in pattern.polys
            )
        h_real = real_subfield_poly(weil.h_coeffs, weil.w)
        return signed_cycle_type(weil.h_coeffs, h_real, l, weil.w) == self.cycle_type

    def __str__(self):
        if self.kind == TYPE_EQUALS:
            return f"{self.kind}@{self.prime}:{self.cycle_type}"
        return f"{self.kind}@{self.prime}"


def validate_conditions(conditions, q: int) -> tuple[LocalCondition, ...]:
    """One condition per prime, every prime different from q."""
    seen = set()
    for condition in conditions:
        if not isprime(condition.prime):
            raise NotPrime(f"condition prime {condition.prime} is not prime")
        if condition.prime == q:
            raise ConflictingConstraints(f"condition at l = q = {q}")
        if condition.prime in seen:
            raise ConflictingConstraints(f"two conditions at l = {condition.prime}")
        seen.add(condition.prime)
    return tuple(conditions)


# =============================================================================
# Candidate records
# =============================================================================


@dataclass
class CandidateRecord:
    t: str
    t_index: int
    weil: WeilPolynomial
    D: int
    conditions_met: tuple[LocalCondition, ...] = ()
    multiplicity: int = 1
    certificate: WeylCertificate | None = None
    census: CensusReport | None = None
    weil_valid: bool = True

    @property
    def h(self) -> tuple[int, ...]:
        return self.weil.h_coeffs

    def recheck_conditions(self) -> bool:
        return all(c.holds(self.weil) for c in self.conditions_met)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "t_index": self.t_index,
            "g": self.weil.g,
            "q": self.weil.q,
            "n": self.weil.n,
            "h": [json_int(c) for c in self.h],
            "D": str(self.D),
            "multiplicity": self.multiplicity,
            "weil_valid": self.weil_valid,
            "conditions_met": [str(c) for c in self.conditions_met],
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "census": self.census.summary() if self.census else None,
        }


@lru_cache(maxsize=65536)
def family_member(g: int, q: int, n: int, t_index: int, budget: int | None = None) -> WeilPolynomial | None:
    """Weil polynomial of the member at t, or None when f is not squarefree."""
    try:
        curve = specialize_curve(g, q, n, t_index, budget=budget)
    except NotSquarefree:
        return None
    return zeta_numerator(curve, budget=budget)


def scan_family(
    q: int,
    n: int,
    g: int,
    constraints=(),
    certify: bool = False,
    census_bound: int | None = None,
    prime_budget: int | None = None,
    budget: int | None = None,
    stride: int = 1,
) -> list[CandidateRecord]:
    """
    Scan every valid t in F_{q^n} and keep the members satisfying all constraints.

    Args:
        q: Odd prime > 2g
        n: Extension degree
        g: Genus
        constraints: LocalCondition instances, at most one per prime
        certify: Attach a WeylCertificate to every kept record
        census_bound: Attach a CensusReport up to this bound
        prime_budget: Primes examined by certification
        budget: Enumeration budget for the point counts
        stride: Scan only t indices divisible by stride (deterministic subsample)

    Returns:
        Records sorted by t index, each with the multiplicity of its Weil
        polynomial among all scanned t
    """
    constraints = validate_conditions(constraints, q)
    base = build_field(q, n, budget=budget)

    with timed("scan_family", q=q, n=n, g=g) as fields:
        members = []
        for t_index in range(0, base.size, stride):
            weil = family_member(g, q, n, t_index, budget)
            if weil is not None:
                members.append((t_index, weil))
        multiplicities = Counter(weil.h_coeffs for _, weil in members)

        records = []
        for t_index, weil in members:
            if not all(c.holds(weil) for c in constraints):
                continue
            record = CandidateRecord(
                t=base.from_index(t_index).serialize(),
                t_index=t_index,
                weil=weil,
                D=abs(poly_discriminant(weil.h_coeffs)),
                conditions_met=constraints,
                multiplicity=multiplicities[weil.h_coeffs],
                weil_valid=validate_weil(weil).passed,
            )
            if certify:
                record.certificate = certify_weyl(weil.h_coeffs, q, n, prime_budget)
            if census_bound is not None:
                record.census = split_census(weil.h_coeffs, None, census_bound, w=weil.w)
            records.append(record)
        fields["members"] = len(members)
        fields["kept"] = len(records)

    return records


def family_type_distribution(q: int, n: int, g: int, l: int, budget: int | None = None) -> TypeDistribution:
    """Signed cycle types at l over all valid t, each t weighted equally; Ramified is its own bin."""
    tally: Counter = Counter()
    for record in scan_family(q, n, g, budget=budget):
        tally[CycleTypeClassifier(record.h, None, record.weil.w).classify(l)] += 1
    return TypeDistribution.from_counts(tally, FAMILY, exact=True)


# =============================================================================
# Equidistribution
# =============================================================================


class EquidistributionRow(NamedTuple):
    n: int
    gamma: int
    family: TypeDistribution
    group: TypeDistribution
    tv: Fraction | float
    tv_regular: Fraction | float
    family_split_mass: Fraction
    error_constant: float

    def to_dict(self) -> dict:
        def number(value):
            return str(value) if isinstance(value, Fraction) else value

        return {
            "n": self.n,
            "gamma": self.gamma,
            "tv": number(self.tv),
            "tv_float": float(self.tv),
            "tv_regular": number(self.tv_regular),
            "tv_regular_float": float(self.tv_regular),
            "family_split_mass": str(self.family_split_mass),
            "error_constant": self.error_constant,
            "family": self.family.to_dict(),
            "group": self.group.to_dict(),
        }


def equidistribution_table(
    q: int,
    g: int,
    l: int,
    n_list,
    mode: str = "exact",
    samples: int | None = None,
    seed: int = 0,
    budget: int | None = None,
) -> list[EquidistributionRow]:
    """
    Family type distribution at l against the group coset with multiplier q^n mod l, per n.

    The family's Ramified bin is compared with the group's NonRegular bin; tv_regular
    compares both after conditioning on regular types. error_constant is
    TV * q^{n/2} / |Sp_2g(F_l)|.
    """
    split = SignedCycleType.from_cycles([(1, 1)] * g)
    order = sp_order(g, l)
    rows = []
    for n in n_list:
        gamma = pow(q, n, l)
        family = family_type_distribution(q, n, g, l, budget=budget)
        group = coset_type_distribution(g, l, gamma, mode=mode, samples=samples, seed=seed)
        tv = tv_distance(family.aligned(), group)
        tv_regular = tv_distance(family.conditioned_on_regular(), group.conditioned_on_regular())
        rows.append(
            EquidistributionRow(
                n=n,
                gamma=gamma,
                family=family,
                group=group,
                tv=tv,
                tv_regular=tv_regular,
                family_split_mass=Fraction(family.weight(split)),
                error_constant=float(tv) * q ** (n / 2) / order,
            )
        )
        logger.info(f"Equidistribution q={q} g={g} l={l} n={n}: TV={float(tv):.4f}")
    return rows


# =============================================================================
# Sequence construction
# =============================================================================

ASYMPTOTIC = "asymptotic"
DESK = "desk"


@dataclass(frozen=True)
class SequenceParams:
    """Exponent of the ramification product and the auxiliary window for one preset."""

    preset: str = ASYMPTOTIC
    ramify_exponent: Fraction | None = None
    c_g: float = 1.0
    c1: Fraction = Fraction(1)
    c2: Fraction = Fraction(1)
    prime_budget: int | None = None
    census_cap: int = DEFAULT_CENSUS_CAP

    def exponent(self, g: int) -> Fraction:
        if self.ramify_exponent is not None:
            return Fraction(self.ramify_exponent)
        return Fraction(1, 32 * g * g) if self.preset == ASYMPTOTIC else Fraction(1, 8 * g * g)

    def window(self, n: int) -> tuple[int, int]:
        """Open interval of auxiliary primes."""
        if self.preset == ASYMPTOTIC:
            return n**5, 2 * n**5
        return n + 1, 4 * (n + 1)

    def to_dict(self, g: int) -> dict:
        return {
            "preset": self.preset,
            "ramify_exponent": str(self.exponent(g)),
            "window": "(n^5, 2n^5)" if self.preset == ASYMPTOTIC else "(n+1, 4(n+1))",
            "c_g": self.c_g,
            "c1": str(self.c1),
            "c2": str(self.c2),
            "prime_budget": self.prime_budget,
            "census_cap": self.census_cap,
        }


def ramification_primes(q: int, n: int, exponent: Fraction) -> tuple[int, ...]:
    """
    Greedy product of primes coprime to 2q with product in [q^{ne}/2, 2 q^{ne}].

    Compares exactly: for ne = a/b, product >= q^{ne}/2 iff (2 product)^b >= q^a.
    """
    target = Fraction(n) * exponent
    a, b = target.numerator, target.denominator
    chosen: list[int] = []
    product = 1
    for p in primerange(3, 10**6):
        if (2 * product) ** b >= q**a:
            break
        if p == q:
            continue
        if (product * p) ** b > 2**b * q**a:
            raise EmptyWindow(
                f"greedy product {product} of {chosen} is below q^(n e)/2 and {product * p} exceeds 2 q^(n e) "
                f"for q = {q}, n = {n}, e = {exponent}"
            )
        chosen.append(p)
        product *= p
    return tuple(chosen)


def auxiliary_primes(q: int, n: int, params: SequenceParams, excluded=()) -> tuple[int, ...]:
    low, high = params.window(n)
    primes = tuple(p for p in primerange(low + 1, high) if p not in (2, q) and p not in excluded)
    if not primes:
        raise EmptyWindow(f"no usable prime in ({low}, {high}) for n = {n}")
    return primes


def averaging_target(n: int, g: int, params: SequenceParams) -> float:
    """L / (2^{g+1} g! log L) for the lower window end L."""
    low, _ = params.window(n)
    if low <= 1:
        return 0.0
    return low / (2 ** (g + 1) * math.factorial(g) * math.log(low))


def lemma_bound(D: int) -> float:
    return 2 * math.log(D) ** 5 if D > math.e else 0.0


@dataclass
class SequenceEntry:
    """Selected record for one n, or a gap."""

    n: int
    ramification_primes: tuple[int, ...]
    auxiliary_primes: tuple[int, ...]
    aux_prime: int | None
    averaging_target: float
    record: CandidateRecord | None = None
    split_count: int = 0
    aux_split_hits: int = 0
    lemma31: Lemma31Verdict | None = None
    lemma31_error: str | None = None
    disc_window: DiscWindowVerdict | None = None
    candidates: int = 0
    certified: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def is_gap(self) -> bool:
        return self.record is None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "gap": self.is_gap,
            "ramification_primes": list(self.ramification_primes),
            "auxiliary_primes": list(self.auxiliary_primes),
            "aux_prime": self.aux_prime,
            "averaging_target": self.averaging_target,
            "aux_split_hits": self.aux_split_hits,
            "meets_averaging_target": self.aux_split_hits >= self.averaging_target,
            "split_count": self.split_count,
            "candidates": self.candidates,
            "certified": self.certified,
            "record": self.record.to_dict() if self.record else None,
            "lemma31_condition1": self.lemma31.to_dict() if self.lemma31 else None,
            "lemma31_error": self.lemma31_error,
            "disc_window": self.disc_window.to_dict() if self.disc_window else None,
            "notes": list(self.notes),
        }


def _split_count(record: CandidateRecord, cap: int) -> int:
    bound = lemma_bound(record.D)
    if bound < 2:
        return 0
    census = split_census(record.h, None, min(math.ceil(bound), cap), w=record.weil.w)
    record.census = census
    return split_count_below_lemma_bound(census)


def build_sequence(q: int, g: int, n_list, params: SequenceParams | None = None, budget: int | None = None):
    """
    One selected field per n.

    For each n: force ramification at a greedy product of small primes, try
    SplitCompletely at the auxiliary primes one at a time (ascending; the first
    prime with a Certified candidate fixes the pool, otherwise the pool is every
    candidate with forced ramification), and select the Certified candidate with
    the most split primes below 2 (log D)^5 (ties: smaller D, then smaller t).

    Returns:
        List of SequenceEntry, one per n (gaps included)
    """
    params = params or SequenceParams()
    exponent = params.exponent(g)
    entries = []
    for n in n_list:
        ramify = ramification_primes(q, n, exponent)
        aux = auxiliary_primes(q, n, params, excluded=ramify)
        base_conditions = [LocalCondition(p, REPEATED_ROOT) for p in ramify]

        with timed("build_sequence_step", q=q, g=g, n=n) as fields:
            pool = scan_family(q, n, g, base_conditions, certify=True, prime_budget=params.prime_budget, budget=budget)
            certified = [r for r in pool if r.certificate.is_certified]
            hits = {
                r.t_index: sum(1 for p in aux if LocalCondition(p, SPLIT_COMPLETELY).holds(r.weil)) for r in pool
            }

            aux_prime = None
            selection_pool = certified
            for p in aux:
                condition = LocalCondition(p, SPLIT_COMPLETELY)
                constrained = [r for r in certified if condition.holds(r.weil)]
                if constrained:
                    aux_prime = p
                    selection_pool = constrained
                    for r in constrained:
                        r.conditions_met = tuple(base_conditions) + (condition,)
                    break
            fields["certified"] = len(certified)

        entry = SequenceEntry(
            n=n,
            ramification_primes=ramify,
            auxiliary_primes=aux,
            aux_prime=aux_prime,
            averaging_target=averaging_target(n, g, params),
            candidates=len(pool),
            certified=len(certified),
        )
        if not selection_pool:
            entry.notes.append("no Certified candidate")
            logger.info(f"Sequence gap at n={n}: {len(pool)} candidates, none certified")
            entries.append(entry)
            continue

        scored = [(_split_count(r, params.census_cap), r) for r in selection_pool]
        split_count, best = min(scored, key=lambda item: (-item[0], item[1].D, item[1].t_index))
        entry.record = best
        entry.split_count = split_count
        entry.aux_split_hits = hits[best.t_index]

        if best.census is None:
            entry.lemma31_error = DegenerateD.__name__
        else:
            try:
                entry.lemma31 = lemma31_condition1(best.census, params.c_g)
            except (InsufficientCensus, DegenerateD) as e:
                entry.lemma31_error = e.code
        # The discriminant window always uses the exponent 1/(32 g^2)
        entry.disc_window = disc_window(best.D, q, n, g, params.c1, params.c2)
        if lemma_bound(best.D) > params.census_cap:
            entry.notes.append(f"census capped at {params.census_cap}")
        entries.append(entry)
    return entries
