"""
Split-prime censuses.

Classifies every prime up to a bound by its signed cycle type, compares the
split-completely density with 1/(2^g g!), and evaluates the discriminant and
split-count conditions used when building a sequence of fields. D always means
|disc(h)|, the discriminant of the order Z[pi]. Logarithms are natural.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from sympy import primerange

from config.timing import timed

from .conf import setting
from .errors import BudgetExceeded, DegenerateD, InsufficientCensus
from .weilpoly import CycleTypeClassifier, SignedCycleType, coefficients

logger = logging.getLogger(__name__)


def expected_split_density(g: int) -> Fraction:
    """1/(2^g g!), the proportion of the identity in W_g."""
    return Fraction(1, 2**g * math.factorial(g))


def reference_split_count(X: float, g: int) -> float:
    """Chebotarev reference X / (d log X) with d = 2^g g!."""
    if X <= 1:
        return 0.0
    return X / (2**g * math.factorial(g) * math.log(X))


# =============================================================================
# Census reports
# =============================================================================


@dataclass(frozen=True)
class CensusReport:
    """Per-prime classification up to X, with the tallies derived from it."""

    h: tuple[int, ...]
    h_real: tuple[int, ...]
    g: int
    X: int
    rows: tuple[tuple[int, SignedCycleType], ...]
    D: int

    @property
    def primes_scanned(self) -> int:
        return len(self.rows)

    @property
    def ramified(self) -> int:
        return sum(1 for _, t in self.rows if t.is_ramified)

    @property
    def split_primes(self) -> list[int]:
        return [p for p, t in self.rows if t.is_split_completely]

    @property
    def split_completely(self) -> int:
        return len(self.split_primes)

    @property
    def by_type(self) -> dict[str, int]:
        counts = Counter(str(t) for _, t in self.rows if not t.is_ramified)
        return dict(sorted(counts.items()))

    @property
    def unramified(self) -> int:
        return self.primes_scanned - self.ramified

    @property
    def density_estimate(self) -> float:
        return self.split_completely / self.unramified if self.unramified else 0.0

    @property
    def expected_density(self) -> Fraction:
        return expected_split_density(self.g)

    def z_score(self) -> float:
        """|density - rho| / sqrt(rho (1 - rho) / N) over the unramified primes."""
        rho = float(self.expected_density)
        if not self.unramified:
            return 0.0
        return abs(self.density_estimate - rho) / math.sqrt(rho * (1 - rho) / self.unramified)

    def restrict(self, X: int) -> "CensusReport":
        """The census of the same field up to a smaller bound."""
        return CensusReport(
            h=self.h,
            h_real=self.h_real,
            g=self.g,
            X=X,
            rows=tuple((p, t) for p, t in self.rows if p <= X),
            D=self.D,
        )

    def counting_curve(self, checkpoints) -> list[tuple[int, int, float]]:
        """(X, N_K(X), X / (d log X)) at each checkpoint <= X."""
        split = self.split_primes
        curve = []
        for x in sorted(checkpoints):
            if x > self.X:
                break
            curve.append((x, sum(1 for p in split if p <= x), reference_split_count(x, self.g)))
        return curve

    def csv_rows(self) -> list[tuple[int, str]]:
        return [(p, str(t)) for p, t in self.rows]

    def summary(self) -> dict:
        return {
            "X": self.X,
            "primes_scanned": self.primes_scanned,
            "split_completely": self.split_completely,
            "ramified": self.ramified,
            "density_estimate": self.density_estimate,
        }

    def to_dict(self) -> dict:
        return {
            "h": [str(c) for c in self.h],
            "h_real": [str(c) for c in self.h_real],
            "g": self.g,
            "X": self.X,
            "counts": {
                "split_completely": self.split_completely,
                "ramified": self.ramified,
                "by_type": self.by_type,
            },
            "primes_scanned": self.primes_scanned,
            "density_estimate": self.density_estimate,
            "expected_density": str(self.expected_density),
            "z_score": self.z_score(),
            "D": str(self.D),
            "D_kind": "order discriminant",
            "log_base": "natural",
        }


def _classifier(h, h_real, w) -> CycleTypeClassifier:
    return h if isinstance(h, CycleTypeClassifier) else CycleTypeClassifier(h, h_real, w)


def split_census(h, h_real, X: int, w: int | None = None, prime_cap: int | None = None) -> CensusReport:
    """
    Classify every prime p <= X.

    Args:
        h: Monic integer polynomial of degree 2g (or a CycleTypeClassifier)
        h_real: Real subfield polynomial
        X: Census bound
        w: Frobenius weight; defaults to the g-th root of h(0)
        prime_cap: Largest admissible X (defaults to WEYL_PRIME_CAP)

    Returns:
        CensusReport
    """
    prime_cap = setting("WEYL_PRIME_CAP") if prime_cap is None else prime_cap
    if X > prime_cap:
        raise BudgetExceeded(f"census bound {X} exceeds the prime cap {prime_cap}")

    classifier = _classifier(h, h_real, w)
    with timed("split_census", bound=X) as fields:
        rows = tuple((p, classifier.classify(p)) for p in primerange(2, X + 1))
        fields["primes"] = len(rows)

    return CensusReport(
        h=coefficients(classifier.h),
        h_real=coefficients(classifier.h_real),
        g=classifier.g,
        X=X,
        rows=rows,
        D=abs(classifier.disc_h),
    )


def find_split_prime_below(h, h_real, bound: int, w: int | None = None) -> int | None:
    """Smallest prime p <= bound at which Frobenius is the identity type, skipping ramified primes."""
    if bound < 2:
        return None
    classifier = _classifier(h, h_real, w)
    for p in primerange(2, bound + 1):
        if classifier.is_ramified(p):
            continue
        if classifier.classify(p).is_split_completely:
            return p
    return None


# =============================================================================
# Sequence conditions
# =============================================================================


class Lemma31Verdict(NamedTuple):
    holds: bool
    threshold: float
    count: int
    bound: float

    def to_dict(self) -> dict:
        return self._asdict()


def lemma31_condition1(report: CensusReport, c_g: float) -> Lemma31Verdict:
    """
    At least c_g (log D)^5 / log log D primes p <= 2 (log D)^5 split completely.

    Raises:
        DegenerateD: D <= e, where log log D is not positive
        InsufficientCensus: the census stops below 2 (log D)^5
    """
    if report.D <= math.e:
        raise DegenerateD(f"D = {report.D} does not exceed e")
    log_d = math.log(report.D)
    bound = 2 * log_d**5
    if report.X < bound:
        raise InsufficientCensus(f"census bound {report.X} is below 2 (log D)^5 = {bound:.1f}")
    threshold = c_g * log_d**5 / math.log(log_d)
    count = sum(1 for p in report.split_primes if p <= bound)
    return Lemma31Verdict(holds=count >= threshold, threshold=threshold, count=count, bound=bound)


def split_count_below_lemma_bound(report: CensusReport) -> int:
    """Split primes p <= 2 (log D)^5; 0 when D <= e."""
    if report.D <= math.e:
        return 0
    bound = 2 * math.log(report.D) ** 5
    return sum(1 for p in report.split_primes if p <= bound)


def _exact(value) -> Fraction:
    if isinstance(value, int | Fraction):
        return Fraction(value)
    return Fraction(str(value))


class DiscWindowVerdict(NamedTuple):
    holds: bool
    lower_holds: bool
    upper_holds: bool
    lower: float
    upper: str

    def to_dict(self) -> dict:
        return self._asdict()


def disc_window(D: int, q: int, n: int, g: int, c1, c2, exponent=None) -> DiscWindowVerdict:
    """
    c1 q^{n e} <= D <= c2 q^{n g^2} with e = exponent (default 1/(32 g^2)).

    Both comparisons are exact: for e = a/b the lower one is c1^b q^{n a} <= D^b.
    The returned lower bound is a float for display only.
    """
    e = Fraction(1, 32 * g * g) if exponent is None else _exact(exponent)
    c1, c2 = _exact(c1), _exact(c2)
    a, b = e.numerator, e.denominator

    lower_holds = c1**b * Fraction(q) ** (n * a) <= Fraction(D) ** b
    upper = c2 * q ** (n * g * g)
    upper_holds = D <= upper
    lower = float(c1) * q ** (n * float(e))
    return DiscWindowVerdict(
        holds=lower_holds and upper_holds,
        lower_holds=lower_holds,
        upper_holds=upper_holds,
        lower=lower,
        upper=str(upper),
    )
