"""
Symplectic similitude statistics over F_l.

Samples and enumerates the multiplier-gamma coset of Sp_2g(F_l) inside the
similitude group, bins elements by the signed cycle type of their characteristic
polynomial, and compares type distributions. The coset representative is
diag(gamma I_g, I_g) for the standard form J = [[0, I_g], [-I_g, 0]].
"""

import hashlib
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import Matrix, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

from arithmetic.conf import setting
from arithmetic.errors import BadMultiplier, EnumerationTooLarge, InternalError, NotPrime
from arithmetic.weilpoly import SignedCycleType, gamma_reciprocal
from config.timing import timed

logger = logging.getLogger(__name__)

EXACT = "ExactEnumeration"
MONTE_CARLO = "MonteCarlo"
FAMILY = "FamilyEmpirical"

# Samples drawn per seed-derived stream
SAMPLE_CHUNK = 10_000


def standard_form(g: int) -> np.ndarray:
    identity = np.eye(g, dtype=np.int64)
    zero = np.zeros((g, g), dtype=np.int64)
    return np.block([[zero, identity], [-identity, zero]])


def sp_order(g: int, l: int) -> int:
    """|Sp_2g(F_l)| = l^{g^2} prod_{i=1}^{g} (l^{2i} - 1)."""
    return l ** (g * g) * math.prod(l ** (2 * i) - 1 for i in range(1, g + 1))


def derive_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for task ``index`` of master seed ``seed`` (SHA-256 of "seed:index")."""
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "big"))


def _check_group(l: int, gamma: int) -> int:
    if not isprime(l) or l == 2:
        raise NotPrime(f"{l} is not an odd prime")
    if gamma % l == 0:
        raise BadMultiplier(f"multiplier {gamma} vanishes mod {l}")
    return gamma % l


# =============================================================================
# Matrices
# =============================================================================


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    """2g x 2g matrix over F_l with M^T J M = multiplier * J."""

    entries: np.ndarray
    l: int
    g: int
    multiplier: int

    def __post_init__(self):
        if not similitude_holds(self.entries, self.l, self.multiplier):
            raise InternalError(f"M^T J M != {self.multiplier} J mod {self.l}")

    @property
    def det(self) -> int:
        return int(Matrix(self.entries.tolist()).det(method="berkowitz")) % self.l

    def charpoly(self) -> tuple[int, ...]:
        return tuple(int(c) for c in charpolys(self.entries[np.newaxis], self.l)[0])


def similitude_holds(matrices: np.ndarray, l: int, gamma: int) -> bool:
    """M^T J M == gamma J mod l for one (d, d) matrix or a (N, d, d) batch."""
    batch = matrices if matrices.ndim == 3 else matrices[np.newaxis]
    J = standard_form(batch.shape[1] // 2)
    lhs = np.matmul(np.matmul(np.swapaxes(batch, 1, 2), J), batch) % l
    return bool(np.all(lhs == (gamma * J) % l))


def similitude_representative(g: int, l: int, gamma: int, alternative: bool = False) -> np.ndarray:
    """diag(gamma I_g, I_g), or diag(I_g, gamma I_g) when ``alternative`` is set."""
    scaled = [gamma % l] * g
    ones = [1] * g
    diagonal = ones + scaled if alternative else scaled + ones
    return np.diag(np.array(diagonal, dtype=np.int64))


@lru_cache(maxsize=32)
def transvection_generators(g: int, l: int) -> np.ndarray:
    """
    Transvections T = I + c v v^T J for c = +-1 and v in
    {e_i, f_i, e_i + f_i, e_i + e_j, f_i + f_j}.
    """
    d = 2 * g
    J = standard_form(g)
    basis = np.eye(d, dtype=np.int64)
    vectors = []
    for i in range(g):
        vectors += [basis[i], basis[g + i], basis[i] + basis[g + i]]
        for j in range(i + 1, g):
            vectors += [basis[i] + basis[j], basis[g + i] + basis[g + j]]
    generators = []
    for v in vectors:
        shear = np.outer(v, v) @ J
        for c in (1, -1):
            generators.append((np.eye(d, dtype=np.int64) + c * shear) % l)
    return np.array(generators)


def walk(g: int, l: int, count: int, rng: np.random.Generator, length: int | None = None) -> np.ndarray:
    """``count`` independent random transvection walks in Sp_2g(F_l), as a (count, 2g, 2g) array."""
    length = setting("WEYL_WALK_LENGTH") if length is None else length
    generators = transvection_generators(g, l)
    d = 2 * g
    matrices = np.broadcast_to(np.eye(d, dtype=np.int64), (count, d, d)).copy()
    for _ in range(length):
        choice = rng.integers(0, len(generators), size=count)
        matrices = np.matmul(matrices, generators[choice]) % l
    return matrices


def sp_sample(g: int, l: int, gamma: int, rng: np.random.Generator, length: int | None = None) -> SymplecticMatrix:
    """One element R * S of the gamma-coset, S a random transvection walk."""
    gamma = _check_group(l, gamma)
    S = walk(g, l, 1, rng, length)[0]
    M = similitude_representative(g, l, gamma) @ S % l
    return SymplecticMatrix(entries=M, l=l, g=g, multiplier=gamma)


# =============================================================================
# Characteristic polynomials and types
# =============================================================================


def charpolys(matrices: np.ndarray, l: int) -> np.ndarray:
    """
    Characteristic polynomials det(T I - M) mod l of a (N, d, d) batch, big-endian (N, d + 1).

    Division-free Berkowitz recursion, vectorised over the batch.
    """
    count, d, _ = matrices.shape
    poly = np.stack([np.ones(count, dtype=np.int64), (-matrices[:, d - 1, d - 1]) % l], axis=1)
    for r in range(d - 2, -1, -1):
        k = d - r - 1
        row = matrices[:, r, r + 1 :]
        column = matrices[:, r + 1 :, r]
        block = matrices[:, r + 1 :, r + 1 :]

        # Toeplitz column [1, -a, -R C, -R A C, ..., -R A^{k-1} C]
        items = np.zeros((count, k + 2), dtype=np.int64)
        items[:, 0] = 1
        items[:, 1] = (-matrices[:, r, r]) % l
        vector = column
        for m in range(k):
            items[:, m + 2] = (-np.einsum("ni,ni->n", row, vector)) % l
            vector = np.einsum("nij,nj->ni", block, vector) % l

        updated = np.zeros((count, k + 2), dtype=np.int64)
        for j in range(k + 2):
            for i in range(min(j, k) + 1):
                updated[:, j] += items[:, j - i] * poly[:, i] % l
        poly = updated % l
    return poly


@lru_cache(maxsize=65536)
def charpoly_type(coeffs: tuple[int, ...], l: int, gamma: int) -> SignedCycleType:
    """
    Signed cycle type of a similitude from its characteristic polynomial.

    Factors f pair with f*(T) = T^k f(gamma/T)/f(0). A self-paired factor of degree
    2k is a (k, -) cycle, a pair f != f* of degree k is a (k, +) cycle, and any
    repeated (or odd self-paired) factor makes the element NonRegular.
    """
    _, factors = gf_factor(list(coeffs), l, ZZ)
    if any(k > 1 for _, k in factors):
        return SignedCycleType.nonregular()

    remaining = {tuple(int(c) for c in f) for f, _ in factors}
    cycles = []
    while remaining:
        f = min(remaining)
        remaining.discard(f)
        partner = gamma_reciprocal(f, gamma, l)
        degree = len(f) - 1
        if partner == f:
            if degree % 2:
                return SignedCycleType.nonregular()
            cycles.append((degree // 2, -1))
        elif partner in remaining:
            remaining.discard(partner)
            cycles.append((degree, 1))
        else:
            raise InternalError(f"factor {f} has no gamma-reciprocal partner mod {l}")
    return SignedCycleType.from_cycles(cycles)


def matrix_type(M: SymplecticMatrix) -> SignedCycleType:
    return charpoly_type(M.charpoly(), M.l, M.multiplier)


def tally_types(matrices: np.ndarray, l: int, gamma: int) -> Counter:
    polys, counts = np.unique(charpolys(matrices, l), axis=0, return_counts=True)
    tally: Counter = Counter()
    for poly, count in zip(polys, counts, strict=True):
        tally[charpoly_type(tuple(int(c) for c in poly), l, gamma)] += int(count)
    return tally


# =============================================================================
# Distributions
# =============================================================================


@dataclass(frozen=True)
class TypeDistribution:
    """Probability per signed cycle type; exact rationals for ExactEnumeration and family scans."""

    weights: dict
    sample_count: int
    provenance: str
    standard_errors: dict = field(default_factory=dict)

    @classmethod
    def from_counts(cls, counts: Counter, provenance: str, exact: bool, sample_count: int | None = None):
        total = sum(counts.values())
        if exact:
            weights = {t: Fraction(c, total) for t, c in counts.items()}
            errors = {}
        else:
            weights = {t: c / total for t, c in counts.items()}
            errors = {t: math.sqrt(p * (1 - p) / total) for t, p in weights.items()}
        return cls(
            weights=dict(sorted(weights.items(), key=lambda item: str(item[0]))),
            sample_count=total if sample_count is None else sample_count,
            provenance=provenance,
            standard_errors=errors,
        )

    @property
    def is_exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights.values())

    def weight(self, cycle_type) -> Fraction | float:
        if isinstance(cycle_type, str):
            cycle_type = SignedCycleType.parse(cycle_type)
        return self.weights.get(cycle_type, Fraction(0) if self.is_exact else 0.0)

    def aligned(self) -> "TypeDistribution":
        """Ramified mass moved into the NonRegular bin (both mean a repeated eigenvalue mod l)."""
        merged: dict = {}
        for t, w in self.weights.items():
            key = SignedCycleType.nonregular() if t.is_ramified else t
            merged[key] = merged.get(key, 0) + w
        return TypeDistribution(merged, self.sample_count, self.provenance, self.standard_errors)

    def conditioned_on_regular(self) -> "TypeDistribution":
        regular = {t: w for t, w in self.weights.items() if t.is_regular}
        mass = sum(regular.values())
        if not mass:
            return TypeDistribution({}, self.sample_count, self.provenance)
        return TypeDistribution({t: w / mass for t, w in regular.items()}, self.sample_count, self.provenance)

    def to_dict(self) -> dict:
        return {
            "provenance": self.provenance,
            "sample_count": self.sample_count,
            "weights": {str(t): str(w) if isinstance(w, Fraction) else w for t, w in self.weights.items()},
            "weights_float": {str(t): float(w) for t, w in self.weights.items()},
            "standard_errors": {str(t): e for t, e in self.standard_errors.items()},
        }

    def csv_rows(self) -> list[tuple[str, str, float]]:
        return [(str(t), str(w), float(w)) for t, w in self.weights.items()]


def tv_distance(d1: TypeDistribution, d2: TypeDistribution) -> Fraction | float:
    """(1/2) sum |d1 - d2| over the union of bins; exact when both inputs are exact."""
    keys = set(d1.weights) | set(d2.weights)
    if d1.is_exact and d2.is_exact:
        return sum((abs(d1.weight(t) - d2.weight(t)) for t in keys), Fraction(0)) / 2
    return sum(abs(float(d1.weight(t)) - float(d2.weight(t))) for t in keys) / 2


def _pack(matrices: np.ndarray, l: int) -> np.ndarray:
    flat = matrices.reshape(matrices.shape[0], -1)
    weights = l ** np.arange(flat.shape[1], dtype=np.int64)
    return flat @ weights


def enumerate_sp(g: int, l: int, cap: int | None = None) -> np.ndarray:
    """
    Every element of Sp_2g(F_l), by orbit closure of the identity under the
    transvection generators.

    Raises:
        EnumerationTooLarge: |Sp_2g(F_l)| exceeds the cap
    """
    cap = setting("WEYL_EXACT_GROUP_CAP") if cap is None else cap
    order = sp_order(g, l)
    if order > cap:
        raise EnumerationTooLarge(f"|Sp_{2 * g}(F_{l})| = {order} exceeds {cap}")
    d = 2 * g
    if l ** (d * d) >= 2**62:
        raise EnumerationTooLarge(f"{d}x{d} matrices over F_{l} do not pack into 64-bit keys")

    generators = transvection_generators(g, l)
    frontier = np.eye(d, dtype=np.int64)[np.newaxis]
    seen = _pack(frontier, l)
    elements = [frontier]
    with timed("enumerate_sp", g=g, l=l) as fields:
        while frontier.shape[0]:
            products = (np.matmul(frontier[:, np.newaxis], generators[np.newaxis]) % l).reshape(-1, d, d)
            keys = _pack(products, l)
            keys, first = np.unique(keys, return_index=True)
            fresh = ~np.isin(keys, seen)
            frontier = products[first[fresh]]
            seen = np.union1d(seen, keys[fresh])
            elements.append(frontier)
        group = np.concatenate(elements)
        fields["elements"] = group.shape[0]

    if group.shape[0] != order:
        raise InternalError(f"orbit closure found {group.shape[0]} elements, expected {order}")
    return group


def coset_type_distribution(
    g: int,
    l: int,
    gamma: int,
    mode: str = "exact",
    samples: int | None = None,
    seed: int = 0,
    walk_length: int | None = None,
    alternative_representative: bool = False,
) -> TypeDistribution:
    """
    Type distribution of the multiplier-gamma coset R * Sp_2g(F_l).

    Args:
        g: Genus
        l: Odd prime
        gamma: Multiplier, nonzero mod l
        mode: "exact" (orbit-closure enumeration) or "montecarlo"
        samples: Monte-Carlo sample count (defaults to WEYL_SAMPLE_COUNT)
        seed: Master seed; chunk i of the samples uses stream (seed, i)
        walk_length: Transvection steps per sample
        alternative_representative: Use diag(I_g, gamma I_g) as the coset representative
    """
    gamma = _check_group(l, gamma)
    R = similitude_representative(g, l, gamma, alternative=alternative_representative)

    if mode == "exact":
        coset = np.matmul(R, enumerate_sp(g, l)) % l
        if not similitude_holds(coset, l, gamma):
            raise InternalError("enumerated coset left the similitude group")
        return TypeDistribution.from_counts(tally_types(coset, l, gamma), EXACT, exact=True, sample_count=0)

    samples = setting("WEYL_SAMPLE_COUNT") if samples is None else samples
    tally: Counter = Counter()
    with timed("coset_sampling", g=g, l=l, samples=samples):
        for index, start in enumerate(range(0, samples, SAMPLE_CHUNK)):
            count = min(SAMPLE_CHUNK, samples - start)
            batch = np.matmul(R, walk(g, l, count, derive_rng(seed, index), walk_length)) % l
            if not similitude_holds(batch, l, gamma):
                raise InternalError("sampled matrix left the similitude group")
            tally.update(tally_types(batch, l, gamma))
    return TypeDistribution.from_counts(tally, MONTE_CARLO, exact=False)


def split_class_fraction(g: int, l: int, mode: str = "exact", samples: int | None = None, seed: int = 0):
    """Weight of the split-completely type in Sp_2g(F_l)."""
    distribution = coset_type_distribution(g, l, 1, mode=mode, samples=samples, seed=seed)
    return distribution.weight(SignedCycleType.from_cycles([(1, 1)] * g))
