"""
Finite field arithmetic.

Prime fields F_q and their extensions F_{q^m}, each represented as a single
quotient ring F_q[x]/(modulus) with a deterministic modulus (the
lexicographically smallest monic irreducible of degree m). Subfields are reached
through explicit embeddings rather than towers.

Scalar arithmetic goes through ``sympy.polys.galoistools``; whole-field scans
(point counting, root finding) use the vectorised numpy kernels at the bottom of
this module, where an element is a row of m residues and its index is the
integer sum(c_i * q^i).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcdex, gf_irreducible_p, gf_mul, gf_pow_mod, gf_rem, gf_strip

from .conf import setting
from .errors import BudgetExceeded, DescriptorMismatch, DivisionByZero, InternalError, NotASubfield, NotPrime

logger = logging.getLogger(__name__)


def _to_gf(coeffs) -> list[int]:
    """Little-endian coefficient tuple -> stripped big-endian galoistools list."""
    return gf_strip([int(c) for c in reversed(coeffs)])


def _from_gf(poly, m: int) -> tuple[int, ...]:
    """Big-endian galoistools list -> little-endian tuple of length m."""
    coeffs = [0] * m
    for i, c in enumerate(reversed(poly)):
        coeffs[i] = int(c)
    return tuple(coeffs)


# =============================================================================
# Field descriptors and elements
# =============================================================================


@dataclass(frozen=True)
class FieldDescriptor:
    """F_{q^m} = F_q[x]/(modulus); modulus is little-endian and monic of degree m."""

    q: int
    m: int
    modulus: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.q**self.m

    @property
    def modulus_gf(self) -> list[int]:
        return _to_gf(self.modulus)

    def element(self, value) -> "FieldElement":
        """
        Build an element from an integer (prime-field constant) or a coefficient sequence.

        Args:
            value: int, or little-endian sequence of at most m residues

        Returns:
            FieldElement of this field
        """
        if isinstance(value, FieldElement):
            if value.field != self:
                raise DescriptorMismatch(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, int | np.integer):
            coeffs = [int(value) % self.q] + [0] * (self.m - 1)
        else:
            values = [int(c) % self.q for c in value]
            if len(values) > self.m:
                raise DescriptorMismatch(f"{len(values)} coefficients given for degree {self.m}")
            coeffs = values + [0] * (self.m - len(values))
        return FieldElement(tuple(coeffs), self)

    def from_index(self, index: int) -> "FieldElement":
        coeffs = []
        for _ in range(self.m):
            index, digit = divmod(index, self.q)
            coeffs.append(digit)
        return FieldElement(tuple(coeffs), self)

    @property
    def zero(self) -> "FieldElement":
        return self.element(0)

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    @property
    def generator(self) -> "FieldElement":
        """The class of x (the zero element when m = 1, since the modulus is x)."""
        if self.m == 1:
            return self.element(-self.modulus[0])
        return self.element([0, 1])

    def elements(self):
        """Iterate over all elements in index order."""
        for index in range(self.size):
            yield self.from_index(index)

    def __str__(self):
        return f"F_{self.q}" if self.m == 1 else f"F_{self.q}^{self.m}"


@dataclass(frozen=True)
class FieldElement:
    """Element of a FieldDescriptor as m little-endian residues."""

    coeffs: tuple[int, ...]
    field: FieldDescriptor

    def __post_init__(self):
        if len(self.coeffs) != self.field.m:
            raise DescriptorMismatch(f"expected {self.field.m} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= c < self.field.q for c in self.coeffs):
            raise DescriptorMismatch(f"coefficients {self.coeffs} not reduced mod {self.field.q}")

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise DescriptorMismatch(f"{self.field} and {other.field} differ")
            return other
        return self.field.element(other)

    @property
    def index(self) -> int:
        return sum(c * self.field.q**i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def serialize(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        q = self.field.q
        return FieldElement(tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs, strict=True)), self.field)

    __radd__ = __add__

    def __neg__(self):
        q = self.field.q
        return FieldElement(tuple((-a) % q for a in self.coeffs), self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        q = self.field.q
        product = gf_rem(gf_mul(_to_gf(self.coeffs), _to_gf(other.coeffs), q, ZZ), self.field.modulus_gf, q, ZZ)
        return FieldElement(_from_gf(product, self.field.m), self.field)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero(f"zero has no inverse in {self.field}")
        q = self.field.q
        s, _, gcd = gf_gcdex(_to_gf(self.coeffs), self.field.modulus_gf, q, ZZ)
        if gcd != [1]:
            raise InternalError(f"modulus of {self.field} is not irreducible")
        return FieldElement(_from_gf(gf_rem(s, self.field.modulus_gf, q, ZZ), self.field.m), self.field)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 0:
            return self.field.one
        q = self.field.q
        # galoistools square-and-multiply modulo the field polynomial
        power = gf_pow_mod(_to_gf(self.coeffs), exponent, self.field.modulus_gf, q, ZZ)
        return FieldElement(_from_gf(power, self.field.m), self.field)

    def __str__(self):
        return self.serialize()


# =============================================================================
# Field construction
# =============================================================================


@lru_cache(maxsize=256)
def _smallest_irreducible(q: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m (x^m + a_{m-1}x^{m-1} + ... + a_0, a_{m-1} most significant)."""
    for k in range(q**m):
        digits = []
        for _ in range(m):
            k, digit = divmod(k, q)
            digits.append(digit)
        # digits is little-endian: digits[i] = a_i
        candidate = [1] + list(reversed(digits))
        if gf_irreducible_p(candidate, q, ZZ):
            return tuple(digits) + (1,)
    raise InternalError(f"no irreducible polynomial of degree {m} over F_{q}")


def build_field(q: int, m: int = 1, budget: int | None = None) -> FieldDescriptor:
    """
    Build F_{q^m} with a deterministic modulus.

    Args:
        q: Odd prime
        m: Extension degree >= 1
        budget: Largest field size allowed (defaults to WEYL_ENUMERATION_BUDGET)

    Returns:
        FieldDescriptor whose modulus is the lexicographically smallest monic
        irreducible of degree m (x for m = 1)
    """
    if not isprime(q) or q == 2:
        raise NotPrime(f"{q} is not an odd prime")
    if m < 1:
        raise NotASubfield(f"extension degree must be >= 1, got {m}")
    budget = setting("WEYL_ENUMERATION_BUDGET") if budget is None else budget
    if q**m > budget:
        raise BudgetExceeded(f"F_{q}^{m} has {q**m} elements, budget is {budget}")
    return FieldDescriptor(q=q, m=m, modulus=_smallest_irreducible(q, m))


def field_arith(op: str, a: FieldElement, b=None) -> FieldElement:
    """Dispatch one of add, sub, mul, inv, pow, neg (pow takes an integer exponent as b)."""
    if op == "add":
        return a + b
    elif op == "sub":
        return a - b
    elif op == "mul":
        return a * b
    elif op == "inv":
        return a.inverse()
    elif op == "pow":
        return a**b
    elif op == "neg":
        return -a
    raise ValueError(f"unknown field operation: {op}")


def quadratic_character(a: FieldElement) -> int:
    """Euler's criterion: 0 for zero, +1 for nonzero squares, -1 otherwise."""
    if a.is_zero():
        return 0
    value = a ** ((a.field.size - 1) // 2)
    if value == a.field.one:
        return 1
    if value == -a.field.one:
        return -1
    raise InternalError(f"{a} ** ((|F|-1)/2) = {value} is not +-1")


# =============================================================================
# Subfield embeddings
# =============================================================================


@dataclass(frozen=True)
class SubfieldEmbedding:
    """Ring embedding small -> big sending the generator of small to generator_image."""

    small: FieldDescriptor
    big: FieldDescriptor
    generator_image: FieldElement

    def __call__(self, a: FieldElement) -> FieldElement:
        if a.field != self.small:
            raise DescriptorMismatch(f"{a.field} is not the source field {self.small}")
        result = self.big.zero
        power = self.big.one
        for c in a.coeffs:
            if c:
                result = result + power * c
            power = power * self.generator_image
        return result


def embed_subfield(big: FieldDescriptor, small: FieldDescriptor) -> SubfieldEmbedding:
    """
    Embed small into big by sending the generator of small to the smallest root
    (in index order) of small.modulus inside big.
    """
    if small.q != big.q or big.m % small.m:
        raise NotASubfield(f"{small} is not a subfield of {big}")
    if small == big:
        return SubfieldEmbedding(small=small, big=big, generator_image=big.generator)
    return _embedding(big, small)


@lru_cache(maxsize=64)
def _embedding(big: FieldDescriptor, small: FieldDescriptor) -> SubfieldEmbedding:
    values = poly_values(big, [big.element(c) for c in small.modulus])
    zero_rows = np.flatnonzero(~values.any(axis=1))
    if zero_rows.size == 0:
        raise InternalError(f"modulus of {small} has no root in {big}")
    image = big.from_index(int(zero_rows[0]))
    logger.debug(f"Embedding {small} -> {big}: generator -> {image}")
    return SubfieldEmbedding(small=small, big=big, generator_image=image)


# =============================================================================
# Vectorised whole-field kernels
# =============================================================================


@lru_cache(maxsize=8)
def element_table(field: FieldDescriptor) -> np.ndarray:
    """All elements as an (q^m, m) array; row k holds the base-q digits of k."""
    indices = np.arange(field.size, dtype=np.int64)
    table = np.empty((field.size, field.m), dtype=np.int64)
    for i in range(field.m):
        table[:, i] = indices % field.q
        indices //= field.q
    return table


def row_indices(field: FieldDescriptor, rows: np.ndarray) -> np.ndarray:
    weights = field.q ** np.arange(field.m, dtype=np.int64)
    return rows @ weights


def constant_rows(field: FieldDescriptor, element: FieldElement, count: int) -> np.ndarray:
    return np.tile(np.asarray(element.coeffs, dtype=np.int64), (count, 1))


def vec_mul(field: FieldDescriptor, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise product of two (N, m) element arrays."""
    q, m = field.q, field.m
    product = np.zeros((a.shape[0], 2 * m - 1), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            product[:, i + j] += a[:, i] * b[:, j] % q
    product %= q
    # x^m = -(modulus_0 + ... + modulus_{m-1} x^{m-1})
    for d in range(2 * m - 2, m - 1, -1):
        lead = product[:, d]
        for i in range(m):
            if field.modulus[i]:
                product[:, d - m + i] -= lead * field.modulus[i]
        product %= q
    return product[:, :m]


def vec_pow(field: FieldDescriptor, a: np.ndarray, exponent: int) -> np.ndarray:
    result = constant_rows(field, field.one, a.shape[0])
    base = a.copy()
    while exponent:
        if exponent & 1:
            result = vec_mul(field, result, base)
        base = vec_mul(field, base, base)
        exponent >>= 1
    return result


def poly_values(field: FieldDescriptor, coeffs: list[FieldElement], points: np.ndarray | None = None) -> np.ndarray:
    """Evaluate sum coeffs[i] x^i at every row of points (default: every element) by Horner's rule."""
    if points is None:
        points = element_table(field)
    count = points.shape[0]
    acc = constant_rows(field, coeffs[-1], count)
    for c in reversed(coeffs[:-1]):
        acc = vec_mul(field, acc, points)
        acc[:, :] += np.asarray(c.coeffs, dtype=np.int64)
        acc %= field.q
    return acc


@lru_cache(maxsize=8)
def character_table(field: FieldDescriptor) -> np.ndarray:
    """Quadratic character of every element by index, via Euler's criterion."""
    powers = vec_pow(field, element_table(field), (field.size - 1) // 2)
    table = np.zeros(field.size, dtype=np.int8)
    first = powers[:, 0]
    rest_zero = ~powers[:, 1:].any(axis=1) if field.m > 1 else np.ones(field.size, dtype=bool)
    table[(first == 1) & rest_zero] = 1
    table[(first == field.q - 1) & rest_zero] = -1
    return table


@lru_cache(maxsize=8)
def square_root_counts(field: FieldDescriptor) -> np.ndarray:
    """Number of y with y^2 = v for every v, by squaring every element."""
    table = element_table(field)
    squares = row_indices(field, vec_mul(field, table, table))
    return np.bincount(squares, minlength=field.size)
