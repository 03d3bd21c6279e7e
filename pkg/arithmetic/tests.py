"""
Tests for the arithmetic app.

Run with: uv run python manage.py test arithmetic
"""

import dataclasses
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, tag
from sympy import primerange

from .census import (
    disc_window,
    expected_split_density,
    find_split_prime_below,
    lemma31_condition1,
    split_census,
    split_count_below_lemma_bound,
)
from .curvezeta import (
    WeilPolynomial,
    count_points,
    count_points_direct,
    functional_equation_holds,
    power_sums,
    specialize_curve,
    validate_weil,
    weil_from_power_sums,
    zeta_numerator,
)
from .errors import (
    BudgetExceeded,
    DegenerateD,
    DescriptorMismatch,
    DivisionByZero,
    GenusPrimeConflict,
    InconsistentLift,
    InsufficientCensus,
    NotASubfield,
    NotCMSymmetric,
    NotIrreducible,
    NotPrime,
    NotQuartic,
    NotSquarefree,
)
from .ffield import (
    build_field,
    character_table,
    embed_subfield,
    field_arith,
    quadratic_character,
    square_root_counts,
)
from .weilpoly import (
    CycleTypeClassifier,
    SignedCycleType,
    as_poly,
    coefficients,
    factor_mod_l,
    irreducibility_over_Q,
    poly_discriminant,
    rational_roots,
    real_subfield_poly,
    signed_cycle_type,
)
from .weylcert import (
    CERTIFIED,
    INCONCLUSIVE,
    REFUTED,
    certify_weyl,
    cm_check,
    is_kernel_witness,
    is_transposition_type,
    quartic_galois_oracle,
)

# T^2 + 2T + 5, the Frobenius polynomial of y^2 = x(x - 1)(x - 2) over F_5
WORKED_H = (5, 2, 1)
WORKED_REAL = (2, 1)

# Exhaustive scans: (g, q, largest n), every field of size at most SCAN_LIMIT
SCAN_LIMIT = 10**4
SCANS = ((1, 5, 4), (1, 7, 4), (2, 7, 2), (2, 11, 2))


def _from_roots(roots) -> tuple[int, ...]:
    """Little-endian coefficients of prod (T - r)."""
    coeffs = [1]
    for r in roots:
        coeffs = [a - r * b for a, b in zip([0] + coeffs, coeffs + [0], strict=True)]
    return tuple(coeffs)


def _multiply(a, b) -> tuple[int, ...]:
    product = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            product[i + j] += x * y
    return tuple(product)


def _scan_curves(g: int, q: int, max_n: int):
    for n in range(1, max_n + 1):
        if q**n > SCAN_LIMIT:
            break
        for t in range(q**n):
            try:
                yield specialize_curve(g, q, n, t)
            except NotSquarefree:
                continue

# =============================================================================
# Finite Field Tests
# =============================================================================


class BuildFieldTest(SimpleTestCase):
    def test_prime_field_modulus_is_x(self):
        self.assertEqual(build_field(5).modulus, (0, 1))

    def test_smallest_irreducible_modulus(self):
        self.assertEqual(build_field(5, 2).modulus, (2, 0, 1))
        self.assertEqual(build_field(3, 2).modulus, (1, 0, 1))

    def test_rejects_non_primes(self):
        for q in (1, 2, 9, 15):
            with self.assertRaises(NotPrime):
                build_field(q)

    def test_budget(self):
        with self.assertRaises(BudgetExceeded):
            build_field(5, 4, budget=100)

    def test_index_round_trip(self):
        field = build_field(3, 3)
        self.assertEqual([e.index for e in field.elements()], list(range(27)))


class FieldArithmeticTest(SimpleTestCase):
    def setUp(self):
        self.field = build_field(5, 2)
        self.x = self.field.generator

    def test_generator_squares_to_minus_two(self):
        self.assertEqual((self.x * self.x).coeffs, (3, 0))

    def test_multiplicative_group_order(self):
        self.assertEqual(self.x**24, self.field.one)

    def test_inverse(self):
        for element in self.field.elements():
            if not element.is_zero():
                self.assertEqual(element * element.inverse(), self.field.one)

    def test_zero_has_no_inverse(self):
        with self.assertRaises(DivisionByZero):
            self.field.zero.inverse()

    def test_mixed_fields_rejected(self):
        with self.assertRaises(DescriptorMismatch):
            build_field(5).one + self.x

    def test_field_arith_dispatch(self):
        a, b = self.field.element([1, 2]), self.field.element([3, 4])
        self.assertEqual(field_arith("add", a, b), a + b)
        self.assertEqual(field_arith("mul", a, b), a * b)
        self.assertEqual(field_arith("inv", a), a.inverse())
        self.assertEqual(field_arith("pow", a, 3), a * a * a)
        self.assertEqual(field_arith("neg", a) + a, self.field.zero)

    def test_quadratic_character_of_f5(self):
        field = build_field(5)
        self.assertEqual([quadratic_character(field.element(a)) for a in range(5)], [0, 1, -1, -1, 1])

    def test_every_element_of_f25_below_f5_is_a_square(self):
        small = build_field(5)
        embedding = embed_subfield(self.field, small)
        for a in range(1, 5):
            self.assertEqual(quadratic_character(embedding(small.element(a))), 1)


class FieldKernelTest(SimpleTestCase):
    def test_character_table_matches_euler(self):
        field = build_field(3, 2)
        table = character_table(field)
        for element in field.elements():
            self.assertEqual(table[element.index], quadratic_character(element))

    def test_character_sums_to_zero(self):
        self.assertEqual(int(character_table(build_field(7, 2)).sum()), 0)

    def test_square_root_counts(self):
        field = build_field(5, 2)
        counts = square_root_counts(field)
        self.assertEqual(int(counts.sum()), field.size)
        self.assertEqual(int(counts[0]), 1)
        self.assertEqual(int((counts == 2).sum()), (field.size - 1) // 2)


class QuadraticCharacterTest(SimpleTestCase):
    def setUp(self):
        self.fields = (build_field(5, 2), build_field(3, 3))

    def test_multiplicative(self):
        for field in self.fields:
            elements = list(field.elements())
            for a in elements:
                for b in elements:
                    self.assertEqual(quadratic_character(a * b), quadratic_character(a) * quadratic_character(b))

    def test_half_the_units_are_squares(self):
        for field in self.fields:
            values = [quadratic_character(a) for a in field.elements()]
            self.assertEqual(values.count(0), 1)
            self.assertEqual(values.count(1), (field.size - 1) // 2)
            self.assertEqual(values.count(-1), (field.size - 1) // 2)

    def test_unit_group_order(self):
        for field in self.fields:
            for a in field.elements():
                if not a.is_zero():
                    self.assertEqual(a ** (field.size - 1), field.one)


class SubfieldEmbeddingTest(SimpleTestCase):
    def test_embedding_is_a_ring_map(self):
        small, big = build_field(3, 2), build_field(3, 4)
        embedding = embed_subfield(big, small)
        elements = list(small.elements())
        for a in elements:
            for b in elements:
                self.assertEqual(embedding(a * b), embedding(a) * embedding(b))
                self.assertEqual(embedding(a + b), embedding(a) + embedding(b))

    def test_identity_embedding(self):
        field = build_field(5, 2)
        element = field.element([2, 3])
        self.assertEqual(embed_subfield(field, field)(element), element)

    def test_composition_through_prime_field(self):
        prime, middle, big = build_field(3), build_field(3, 2), build_field(3, 4)
        inner, outer, direct = embed_subfield(middle, prime), embed_subfield(big, middle), embed_subfield(big, prime)
        for a in prime.elements():
            self.assertEqual(outer(inner(a)), direct(a))

    def test_composition_agrees_up_to_frobenius(self):
        small, middle, big = build_field(3, 2), build_field(3, 4), build_field(3, 8)
        inner, outer, direct = embed_subfield(middle, small), embed_subfield(big, middle), embed_subfield(big, small)
        elements = list(small.elements())
        composite = [outer(inner(a)) for a in elements]
        straight = [direct(a) for a in elements]
        # Both send the generator to a root of the same quadratic modulus
        self.assertTrue(composite == straight or composite == [b**3 for b in straight])
        self.assertEqual({e.index for e in composite}, {e.index for e in straight})

    def test_degree_must_divide(self):
        with self.assertRaises(NotASubfield):
            embed_subfield(build_field(5, 3), build_field(5, 2))


# =============================================================================
# Point Counting and Zeta Tests
# =============================================================================


class CurveTest(SimpleTestCase):
    def test_f_is_expanded(self):
        curve = specialize_curve(1, 5, 1, 0)
        # x (x - 1)(x - 2) = x^3 - 3x^2 + 2x
        self.assertEqual([c.coeffs[0] for c in curve.f_coeffs], [0, 2, 2, 1])

    def test_fixed_roots_are_not_squarefree(self):
        for t in (1, 2):
            with self.assertRaises(NotSquarefree):
                specialize_curve(1, 5, 1, t)

    def test_genus_prime_conflict(self):
        for g, q in ((2, 3), (3, 5), (3, 3)):
            with self.assertRaises(GenusPrimeConflict):
                specialize_curve(g, q, 1, 0)
        # q = 5 > 2g = 4 is allowed
        self.assertEqual(specialize_curve(2, 5, 1, 0).g, 2)

    def test_index_out_of_range(self):
        for t in (-1, 25, 30):
            with self.assertRaises(ValueError):
                specialize_curve(1, 5, 2, t)
        self.assertEqual(specialize_curve(1, 5, 2, 24).t.index, 24)

    def test_t_as_coefficients(self):
        curve = specialize_curve(1, 5, 2, [0, 1])
        self.assertEqual(curve.t, build_field(5, 2).generator)


class CountPointsTest(SimpleTestCase):
    def test_worked_counts(self):
        self.assertEqual(count_points(specialize_curve(1, 5, 1, 0), 1), 8)
        self.assertEqual(count_points(specialize_curve(1, 5, 1, 0), 2), 32)
        self.assertEqual(count_points(specialize_curve(1, 5, 1, 4), 1), 4)

    def test_direct_count_agrees(self):
        for t in (0, 5, 6):
            curve = specialize_curve(2, 7, 1, t)
            for m in (1, 2):
                self.assertEqual(count_points(curve, m), count_points_direct(curve, m))

    def test_chunked_reduction(self):
        curve = specialize_curve(1, 7, 2, 10)
        with self.settings(WEYL_COUNT_CHUNK=5):
            chunked = count_points(curve, 1)
        self.assertEqual(chunked, count_points_direct(curve, 1))


class ZetaNumeratorTest(SimpleTestCase):
    def test_worked_polynomials(self):
        self.assertEqual(zeta_numerator(specialize_curve(1, 5, 1, 0)).h_coeffs, (5, 2, 1))
        self.assertEqual(zeta_numerator(specialize_curve(1, 5, 1, 4)).h_coeffs, (5, -2, 1))
        self.assertEqual(zeta_numerator(specialize_curve(1, 5, 1, 3)).h_coeffs, (5, 2, 1))

    def test_reciprocal(self):
        weil = WeilPolynomial((5, 2, 1), 1, 5, 1)
        self.assertEqual(weil.reciprocal, (1, 2, 5))

    def test_predicts_counts_beyond_g(self):
        curve = specialize_curve(2, 7, 1, 0)
        weil = zeta_numerator(curve)
        self.assertEqual(weil.predicted_count(3), count_points(curve, 3))

    def test_newton_round_trip(self):
        weil = zeta_numerator(specialize_curve(2, 7, 1, 5))
        sums = power_sums(weil.h_coeffs, 2)
        self.assertEqual(weil_from_power_sums(sums, 2, 7), weil.h_coeffs)
        self.assertEqual(power_sums(WORKED_H, 2), [-2, -6])

    def test_power_sums_of_integer_roots(self):
        rng = np.random.default_rng(2024)
        for _ in range(25):
            roots = [int(r) for r in rng.integers(-6, 7, size=int(rng.integers(1, 6)))]
            expected = [sum(r**k for r in roots) for k in range(1, 7)]
            self.assertEqual(power_sums(_from_roots(roots), 6), expected, roots)

    def test_round_trip_on_products_of_weil_quadratics(self):
        rng = np.random.default_rng(7)
        w = 25
        for g in (1, 2, 3):
            for _ in range(10):
                h = (1,)
                for a in rng.integers(-10, 11, size=g):
                    h = _multiply(h, (w, -int(a), 1))
                self.assertEqual(weil_from_power_sums(power_sums(h, g), g, w), h)

    def test_family_members_validate(self):
        for t in (0, 5, 6):
            weil = zeta_numerator(specialize_curve(2, 7, 1, t))
            self.assertTrue(validate_weil(weil).passed, weil.h_coeffs)


@tag("slow")
class ExhaustiveScanTest(SimpleTestCase):
    def test_counting_methods_agree(self):
        for g, q, max_n in SCANS:
            for curve in _scan_curves(g, q, max_n):
                for m in range(1, g + 1):
                    if q ** (curve.n * m) > SCAN_LIMIT:
                        break
                    self.assertEqual(count_points(curve, m), count_points_direct(curve, m), (g, q, curve.n, curve.t, m))

    def test_every_member_validates(self):
        for g, q, max_n in SCANS:
            for curve in _scan_curves(g, q, max_n):
                if q ** (curve.n * g) > SCAN_LIMIT:
                    continue
                weil = zeta_numerator(curve)
                self.assertTrue(validate_weil(weil).passed, (g, q, curve.n, weil.h_coeffs))


class ValidateWeilTest(SimpleTestCase):
    def test_coefficient_bound_failure(self):
        validation = validate_weil(WeilPolynomial((5, 5, 1), 1, 5, 1))
        self.assertFalse(validation.passed)
        self.assertTrue(validation.functional_equation)
        self.assertFalse(validation.coefficient_bounds)
        self.assertFalse(validation.root_moduli)

    def test_functional_equation(self):
        self.assertTrue(functional_equation_holds(WORKED_H, 1, 5))
        self.assertFalse(functional_equation_holds((4, 2, 1), 1, 5))
        self.assertIn("functional_equation", validate_weil(WeilPolynomial((4, 2, 1), 1, 5, 1)).failures)

    def test_repeated_roots_keep_precision(self):
        # (T^2 + 5)^2 has roots of modulus exactly sqrt(5)
        validation = validate_weil(WeilPolynomial((25, 0, 10, 0, 1), 2, 5, 1))
        self.assertTrue(validation.root_moduli)


# =============================================================================
# Polynomial Tests
# =============================================================================


class FactorModLTest(SimpleTestCase):
    def test_worked_patterns(self):
        self.assertEqual(factor_mod_l(WORKED_H, 2).factors, ((1, 2),))
        self.assertFalse(factor_mod_l(WORKED_H, 2).squarefree)
        self.assertEqual(factor_mod_l(WORKED_H, 3).factors, ((2, 1),))
        self.assertEqual(factor_mod_l(WORKED_H, 13).factors, ((1, 1), (1, 1)))

    def test_pattern_string(self):
        self.assertEqual(str(factor_mod_l(WORKED_H, 2)), "{(1,2)}")


class IrreducibilityTest(SimpleTestCase):
    def test_certificate_prime(self):
        verdict = irreducibility_over_Q(WORKED_H)
        self.assertTrue(verdict.is_irreducible)
        self.assertEqual(verdict.certificate_prime, 3)
        self.assertEqual(verdict.primes_examined, 2)

    def test_rational_root(self):
        verdict = irreducibility_over_Q((2, -3, 1))
        self.assertTrue(verdict.is_reducible)
        self.assertEqual(verdict.method, "rational_root")

    def test_rational_roots_with_zero_constant(self):
        # y^3 - 4y, the resolvent cubic of T^4 + 1
        self.assertEqual(sorted(rational_roots((0, -4, 0, 1))), [-2, 0, 2])
        self.assertEqual(rational_roots((0, 0, 1)), [0])
        self.assertEqual(sorted(rational_roots((0, 0, 6, -5, 1))), [0, 2, 3])
        self.assertEqual(sorted(rational_roots((6, -5, 1))), [2, 3])
        self.assertEqual(rational_roots(WORKED_H), [])

    def test_reducible_everywhere_but_irreducible(self):
        # T^4 + 1 splits mod every prime
        verdict = irreducibility_over_Q((1, 0, 0, 0, 1), prime_budget=10)
        self.assertTrue(verdict.is_irreducible)
        self.assertEqual(verdict.method, "zassenhaus")
        inconclusive = irreducibility_over_Q((1, 0, 0, 0, 1), prime_budget=10, fallback=False)
        self.assertEqual(inconclusive.status, "inconclusive")

    def test_product_of_quadratics(self):
        verdict = irreducibility_over_Q((2, 0, 3, 0, 1), prime_budget=10)
        self.assertTrue(verdict.is_reducible)
        self.assertEqual({f for f, _ in verdict.factors}, {(1, 0, 1), (2, 0, 1)})

    def test_repeated_factor(self):
        with self.assertRaises(NotSquarefree):
            irreducibility_over_Q((1, 0, 2, 0, 1))


class RealSubfieldTest(SimpleTestCase):
    def test_discriminant(self):
        self.assertEqual(poly_discriminant(WORKED_H), -16)
        self.assertEqual(poly_discriminant((2, 1)), 1)

    def test_genus_one(self):
        self.assertEqual(real_subfield_poly(WORKED_H, 5), WORKED_REAL)

    def test_genus_two(self):
        # T^4 + T^3 + 3T^2 + 7T + 49 = T^2 h_real(T + 7/T)
        self.assertEqual(real_subfield_poly((49, 7, 3, 1, 1), 7), (-11, 1, 1))

    def test_not_symmetric(self):
        with self.assertRaises(NotCMSymmetric):
            real_subfield_poly((4, 2, 1), 5)


class SignedCycleTypeTest(SimpleTestCase):
    def test_canonical_order(self):
        cycle_type = SignedCycleType.from_cycles([(2, -1), (1, -1), (1, 1)])
        self.assertEqual(str(cycle_type), "1+,1-,2-")
        self.assertEqual(cycle_type.lengths, (1, 1, 2))
        self.assertEqual(cycle_type.size, 4)
        self.assertEqual(cycle_type.minus_count, 2)

    def test_parse(self):
        self.assertEqual(SignedCycleType.parse("2-,1+"), SignedCycleType.from_cycles([(1, 1), (2, -1)]))
        self.assertTrue(SignedCycleType.parse("Ramified").is_ramified)
        self.assertFalse(SignedCycleType.parse("NonRegular").is_regular)

    def test_split_completely(self):
        self.assertTrue(SignedCycleType.parse("1+,1+").is_split_completely)
        self.assertFalse(SignedCycleType.parse("1+,1-").is_split_completely)
        self.assertFalse(SignedCycleType.ramified().is_split_completely)


class ClassifierTest(SimpleTestCase):
    def test_worked_types(self):
        self.assertEqual(str(signed_cycle_type(WORKED_H, WORKED_REAL, 13)), "1+")
        self.assertEqual(str(signed_cycle_type(WORKED_H, WORKED_REAL, 3)), "1-")
        self.assertEqual(str(signed_cycle_type(WORKED_H, WORKED_REAL, 2)), "Ramified")

    def test_real_subfield_is_derived(self):
        classifier = CycleTypeClassifier(WORKED_H)
        self.assertEqual(classifier.w, 5)
        self.assertEqual(str(classifier.classify(13)), "1+")

    def test_degree_mismatch(self):
        with self.assertRaises(InconsistentLift):
            CycleTypeClassifier(WORKED_H, (1, 0, 1))

    def test_types_have_genus_size(self):
        h = zeta_numerator(specialize_curve(2, 7, 1, 0)).h_coeffs
        classifier = CycleTypeClassifier(h, None, 7)
        for l in primerange(3, 60):
            cycle_type = classifier.classify(l)
            if cycle_type.is_regular:
                self.assertEqual(cycle_type.size, 2)


# =============================================================================
# Certification Tests
# =============================================================================


class CMCheckTest(SimpleTestCase):
    def test_imaginary_quadratic(self):
        report = cm_check(WORKED_H, 5)
        self.assertTrue(report.is_cm)
        self.assertEqual(report.h_real, WORKED_REAL)
        self.assertTrue(report.conditional)

    def test_real_roots_short_circuit(self):
        report = cm_check((-5, 0, 1), 5, irreducible=True)
        self.assertFalse(report.is_cm)
        self.assertFalse(report.no_real_roots)
        self.assertIsNone(report.real_roots_of_h_real)
        self.assertIn("real_root", report.witness)

    def test_totally_imaginary_but_not_cm(self):
        # T^4 + 11T^2 + 25 has no real roots but h_real = T^2 + 1 has none either
        report = cm_check((25, 0, 11, 0, 1), 5, irreducible=True)
        self.assertFalse(report.is_cm)
        self.assertTrue(report.no_real_roots)
        self.assertEqual(report.real_roots_of_h_real, 0)


class QuarticOracleTest(SimpleTestCase):
    def test_groups(self):
        self.assertEqual(quartic_galois_oracle((1, 1, 1, 1, 1)), "C4")
        self.assertEqual(quartic_galois_oracle((1, 0, 0, 0, 1)), "V4")
        self.assertEqual(quartic_galois_oracle((-2, 0, 0, 0, 1)), "D4")
        self.assertEqual(quartic_galois_oracle((1, 1, 0, 0, 1)), "S4")
        self.assertEqual(quartic_galois_oracle((12, 8, 0, 0, 1)), "A4")

    def test_rejects_bad_input(self):
        with self.assertRaises(NotQuartic):
            quartic_galois_oracle(WORKED_H)
        with self.assertRaises(NotIrreducible):
            quartic_galois_oracle((2, 0, 3, 0, 1))


class CertifyWeylTest(SimpleTestCase):
    def test_worked_certificate(self):
        certificate = certify_weyl(WORKED_H, 5, 1, prime_budget=50)
        self.assertEqual(certificate.status, CERTIFIED)
        self.assertTrue(all(certificate.criteria_met.values()))
        self.assertIn((3, SignedCycleType.parse("1-")), certificate.evidence)

    def test_refutations(self):
        cases = [
            ((25, 0, 10, 0, 1), "NotSquarefree"),
            ((25, 0, 6, 0, 1), "Reducible"),
            ((4, 2, 1), "NotCMSymmetric"),
            ((25, 0, 11, 0, 1), "NotCM"),
        ]
        for h, reason in cases:
            certificate = certify_weyl(h, 5, 1, prime_budget=20)
            self.assertEqual(certificate.status, REFUTED, h)
            self.assertEqual(certificate.refutation_reason, reason, h)

    def test_certified_quartics_are_d4(self):
        for q in (7, 11, 13):
            for t in range(q):
                try:
                    curve = specialize_curve(2, q, 1, t)
                except NotSquarefree:
                    continue
                h = zeta_numerator(curve).h_coeffs
                certificate = certify_weyl(h, q, 1, prime_budget=100, use_oracle=False)
                if certificate.is_certified:
                    self.assertEqual(quartic_galois_oracle(h), "D4", h)

    def test_adversarial_quartics_are_never_certified(self):
        # Roots on the unit circle, so both are CM with weight 1
        for h, group in (((1, 1, 1, 1, 1), "C4"), ((1, 0, 0, 0, 1), "V4")):
            certificate = certify_weyl(h, 5, 1, prime_budget=50, w=1)
            self.assertEqual(certificate.status, REFUTED, h)
            self.assertEqual(certificate.refutation_reason, "OracleGroup", h)
            self.assertEqual(certificate.oracle_label, group)
            self.assertEqual(certificate.witness, {"group": group})
            self.assertTrue(certificate.criteria_met["cm"])
            # No prime gives the (1+, 1-) kernel witness in a C4 or V4 field
            unaided = certify_weyl(h, 5, 1, prime_budget=50, w=1, use_oracle=False)
            self.assertEqual(unaided.status, INCONCLUSIVE, h)
            self.assertFalse(unaided.criteria_met["kernel_full"])

    def test_d4_quartic_with_real_roots_is_not_cm(self):
        certificate = certify_weyl((-2, 0, 0, 0, 1), 5, 1, prime_budget=50, w=1)
        self.assertEqual(quartic_galois_oracle((-2, 0, 0, 0, 1)), "D4")
        self.assertEqual(certificate.status, REFUTED)
        self.assertEqual(certificate.refutation_reason, "NotCM")

    def test_d4_quartics_are_certified(self):
        found = 0
        for q in (7, 11):
            for t in range(q):
                try:
                    curve = specialize_curve(2, q, 1, t)
                except NotSquarefree:
                    continue
                h = zeta_numerator(curve).h_coeffs
                try:
                    group = quartic_galois_oracle(h)
                except NotIrreducible:
                    continue
                if group == "D4":
                    found += 1
                    self.assertEqual(certify_weyl(h, q, 1, prime_budget=200).status, CERTIFIED, h)
        self.assertGreater(found, 0)

    def test_larger_budgets_keep_the_verdict(self):
        statuses = [certify_weyl(WORKED_H, 5, 1, prime_budget=budget).status for budget in range(1, 8)]
        # 2 is ramified and 3 gives the kernel witness
        self.assertEqual(statuses[0], INCONCLUSIVE)
        self.assertEqual(set(statuses[1:]), {CERTIFIED})
        for h in ((25, 0, 6, 0, 1), (-5, 0, 1)):
            self.assertEqual({certify_weyl(h, 5, 1, prime_budget=budget).status for budget in (1, 5, 20)}, {REFUTED})

    def test_refutation_witnesses_reverify(self):
        reducible = certify_weyl((25, 0, 6, 0, 1), 5, 1, prime_budget=20)
        product = as_poly((1,))
        for factor, k in reducible.witness["factors"]:
            product *= as_poly(factor) ** k
        self.assertEqual(coefficients(product), (25, 0, 6, 0, 1))

        not_cm = certify_weyl((-5, 0, 1), 5, 1, prime_budget=20)
        root = not_cm.witness["real_root"]
        self.assertAlmostEqual(root * root, 5, places=9)
        low, high = (float(Fraction(end)) for end in not_cm.witness["interval"])
        self.assertTrue(low - 1e-12 <= root <= high + 1e-12)

    def test_certificate_to_dict(self):
        data = certify_weyl(WORKED_H, 5, 1, prime_budget=50).to_dict()
        self.assertEqual(data["status"], "Certified")
        self.assertIn([3, "1-"], data["evidence"])

    def test_witness_predicates(self):
        self.assertTrue(is_transposition_type((1, 2)))
        self.assertFalse(is_transposition_type((2, 2)))
        self.assertTrue(is_kernel_witness(SignedCycleType.parse("1+,1-"), 2))
        self.assertFalse(is_kernel_witness(SignedCycleType.parse("1-,1-"), 2))
        self.assertFalse(is_kernel_witness(SignedCycleType.parse("2-"), 2))


# =============================================================================
# Census Tests
# =============================================================================


class SplitCensusTest(SimpleTestCase):
    def test_worked_census(self):
        report = split_census(WORKED_H, WORKED_REAL, 50)
        self.assertEqual(report.split_primes, [5, 13, 17, 29, 37, 41])
        self.assertEqual(report.ramified, 1)
        self.assertEqual(report.primes_scanned, 15)
        self.assertEqual(report.D, 16)

    def test_gaussian_primes_split(self):
        report = split_census(WORKED_H, WORKED_REAL, 10**4)
        self.assertEqual(report.split_primes, [p for p in primerange(3, 10**4 + 1) if p % 4 == 1])
        self.assertEqual(report.ramified, 1)

    @tag("slow")
    def test_density_up_to_a_million(self):
        report = split_census(WORKED_H, WORKED_REAL, 10**6)
        self.assertEqual(report.primes_scanned, 78498)
        self.assertLess(report.z_score(), 4)
        self.assertAlmostEqual(report.density_estimate, 0.5, delta=4 * (0.25 / report.unramified) ** 0.5)

    def test_restrict_matches_smaller_census(self):
        report = split_census(WORKED_H, WORKED_REAL, 1000)
        self.assertEqual(report.restrict(100).rows, split_census(WORKED_H, WORKED_REAL, 100).rows)

    def test_prime_cap(self):
        with self.assertRaises(BudgetExceeded):
            split_census(WORKED_H, WORKED_REAL, 1000, prime_cap=100)

    def test_counting_curve(self):
        curve = split_census(WORKED_H, WORKED_REAL, 50).counting_curve([10, 50, 100])
        self.assertEqual([(x, count) for x, count, _ in curve], [(10, 1), (50, 6)])

    def test_expected_density(self):
        self.assertEqual(expected_split_density(1), Fraction(1, 2))
        self.assertEqual(expected_split_density(2), Fraction(1, 8))

    def test_find_split_prime_below(self):
        self.assertEqual(find_split_prime_below(WORKED_H, WORKED_REAL, 10), 5)
        self.assertIsNone(find_split_prime_below(WORKED_H, WORKED_REAL, 4))


class SequenceConditionTest(SimpleTestCase):
    def test_lemma_condition(self):
        report = split_census(WORKED_H, WORKED_REAL, 400)
        strict = lemma31_condition1(report, 1.0)
        self.assertFalse(strict.holds)
        self.assertAlmostEqual(strict.bound, 327.69, places=1)
        self.assertEqual(strict.count, split_count_below_lemma_bound(report))
        self.assertTrue(lemma31_condition1(report, 0.1).holds)

    def test_lemma_needs_large_census(self):
        with self.assertRaises(InsufficientCensus):
            lemma31_condition1(split_census(WORKED_H, WORKED_REAL, 100), 1.0)

    def test_degenerate_discriminant(self):
        report = dataclasses.replace(split_census(WORKED_H, WORKED_REAL, 100), D=2)
        with self.assertRaises(DegenerateD):
            lemma31_condition1(report, 1.0)
        self.assertEqual(split_count_below_lemma_bound(report), 0)

    def test_disc_window(self):
        self.assertFalse(disc_window(16, 5, 1, 1, 1, 1).holds)
        self.assertTrue(disc_window(16, 5, 1, 1, 1, 4).holds)

    def test_disc_window_boundary_is_exact(self):
        # q^{n/32} = 5 exactly when n = 32
        verdict = disc_window(5, 5, 32, 1, 1, 1)
        self.assertTrue(verdict.lower_holds)
        self.assertFalse(disc_window(4, 5, 32, 1, 1, 1).lower_holds)
