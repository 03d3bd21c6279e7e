"""
Oracle checks run by the ``selftest`` subcommand.

Each check compares a library result with a value derived by hand (exhaustive
enumeration, direct reduction, or arithmetic), so a broken installation shows up
before any long experiment is started.
"""

import logging
from fractions import Fraction

from arithmetic.census import disc_window, find_split_prime_below, split_census
from arithmetic.curvezeta import WeilPolynomial, count_points, specialize_curve, validate_weil, zeta_numerator
from arithmetic.ffield import build_field
from arithmetic.weilpoly import factor_mod_l, poly_discriminant, real_subfield_poly, signed_cycle_type
from arithmetic.weylcert import certify_weyl, quartic_galois_oracle

from .sympstat import coset_type_distribution, split_class_fraction

logger = logging.getLogger(__name__)

WORKED_H = (5, 2, 1)  # T^2 + 2T + 5


def _curve(t):
    return specialize_curve(1, 5, 1, t)


def _weights(distribution) -> dict[str, str]:
    return {str(t): str(w) for t, w in distribution.weights.items()}


CHECKS = [
    ("modulus of F_25", lambda: build_field(5, 2).modulus, (2, 0, 1)),
    ("#C(F_5), t = 0", lambda: count_points(_curve(0), 1), 8),
    ("#C(F_25), t = 0", lambda: count_points(_curve(0), 2), 32),
    ("#C(F_5), t = 4", lambda: count_points(_curve(4), 1), 4),
    ("h, t = 0", lambda: zeta_numerator(_curve(0)).h_coeffs, (5, 2, 1)),
    ("h, t = 4", lambda: zeta_numerator(_curve(4)).h_coeffs, (5, -2, 1)),
    ("h, t = 3", lambda: zeta_numerator(_curve(3)).h_coeffs, (5, 2, 1)),
    ("Weil bound of T^2 + 5T + 5", lambda: validate_weil(WeilPolynomial((5, 5, 1), 1, 5, 1)).passed, False),
    ("T^2 + 2T + 5 mod 2", lambda: factor_mod_l(WORKED_H, 2).factors, ((1, 2),)),
    ("T^2 + 2T + 5 mod 3", lambda: factor_mod_l(WORKED_H, 3).factors, ((2, 1),)),
    ("disc(T^2 + 2T + 5)", lambda: poly_discriminant(WORKED_H), -16),
    ("real subfield of T^2 + 2T + 5", lambda: real_subfield_poly(WORKED_H, 5), (2, 1)),
    ("type at 13", lambda: str(signed_cycle_type(WORKED_H, (2, 1), 13)), "1+"),
    ("type at 3", lambda: str(signed_cycle_type(WORKED_H, (2, 1), 3)), "1-"),
    ("type at 2", lambda: str(signed_cycle_type(WORKED_H, (2, 1), 2)), "Ramified"),
    ("certificate of T^2 + 2T + 5", lambda: certify_weyl(WORKED_H, 5, 1, 50).status, "Certified"),
    ("group of T^4 + T^3 + T^2 + T + 1", lambda: quartic_galois_oracle((1, 1, 1, 1, 1)), "C4"),
    ("group of T^4 + 1", lambda: quartic_galois_oracle((1, 0, 0, 0, 1)), "V4"),
    ("group of T^4 - 2", lambda: quartic_galois_oracle((-2, 0, 0, 0, 1)), "D4"),
    ("split primes of T^2 + 2T + 5 up to 50", lambda: split_census(WORKED_H, (2, 1), 50).split_primes, [5, 13, 17, 29, 37, 41]),
    ("first split prime below 10", lambda: find_split_prime_below(WORKED_H, (2, 1), 10), 5),
    ("disc window c2 = 1", lambda: disc_window(16, 5, 1, 1, 1, 1).holds, False),
    ("disc window c2 = 4", lambda: disc_window(16, 5, 1, 1, 1, 4).holds, True),
    ("split class fraction of SL_2(F_3)", lambda: split_class_fraction(1, 3), Fraction(0)),
    ("split class fraction of SL_2(F_5)", lambda: split_class_fraction(1, 5), Fraction(1, 4)),
    (
        "det-2 coset of GL_2(F_3)",
        lambda: _weights(coset_type_distribution(1, 3, 2)),
        {"1+": "1/2", "1-": "1/2"},
    ),
]


def run_checks() -> list[dict]:
    results = []
    for name, compute, expected in CHECKS:
        try:
            actual = compute()
        except Exception as e:  # a crashing check is a failed check
            logger.exception(f"Selftest check '{name}' raised")
            actual = f"{type(e).__name__}: {e}"
        passed = actual == expected
        if not passed:
            logger.warning(f"Selftest check '{name}' failed: expected {expected!r}, got {actual!r}")
        results.append({"name": name, "passed": passed, "expected": repr(expected), "actual": repr(actual)})
    return results
