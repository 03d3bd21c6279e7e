"""
Tests for the forge app.

Run with: uv run python manage.py test forge
"""

import json
import math
import tempfile
from collections import Counter
from fractions import Fraction
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, tag
from sympy import primerange

from arithmetic.census import split_census, split_count_below_lemma_bound
from arithmetic.errors import (
    BadMultiplier,
    ConfigError,
    ConflictingConstraints,
    EmptyWindow,
    EnumerationTooLarge,
    InternalError,
    NotPrime,
)
from arithmetic.weilpoly import CycleTypeClassifier, SignedCycleType

from .experiment import ExperimentConfig
from .family import (
    INERT_PAIR,
    REPEATED_ROOT,
    SPLIT_COMPLETELY,
    TYPE_EQUALS,
    LocalCondition,
    SequenceParams,
    auxiliary_primes,
    build_sequence,
    equidistribution_table,
    family_member,
    family_type_distribution,
    lemma_bound,
    ramification_primes,
    scan_family,
    validate_conditions,
)
from .models import CandidateRow, ExperimentRun, save_run
from .runner import STDOUT, run
from .selftest import run_checks
from .sympstat import (
    EXACT,
    MONTE_CARLO,
    SymplecticMatrix,
    TypeDistribution,
    charpoly_type,
    charpolys,
    coset_type_distribution,
    derive_rng,
    enumerate_sp,
    matrix_type,
    similitude_holds,
    sp_order,
    sp_sample,
    split_class_fraction,
    tv_distance,
)

WORKED_H = (5, 2, 1)


def _weights(distribution: TypeDistribution) -> dict[str, Fraction]:
    return {str(t): w for t, w in distribution.weights.items()}


# =============================================================================
# Symplectic Group Tests
# =============================================================================


class SymplecticOrderTest(SimpleTestCase):
    def test_orders(self):
        self.assertEqual(sp_order(1, 3), 24)
        self.assertEqual(sp_order(1, 5), 120)
        self.assertEqual(sp_order(2, 3), 51840)

    def test_enumeration_is_the_whole_group(self):
        group = enumerate_sp(1, 5)
        self.assertEqual(group.shape, (120, 2, 2))
        self.assertTrue(similitude_holds(group, 5, 1))

    def test_enumeration_cap(self):
        with self.assertRaises(EnumerationTooLarge):
            enumerate_sp(2, 5, cap=10**6)


class SymplecticMatrixTest(SimpleTestCase):
    def test_transvection(self):
        M = SymplecticMatrix(entries=np.array([[1, 1], [0, 1]]), l=5, g=1, multiplier=1)
        self.assertEqual(M.det, 1)
        self.assertEqual(M.charpoly(), (1, 3, 1))

    def test_rejects_non_similitude(self):
        with self.assertRaises(InternalError):
            SymplecticMatrix(entries=np.array([[1, 1], [1, 1]]), l=5, g=1, multiplier=1)

    def test_sample_lies_in_coset(self):
        M = sp_sample(2, 3, 2, derive_rng(0, 0), length=20)
        self.assertTrue(similitude_holds(M.entries, 3, 2))

    def test_determinant_is_exact(self):
        # det of a multiplier-gamma similitude is gamma^g
        M = sp_sample(3, 1009, 5, derive_rng(0, 0), length=40)
        self.assertEqual(M.det, 125)

    def test_bad_group_parameters(self):
        with self.assertRaises(NotPrime):
            coset_type_distribution(1, 9, 1)
        with self.assertRaises(BadMultiplier):
            coset_type_distribution(1, 5, 10)


class CharpolyTest(SimpleTestCase):
    def test_identity(self):
        identity = np.eye(4, dtype=np.int64)[np.newaxis]
        # (T - 1)^4 mod 3
        self.assertEqual(charpolys(identity, 3)[0].tolist(), [1, 2, 0, 2, 1])

    def test_batch_matches_single(self):
        group = enumerate_sp(1, 3)
        batch = charpolys(group, 3)
        for k in (0, 5, 17):
            trace = int(group[k].trace()) % 3
            self.assertEqual(batch[k].tolist(), [1, (-trace) % 3, 1])

    def test_types(self):
        self.assertEqual(str(charpoly_type((1, 0, 1), 3, 1)), "1-")
        self.assertEqual(str(charpoly_type((1, 0, 2), 3, 2)), "1+")
        self.assertEqual(str(charpoly_type((1, 1, 1), 3, 1)), "NonRegular")

    def test_matrix_type(self):
        rotation = SymplecticMatrix(entries=np.array([[0, 1], [2, 0]]), l=3, g=1, multiplier=1)
        self.assertEqual(str(matrix_type(rotation)), "1-")
        # Eigenvalues 2 and 3 = 2^-1 mod 5
        split = SymplecticMatrix(entries=np.array([[2, 0], [0, 3]]), l=5, g=1, multiplier=1)
        self.assertEqual(str(matrix_type(split)), "1+")
        identity = SymplecticMatrix(entries=np.eye(2, dtype=np.int64), l=5, g=1, multiplier=1)
        self.assertEqual(str(matrix_type(identity)), "NonRegular")

    def test_agrees_with_field_classification(self):
        checked = 0
        for t in (0, 5, 6):
            weil = family_member(2, 7, 1, t)
            classifier = CycleTypeClassifier(weil.h_coeffs, None, weil.w)
            for l in primerange(3, 80):
                if l == 7 or classifier.is_ramified(l):
                    continue
                coeffs = tuple(c % l for c in reversed(weil.h_coeffs))
                self.assertEqual(charpoly_type(coeffs, l, 7 % l), classifier.classify(l), (t, l))
                checked += 1
        self.assertGreater(checked, 0)

    def test_sampled_matrix_types_are_coset_types(self):
        distribution = coset_type_distribution(1, 5, 2)
        for index in range(5):
            M = sp_sample(1, 5, 2, derive_rng(3, index), length=30)
            self.assertIn(matrix_type(M), distribution.weights)


class CosetDistributionTest(SimpleTestCase):
    def test_sl2_f3(self):
        distribution = coset_type_distribution(1, 3, 1)
        self.assertEqual(distribution.provenance, EXACT)
        self.assertEqual(_weights(distribution), {"1-": Fraction(1, 4), "NonRegular": Fraction(3, 4)})

    def test_sl2_f5(self):
        self.assertEqual(
            _weights(coset_type_distribution(1, 5, 1)),
            {"1+": Fraction(1, 4), "1-": Fraction(1, 3), "NonRegular": Fraction(5, 12)},
        )

    def test_det_two_coset(self):
        self.assertEqual(_weights(coset_type_distribution(1, 3, 2)), {"1+": Fraction(1, 2), "1-": Fraction(1, 2)})

    def test_alternative_representative(self):
        standard = coset_type_distribution(1, 5, 2)
        alternative = coset_type_distribution(1, 5, 2, alternative_representative=True)
        self.assertEqual(standard.weights, alternative.weights)

    def test_split_class_fraction(self):
        self.assertEqual(split_class_fraction(1, 3), Fraction(0))
        self.assertEqual(split_class_fraction(1, 5), Fraction(1, 4))

    def test_monte_carlo_tolerance(self):
        distribution = coset_type_distribution(1, 5, 1, mode="montecarlo", samples=20_000, seed=7)
        self.assertEqual(distribution.provenance, MONTE_CARLO)
        self.assertEqual(distribution.sample_count, 20_000)
        self.assertAlmostEqual(distribution.weight("1+"), 0.25, delta=0.02)
        self.assertAlmostEqual(distribution.weight("1-"), 1 / 3, delta=0.02)

    @tag("slow")
    def test_monte_carlo_split_fractions(self):
        self.assertAlmostEqual(split_class_fraction(1, 5, mode="montecarlo", samples=100_000, seed=3), 0.25, delta=0.02)
        for l in (101, 211):
            estimate = split_class_fraction(1, l, mode="montecarlo", samples=100_000, seed=l)
            self.assertAlmostEqual(estimate, 0.5, delta=0.05, msg=l)

    @tag("slow")
    def test_independent_seeds_agree(self):
        first = coset_type_distribution(1, 101, 1, mode="montecarlo", samples=100_000, seed=1)
        second = coset_type_distribution(1, 101, 1, mode="montecarlo", samples=100_000, seed=2)
        self.assertLess(tv_distance(first, second), 0.02)

    def test_monte_carlo_is_deterministic(self):
        first = coset_type_distribution(1, 7, 3, mode="montecarlo", samples=2_000, seed=11)
        second = coset_type_distribution(1, 7, 3, mode="montecarlo", samples=2_000, seed=11)
        self.assertEqual(first.weights, second.weights)


class TypeDistributionTest(SimpleTestCase):
    def setUp(self):
        split = SignedCycleType.parse("1+")
        self.family = TypeDistribution.from_counts(
            Counter({split: 1, SignedCycleType.ramified(): 1}), "FamilyEmpirical", exact=True
        )
        self.group = TypeDistribution.from_counts(
            Counter({split: 1, SignedCycleType.nonregular(): 1}), EXACT, exact=True
        )

    def test_alignment_moves_ramified_mass(self):
        self.assertEqual(tv_distance(self.family, self.group), Fraction(1, 2))
        self.assertEqual(tv_distance(self.family.aligned(), self.group), Fraction(0))

    def test_conditioned_on_regular(self):
        self.assertEqual(_weights(self.family.conditioned_on_regular()), {"1+": Fraction(1)})

    def test_serialization(self):
        data = self.group.to_dict()
        self.assertEqual(data["weights"], {"1+": "1/2", "NonRegular": "1/2"})
        self.assertEqual(data["weights_float"]["1+"], 0.5)


# =============================================================================
# Family Tests
# =============================================================================


class LocalConditionTest(SimpleTestCase):
    def test_parse(self):
        condition = LocalCondition.parse("type_equals@7:1+,1-")
        self.assertEqual(condition.kind, TYPE_EQUALS)
        self.assertEqual(condition.prime, 7)
        self.assertEqual(str(condition), "type_equals@7:1+,1-")
        self.assertEqual(str(LocalCondition.parse("split_completely@3")), "split_completely@3")

    def test_unknown_kind(self):
        with self.assertRaises(ConfigError):
            LocalCondition.parse("bogus@3")
        with self.assertRaises(ConfigError):
            LocalCondition(7, TYPE_EQUALS)

    def test_validation(self):
        with self.assertRaises(NotPrime):
            validate_conditions([LocalCondition(4, SPLIT_COMPLETELY)], 5)
        with self.assertRaises(ConflictingConstraints):
            validate_conditions([LocalCondition(5, SPLIT_COMPLETELY)], 5)
        with self.assertRaises(ConflictingConstraints):
            validate_conditions([LocalCondition(3, SPLIT_COMPLETELY), LocalCondition(3, REPEATED_ROOT)], 5)

    def test_conditions_on_worked_polynomial(self):
        weil = scan_family(5, 1, 1)[0].weil
        self.assertTrue(LocalCondition(2, REPEATED_ROOT).holds(weil))
        self.assertFalse(LocalCondition(3, SPLIT_COMPLETELY).holds(weil))
        self.assertTrue(LocalCondition(13, SPLIT_COMPLETELY).holds(weil))
        self.assertTrue(LocalCondition(3, INERT_PAIR).holds(weil))
        self.assertTrue(LocalCondition(3, TYPE_EQUALS, SignedCycleType.parse("1-")).holds(weil))


class ScanFamilyTest(SimpleTestCase):
    def test_worked_scan(self):
        records = scan_family(5, 1, 1)
        self.assertEqual([r.t_index for r in records], [0, 3, 4])
        self.assertEqual([r.h for r in records], [(5, 2, 1), (5, 2, 1), (5, -2, 1)])
        self.assertEqual([r.multiplicity for r in records], [2, 2, 1])
        self.assertTrue(all(r.weil_valid for r in records))
        self.assertEqual(records[0].D, 16)

    def test_constraints_filter(self):
        condition = LocalCondition(3, SPLIT_COMPLETELY)
        everything = scan_family(7, 2, 1)
        constrained = scan_family(7, 2, 1, [condition])
        self.assertEqual(
            [r.t_index for r in constrained],
            [r.t_index for r in everything if condition.holds(r.weil)],
        )
        self.assertTrue(all(r.recheck_conditions() for r in constrained))

    def test_filters_match_post_hoc_selection(self):
        texts = ("repeated_root@3", "split_completely@3", "split_completely@13", "inert_pair@3", "type_equals@7:1-")
        for n in (1, 2):
            everything = scan_family(5, n, 1)
            for text in texts:
                condition = LocalCondition.parse(text)
                constrained = scan_family(5, n, 1, [condition])
                self.assertEqual(
                    [r.t_index for r in constrained],
                    [r.t_index for r in everything if condition.holds(r.weil)],
                    (n, text),
                )
                l = condition.prime
                for r in constrained:
                    if condition.kind == REPEATED_ROOT:
                        self.assertEqual(r.D % l, 0)
                    if condition.kind == SPLIT_COMPLETELY:
                        roots = [x for x in range(l) if sum(c * x**i for i, c in enumerate(r.h)) % l == 0]
                        self.assertEqual(len(roots), 2, (n, r.h))

    def test_repeated_root_forces_ramification(self):
        records = scan_family(5, 2, 1, [LocalCondition(3, REPEATED_ROOT)])
        self.assertTrue(records)
        self.assertTrue(all(r.D % 3 == 0 for r in records))

    def test_stride(self):
        self.assertEqual([r.t_index for r in scan_family(7, 1, 1, stride=3)], [0, 3, 6])

    def test_certify_and_census(self):
        records = scan_family(5, 1, 1, certify=True, census_bound=50)
        self.assertTrue(all(r.certificate.is_certified for r in records))
        self.assertEqual(records[0].census.split_primes, [5, 13, 17, 29, 37, 41])
        data = records[0].to_dict()
        self.assertEqual(data["h"], [5, 2, 1])
        self.assertEqual(data["D"], "16")
        self.assertEqual(data["certificate"]["status"], "Certified")

    def test_type_distribution(self):
        self.assertEqual(_weights(family_type_distribution(5, 1, 1, 3)), {"1-": Fraction(1)})
        self.assertEqual(_weights(family_type_distribution(5, 1, 1, 13)), {"1+": Fraction(1)})


class EquidistributionTest(SimpleTestCase):
    def test_single_row(self):
        (row,) = equidistribution_table(5, 1, 3, [1])
        self.assertEqual(row.gamma, 2)
        self.assertEqual(row.tv, Fraction(1, 2))
        self.assertEqual(row.tv_regular, Fraction(1, 2))
        self.assertEqual(row.family_split_mass, Fraction(0))
        self.assertAlmostEqual(row.error_constant, 0.5 * 5**0.5 / 24)

    def test_trend_and_even_degree_obstruction(self):
        rows = {row.n: row for row in equidistribution_table(5, 1, 3, [1, 2, 4])}
        # 5^n = 1 mod 3 for even n, and SL_2(F_3) has no split regular elements
        self.assertEqual(rows[2].gamma, 1)
        self.assertEqual(rows[2].family_split_mass, Fraction(0))
        self.assertEqual(rows[4].family_split_mass, Fraction(0))
        self.assertLess(rows[4].tv, rows[1].tv)


class SequenceTest(SimpleTestCase):
    def test_ramification_primes(self):
        self.assertEqual(ramification_primes(5, 32, Fraction(1, 32)), (3,))
        self.assertEqual(ramification_primes(11, 2, Fraction(1, 1)), (3, 5, 7))
        self.assertEqual(ramification_primes(5, 1, Fraction(1, 8)), ())

    def test_ramification_window_missed(self):
        # 3 is below 7/2 and 3 * 5 exceeds 2 * 7
        with self.assertRaises(EmptyWindow):
            ramification_primes(7, 1, Fraction(1))

    def test_asymptotic_window_is_empty_for_small_n(self):
        with self.assertRaises(EmptyWindow):
            build_sequence(5, 1, [1])

    def test_auxiliary_window(self):
        params = SequenceParams(preset="desk")
        self.assertEqual(params.window(1), (2, 8))
        self.assertEqual(auxiliary_primes(5, 1, params), (3, 7))
        with self.assertRaises(EmptyWindow):
            auxiliary_primes(5, 1, params, excluded=(3, 7))

    def test_asymptotic_preset(self):
        params = SequenceParams(preset="asymptotic")
        self.assertEqual(params.window(2), (32, 64))
        self.assertEqual(params.exponent(2), Fraction(1, 128))
        self.assertEqual(SequenceParams(preset="desk").exponent(2), Fraction(1, 32))
        self.assertEqual(SequenceParams().preset, "asymptotic")

    def test_desk_sequence(self):
        (entry,) = build_sequence(5, 1, [1], SequenceParams(preset="desk"))
        self.assertFalse(entry.is_gap)
        self.assertEqual(entry.ramification_primes, ())
        self.assertEqual(entry.auxiliary_primes, (3, 7))
        self.assertIsNone(entry.aux_prime)
        self.assertEqual(entry.certified, 3)
        self.assertEqual(entry.record.t_index, 0)
        self.assertEqual(entry.split_count, 31)
        self.assertIsNotNone(entry.lemma31)
        self.assertFalse(entry.lemma31.holds)
        self.assertFalse(entry.disc_window.holds)
        self.assertEqual(entry.to_dict()["record"]["certificate"]["status"], "Certified")

    def test_selection_maximises_split_count(self):
        for entry in build_sequence(5, 1, [1, 2], SequenceParams(preset="desk")):
            conditions = [LocalCondition(p, REPEATED_ROOT) for p in entry.ramification_primes]
            pool = [r for r in scan_family(5, entry.n, 1, conditions, certify=True) if r.certificate.is_certified]
            if entry.aux_prime is not None:
                pool = [r for r in pool if LocalCondition(entry.aux_prime, SPLIT_COMPLETELY).holds(r.weil)]
            counts = {}
            for r in pool:
                bound = lemma_bound(r.D)
                census = split_census(r.h, None, math.ceil(bound), w=r.weil.w) if bound >= 2 else None
                counts[r.t_index] = split_count_below_lemma_bound(census) if census is not None else 0

            best = max(counts.values())
            self.assertEqual(entry.split_count, best, entry.n)
            tied = [(r.D, r.t_index) for r in pool if counts[r.t_index] == best]
            self.assertEqual((entry.record.D, entry.record.t_index), min(tied), entry.n)


# =============================================================================
# Configuration Tests
# =============================================================================


class ExperimentConfigTest(SimpleTestCase):
    def test_canonical_round_trip(self):
        text = json.dumps({"g": 1, "n": 1, "q": 5, "subcommand": "zeta", "t": 0}, sort_keys=True, indent=2) + "\n"
        self.assertEqual(ExperimentConfig.from_json(text).to_json(), text)

    def test_unknown_key(self):
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({"subcommand": "zeta", "g": 1, "q": 5, "n": 1, "t": 0, "colour": 1})

    def test_missing_required(self):
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({"subcommand": "haar", "g": 1})

    def test_type_checks(self):
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({"subcommand": "haar", "g": 1, "l": "5", "gamma": 1})
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({"subcommand": "equidist", "q": 5, "g": 1, "l": 3, "n_list": [2, 1]})

    def test_unset_seed_is_omitted(self):
        config = ExperimentConfig(subcommand="haar", g=1, l=3, gamma=1)
        self.assertNotIn("master_seed", config.to_dict())
        self.assertEqual(config.seed, 0)
        self.assertEqual(ExperimentConfig.from_dict({**config.to_dict(), "master_seed": 9}).seed, 9)

    def test_malformed_values(self):
        cases = [
            {"subcommand": "forge", "q": 5, "n": 1, "g": 1, "constraints": ["repeated_root@x"]},
            {"subcommand": "forge", "q": 5, "n": 1, "g": 1, "constraints": ["type_equals@7:1x"]},
            {"subcommand": "forge", "q": 5, "n": 1, "g": 1, "constraints": "split_completely@3"},
            {"subcommand": "sequence", "q": 5, "g": 1, "n_list": [1], "c1": "abc"},
            {"subcommand": "sequence", "q": 5, "g": 1, "n_list": [1], "c2": "1/0"},
            {"subcommand": "sequence", "q": 5, "g": 1, "n_list": [1], "ramify_exponent": "-1/8"},
            {"subcommand": "haar", "g": 1, "l": 5, "gamma": 1, "mode": "montecarlo", "samples": 0},
            {"subcommand": "zeta", "g": 1, "q": 5, "n": 1, "t": 5},
            {"subcommand": "zeta", "g": 1, "q": 5, "n": 1, "t": -1},
        ]
        for data in cases:
            with self.assertRaises(ConfigError, msg=data):
                ExperimentConfig.from_dict(data)

    def test_fractions(self):
        config = ExperimentConfig.from_dict({"subcommand": "sequence", "q": 5, "g": 1, "n_list": [1], "c1": "3/2"})
        self.assertEqual(config.fraction("c1"), Fraction(3, 2))
        self.assertIsNone(config.fraction("c2"))


# =============================================================================
# Runner and Command Tests
# =============================================================================


class RunTest(SimpleTestCase):
    def test_zeta(self):
        result = run("zeta", {"g": 1, "q": 5, "n": 1, "t": 0}, write=False)
        self.assertEqual(result.exit_code, 0)
        document = json.loads(result.artifacts[STDOUT])
        self.assertEqual(document["result"]["h"], [5, 2, 1])
        self.assertEqual(document["result"]["counts"], [8])
        self.assertEqual(document["config"]["subcommand"], "zeta")
        self.assertIn("version", document)

    def test_haar(self):
        result = run("haar", {"g": 1, "l": 5, "gamma": 1}, write=False)
        weights = json.loads(result.artifacts[STDOUT])["result"]["distribution"]["weights"]
        self.assertEqual(weights["1+"], "1/4")

    def test_malformed_config(self):
        self.assertEqual(run("zeta", "{not json").exit_code, 2)
        self.assertEqual(run("zeta", {"g": 1, "q": 5, "n": 1, "t": 0, "bogus": 1}).exit_code, 2)
        self.assertEqual(run("zeta", {"subcommand": "haar", "g": 1, "l": 5, "gamma": 1}).exit_code, 2)

    def test_malformed_values_exit_two(self):
        cases = [
            ("forge", {"q": 5, "n": 1, "g": 1, "constraints": ["repeated_root@x"]}),
            ("sequence", {"q": 5, "g": 1, "n_list": [1], "c1": "abc"}),
            ("haar", {"g": 1, "l": 5, "gamma": 1, "mode": "montecarlo", "samples": 0}),
            ("zeta", {"g": 1, "q": 5, "n": 1, "t": 30}),
        ]
        for subcommand, config in cases:
            result = run(subcommand, config, write=False)
            self.assertEqual(result.exit_code, 2, subcommand)
            self.assertEqual(result.error["error"], "ConfigError")

    def test_sequence_defaults_to_asymptotic_preset(self):
        # (1, 2) holds no prime, while the desk window (2, 8) does
        result = run("sequence", {"q": 5, "g": 1, "n_list": [1]}, write=False)
        self.assertEqual(result.exit_code, 1)
        self.assertEqual(result.error["error"], "EmptyWindow")
        self.assertEqual(run("sequence", {"q": 5, "g": 1, "n_list": [1], "preset": "desk"}, write=False).exit_code, 0)

    def test_domain_error(self):
        result = run("zeta", {"g": 1, "q": 5, "n": 1, "t": 1})
        self.assertEqual(result.exit_code, 1)
        self.assertEqual(result.error["error"], "NotSquarefree")
        self.assertEqual(result.artifacts, {})

    def test_deterministic(self):
        config = {"g": 1, "l": 7, "gamma": 3, "mode": "montecarlo", "samples": 2_000, "master_seed": 5}
        self.assertEqual(run("haar", config, write=False).artifacts, run("haar", config, write=False).artifacts)

    def test_sequence_is_deterministic(self):
        config = {"q": 5, "g": 1, "n_list": [1, 2], "preset": "desk"}
        first = run("sequence", config, write=False)
        self.assertEqual(first.exit_code, 0)
        self.assertEqual(first.artifacts, run("sequence", config, write=False).artifacts)

    def test_forge_json_lines(self):
        result = run("forge", {"q": 5, "n": 1, "g": 1}, write=False)
        lines = result.artifacts[STDOUT].splitlines()
        self.assertEqual(len(lines), 4)
        self.assertEqual(json.loads(lines[0])["subcommand"], "forge")
        self.assertEqual([json.loads(line)["t_index"] for line in lines[1:]], [0, 3, 4])

    def test_files_written_atomically(self):
        with tempfile.TemporaryDirectory() as directory:
            output = Path(directory) / "census.json"
            table = Path(directory) / "census.csv"
            config = {"h": list(WORKED_H), "bound": 50, "output": str(output), "csv": str(table)}
            result = run("census", config)
            self.assertEqual(result.exit_code, 0)
            self.assertEqual(json.loads(output.read_text())["result"]["counts"]["split_completely"], 6)
            rows = table.read_text().splitlines()
            self.assertEqual(rows[:3], ["p,type", "2,Ramified", "3,1-"])
            self.assertEqual(sorted(p.name for p in Path(directory).iterdir()), ["census.csv", "census.json"])

    def test_selftest_passes(self):
        checks = run_checks()
        self.assertEqual([c["name"] for c in checks if not c["passed"]], [])


class ManagementCommandTest(SimpleTestCase):
    def test_zeta_command(self):
        out = StringIO()
        call_command("zeta", g=1, q=5, n=1, t=4, stdout=out)
        self.assertEqual(json.loads(out.getvalue())["result"]["h"], [5, -2, 1])

    def test_config_file_with_override(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "haar.json"
            path.write_text(ExperimentConfig(subcommand="haar", g=1, l=3, gamma=1).to_json())
            out = StringIO()
            call_command("haar", config=str(path), gamma=2, stdout=out)
            document = json.loads(out.getvalue())
            self.assertEqual(document["config"]["gamma"], 2)
            self.assertEqual(document["result"]["distribution"]["weights"], {"1+": "1/2", "1-": "1/2"})

    def test_configuration_error_exit_code(self):
        with self.assertRaises(CommandError) as raised:
            call_command("haar", g=1, l=5, stdout=StringIO())
        self.assertEqual(raised.exception.returncode, 2)

    def test_domain_error_exit_code(self):
        with self.assertRaises(CommandError) as raised:
            call_command("haar", g=1, l=5, gamma=5, stdout=StringIO())
        self.assertEqual(raised.exception.returncode, 1)
        self.assertEqual(json.loads(str(raised.exception))["error"], "BadMultiplier")


# =============================================================================
# Model Tests
# =============================================================================


class SaveRunTest(TestCase):
    def test_forge_run_is_indexed(self):
        config = ExperimentConfig(subcommand="forge", q=5, n=1, g=1, certify=True)
        result = run("forge", config, write=False)
        saved = save_run("forge", config, result)

        self.assertEqual(ExperimentRun.objects.count(), 1)
        self.assertEqual(saved.config_text, config.to_json())
        self.assertEqual(saved.candidates.count(), 3)
        first = CandidateRow.objects.filter(run=saved).first()
        self.assertEqual(first.t_index, 0)
        self.assertEqual(first.status, "Certified")
        self.assertEqual(first.discriminant, "16")
        self.assertEqual(str(first), "n=1 t=0 (Certified)")

    def test_forge_command_saves(self):
        call_command("forge", q=5, n=1, g=1, save=True, stdout=StringIO(), stderr=StringIO())
        run_row = ExperimentRun.objects.get()
        self.assertEqual(run_row.subcommand, "forge")
        self.assertEqual(
            list(run_row.candidates.values_list("h", flat=True)), [["5", "2", "1"], ["5", "2", "1"], ["5", "-2", "1"]]
        )
