"""
Tests for Prenex* normalization and the Delta0 / Pi / Sigma classification
"""

import unittest

from src.errors import NotClosedError, NotPrenexError
from src.generators import make_rng, random_delta0_sentence, random_sentence
from src.lang import alpha_equal, parse_formula
from src.models import PrenexClass, PrenexShape
from src.prenex import classify, is_prenex, strip_leading_block, to_prenex, truncate
from src.semantics import decide_delta0

ADDITION_TOTAL = "A x. A y. E z. sub(z, x) = y"
DIVISION_TOTAL = "A x. A y. E z. ~(x <= C0) -> div(z, x) = y"
ADDITION_COMMUTES = "A x. A y. x + y = y + x"
ADDITION_BOUNDED = "A x. A y. E z <= x + y. sub(z, x) = y"


class TestClassify(unittest.TestCase):
    def test_arithmetic_examples(self):
        cases = {
            ADDITION_TOTAL: "Pi(2)",
            DIVISION_TOTAL: "Pi(2)",
            ADDITION_COMMUTES: "Pi(1)",
            ADDITION_BOUNDED: "Pi(1)",
        }
        for text, label in cases.items():
            with self.subTest(text=text):
                self.assertEqual(classify(parse_formula(text)).label, label)

    def test_delta0(self):
        rng = make_rng(1)
        for _ in range(50):
            shape = classify(random_delta0_sentence(rng, 3))
            self.assertEqual(shape.shape, PrenexShape.DELTA0)
            self.assertEqual(shape.rank, 0)

    def test_sigma(self):
        shape = classify(parse_formula("E x. A y. E z. x + y <= z"))
        self.assertEqual((shape.shape, shape.rank), (PrenexShape.SIGMA, 3))

    def test_not_prenex(self):
        with self.assertRaises(NotPrenexError):
            classify(parse_formula("(A x. x = x) & C0 = C0"))
        self.assertFalse(is_prenex(parse_formula("~(A x. x = x)")))

    def test_inclusion_chain(self):
        pi1 = PrenexClass(shape=PrenexShape.PI, rank=1)
        self.assertTrue(pi1.within_pi(1))
        self.assertTrue(pi1.within_sigma(2))
        self.assertFalse(pi1.within_sigma(1))
        delta0 = PrenexClass(shape=PrenexShape.DELTA0, rank=0)
        self.assertTrue(delta0.within_pi(0) and delta0.within_sigma(0))

    def test_rank_validation(self):
        with self.assertRaises(ValueError):
            PrenexClass(shape=PrenexShape.PI, rank=0)


class TestToPrenex(unittest.TestCase):
    def test_negation_push(self):
        result = to_prenex(parse_formula("~(A x. x = x)"))
        self.assertEqual(result, parse_formula("E x. ~(x = x)"))

    def test_fixpoint(self):
        for text in (ADDITION_TOTAL, ADDITION_BOUNDED, DIVISION_TOTAL):
            f = parse_formula(text)
            self.assertTrue(alpha_equal(to_prenex(f), f))

    def test_conjunction_of_universals(self):
        result = to_prenex(parse_formula("(A x. x = x) & (A y. y <= y)"))
        self.assertEqual(result, parse_formula("A x. A y. x = x & y <= y"))

    def test_clashing_names_are_renamed_apart(self):
        result = to_prenex(parse_formula("(A x. x = x) & (A x. x <= x)"))
        self.assertTrue(alpha_equal(result, parse_formula("A x. A y. x = x & y <= y")))

    def test_antecedent_flips(self):
        result = to_prenex(parse_formula("(A x. x = C0) -> C0 = C1"))
        self.assertEqual(result, parse_formula("E x. x = C0 -> C0 = C1"))

    def test_bounded_quantifier_over_unbounded_is_unfolded(self):
        result = to_prenex(parse_formula("A x <= C2. E y. x <= y"))
        self.assertEqual(result, parse_formula("A x. E y. x <= C2 -> x <= y"))
        self.assertEqual(classify(result).label, "Pi(2)")

    def test_open_formula_rejected(self):
        with self.assertRaises(NotClosedError):
            to_prenex(parse_formula("A x. x = y"))

    def test_classification_never_fails(self):
        rng = make_rng(9)
        for _ in range(500):
            classify(to_prenex(random_sentence(rng, 4)))

    def test_stripping_a_block_lowers_the_rank(self):
        rng = make_rng(10)
        checked = 0
        for _ in range(500):
            s = to_prenex(random_sentence(rng, 4))
            shape = classify(s)
            if shape.shape == PrenexShape.PI and shape.rank >= 2:
                inner = classify(strip_leading_block(s))
                self.assertEqual((inner.shape, inner.rank), (PrenexShape.SIGMA, shape.rank - 1))
                checked += 1
        self.assertGreater(checked, 0)


class TestTruncationOracle(unittest.TestCase):
    # bounded quantifiers over unbounded ones, with bounds above B
    UNFOLDED = {
        "A x <= double(double(double(C2))). E y. x <= y & y <= x": False,
        "~(A x <= double(double(double(C2))). E y. x <= y & y <= x)": True,
        "E x <= double(double(double(C2))). A y. ~(x <= y)": True,
        "(E x <= double(double(C2)). A y. y <= x) -> C0 = C1": False,
        "A z <= C2. A x <= double(double(double(C2))). E y. x <= y + z": False,
    }

    def test_unfolded_bounds_survive_truncation(self):
        for text, expected in self.UNFOLDED.items():
            f = parse_formula(text)
            for bound in (4, 8):
                with self.subTest(text=text, bound=bound):
                    self.assertEqual(decide_delta0(truncate(f, bound)), expected)
                    self.assertEqual(decide_delta0(truncate(to_prenex(f), bound)), expected)

    def test_guard_sets_the_cap(self):
        f = to_prenex(parse_formula("A x <= double(C2). E y. x <= y"))
        self.assertEqual(
            truncate(f, 1),
            parse_formula("A x <= double(C2). E y <= C1. x <= double(C2) -> x <= y"),
        )

    def test_prenex_preserves_truncated_truth(self):
        rng = make_rng(12)
        for i in range(500):
            f = random_sentence(rng, 3)
            bound = 4 if i % 2 else 8
            with self.subTest(i=i):
                self.assertEqual(
                    decide_delta0(truncate(f, bound)),
                    decide_delta0(truncate(to_prenex(f), bound)),
                )


if __name__ == "__main__":
    unittest.main()
