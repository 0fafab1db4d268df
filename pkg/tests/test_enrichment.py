"""
Tests for enrichment levels and the excluded-middle gate
"""

import itertools
import unittest

from src.enrichment import (
    INFINITE,
    NONE,
    RANK_ZERO,
    RANK_ZERO_PLUS,
    EnrichmentLevel,
    lem_axiom,
    lem_plus_axiom,
    lem_shape,
    minimal_level,
    permits,
)
from src.errors import LStarError, NotClosedError, NotDelta0Error
from src.generators import make_rng, random_delta0_sentence, random_formula
from src.lang import And, Exists, ForAll, Not, Or, free_vars, parse_formula, print_formula
from src.models import LemShape, Totality
from src.semantics import holds
from src.systems import totality_sentence

LEVELS = [NONE, RANK_ZERO, RANK_ZERO_PLUS, EnrichmentLevel.rank(1), EnrichmentLevel.rank(2),
          INFINITE]


class TestLevels(unittest.TestCase):
    def test_order(self):
        self.assertEqual(sorted(reversed(LEVELS)), LEVELS)
        self.assertLess(EnrichmentLevel.rank(7), INFINITE)

    def test_text_round_trip(self):
        for level in LEVELS:
            self.assertEqual(EnrichmentLevel.parse(str(level)), level)
        self.assertEqual(str(EnrichmentLevel.rank(3)), "rankK:3")

    def test_bad_levels(self):
        for text in ("rankK:0", "rankK:", "rankK:x", "rank1", ""):
            with self.subTest(text=text):
                with self.assertRaises(LStarError):
                    EnrichmentLevel.parse(text)

    def test_minimal_level(self):
        self.assertEqual(minimal_level(parse_formula("C0 = C0")), RANK_ZERO)
        self.assertEqual(minimal_level(parse_formula("A x. E y. x <= y")),
                         EnrichmentLevel.rank(2))
        self.assertEqual(minimal_level(parse_formula("(A x. x = x) & C0 = C0")), INFINITE)


class TestExcludedMiddle(unittest.TestCase):
    def test_lem_axiom(self):
        self.assertEqual(print_formula(lem_axiom(parse_formula("C0 = C0"))),
                         "C0 = C0 | ~(C0 = C0)")
        psi = totality_sentence(Totality.ADDITION)
        self.assertEqual(lem_axiom(psi), Or(psi, Not(psi)))

    def test_lem_axiom_needs_sentence(self):
        with self.assertRaises(NotClosedError):
            lem_axiom(parse_formula("x = C0"))

    def test_lem_plus_axiom(self):
        self.assertEqual(print_formula(lem_plus_axiom(parse_formula("x = C0"))),
                         "A x. x = C0 | ~(x = C0)")
        self.assertEqual(print_formula(lem_plus_axiom(parse_formula("x <= y"))),
                         "A x. A y. x <= y | ~(x <= y)")

    def test_lem_plus_gates(self):
        with self.assertRaises(NotDelta0Error):
            lem_plus_axiom(parse_formula("A y. x <= y"))
        with self.assertRaises(LStarError):
            lem_plus_axiom(parse_formula("C0 = C0"))

    def test_shapes(self):
        self.assertEqual(lem_shape(lem_axiom(parse_formula("C0 = C0"))), LemShape.LEM)
        self.assertEqual(lem_shape(lem_plus_axiom(parse_formula("x = C0"))), LemShape.LEM_PLUS)
        self.assertEqual(lem_shape(lem_plus_axiom(parse_formula("x <= y"))),
                         LemShape.LEM_PLUS_MULTI)
        self.assertIsNone(lem_shape(parse_formula("C0 = C0 | ~(C1 = C1)")))


class TestPermits(unittest.TestCase):
    # rows follow LEVELS: none, rank0, rank0plus, rankK:1, rankK:2, inf
    TABLE = {
        "C0 = C0 | ~(C0 = C0)": (False, True, True, True, True, True),
        "A x. x = C0 | ~(x = C0)": (False, False, True, True, True, True),
        "A x. A y. x <= y | ~(x <= y)": (False, False, True, True, True, True),
        "(A x. x = x) | ~(A x. x = x)": (False, False, False, True, True, True),
        "(A x. E y. x <= y) | ~(A x. E y. x <= y)": (False, False, False, False, True, True),
        "((A x. x = x) & C0 = C0) | ~((A x. x = x) & C0 = C0)":
            (False, False, False, False, False, True),
        "C0 = C0": (False,) * 6,
    }

    def test_table(self):
        for text, expected in self.TABLE.items():
            candidate = parse_formula(text)
            for level, allowed in zip(LEVELS, expected):
                with self.subTest(candidate=text, level=str(level)):
                    self.assertEqual(permits(level, candidate), allowed)

    def test_monotone(self):
        candidates = [parse_formula(text) for text in self.TABLE]
        for candidate in candidates:
            for low, high in itertools.combinations(LEVELS, 2):
                if permits(low, candidate):
                    self.assertTrue(permits(high, candidate))

    def test_multi_variable_switch(self):
        candidate = lem_plus_axiom(parse_formula("x <= y"))
        self.assertFalse(permits(RANK_ZERO_PLUS, candidate, allow_multi_variable=False))
        self.assertTrue(permits(RANK_ZERO_PLUS, candidate, allow_multi_variable=True))

    def test_totality_needs_rank_two(self):
        candidate = lem_axiom(totality_sentence(Totality.ADDITION))
        self.assertFalse(permits(EnrichmentLevel.rank(1), candidate))
        self.assertTrue(permits(EnrichmentLevel.rank(2), candidate))

    def test_admitted_instances_hold(self):
        rng = make_rng(31)
        for _ in range(200):
            psi = random_formula(rng, 2, ("x",), bounded_only=True)
            if free_vars(psi) != {"x"}:
                continue
            candidate = lem_plus_axiom(psi)
            self.assertTrue(permits(RANK_ZERO_PLUS, candidate))
            for value in range(6):
                self.assertTrue(holds(Or(psi, Not(psi)), {"x": value}))

    @staticmethod
    def _generated_candidates():
        """200 candidates, 40 per class, each with the index in LEVELS of its weakest level"""
        rng = make_rng(37)
        out = []
        while len(out) < 200:
            kind = len(out) % 5
            if kind == 0:
                out.append((lem_axiom(random_delta0_sentence(rng, 2)), 1))
            elif kind == 1:
                psi = random_formula(rng, 2, ("x", "y"), bounded_only=True)
                if free_vars(psi):
                    out.append((lem_plus_axiom(psi), 2))
            elif kind == 2:
                sigma = Exists("x", random_formula(rng, 2, ("x",), bounded_only=True))
                out.append((lem_axiom(sigma), 3))
            elif kind == 3:
                matrix = random_formula(rng, 2, ("x", "y"), bounded_only=True)
                out.append((lem_axiom(ForAll("x", Exists("y", matrix))), 4))
            else:
                unbounded = ForAll("x", random_formula(rng, 1, ("x",), bounded_only=True))
                mixed = And(unbounded, random_delta0_sentence(rng, 1))
                out.append((lem_axiom(mixed), 5))
        return out

    def test_generated_candidates(self):
        for candidate, weakest in self._generated_candidates():
            allowed = [permits(level, candidate) for level in LEVELS]
            with self.subTest(candidate=print_formula(candidate)):
                self.assertEqual(allowed, [i >= weakest for i in range(len(LEVELS))])
                for low, high in zip(allowed, allowed[1:]):
                    self.assertLessEqual(low, high)


if __name__ == "__main__":
    unittest.main()
