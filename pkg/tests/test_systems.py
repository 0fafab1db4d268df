"""
Tests for axiom bases, type classification and the consistency experiments
"""

import itertools
import os
import tempfile
import unittest

from src.enrichment import NONE, RANK_ZERO, EnrichmentLevel
from src.errors import LStarError, ParseError, ProofFormatError, SchemaGateError
from src.godel import diagonalize, godel_number
from src.lang import C0, C1, Not, eq, parse_formula, print_formula
from src.models import (
    LocalizationVariant,
    SchemaKind,
    SearchMode,
    SearchVerdict,
    Totality,
    TypeKind,
)
from src.prenex import classify
from src.semantics import decide_delta0
from src.systems import (
    AxiomBasis,
    GeneralizedArithmetic,
    SelfRefBasis,
    chain_atom,
    classify_type,
    consistency_search,
    dumps_run_record,
    group2_record,
    group3_record,
    load_basis_file,
    loads_run_record,
    localized_mult_totality,
    named_basis,
    pair_meta,
    parse_group2_display,
    pi_candidates_by_size,
    prf_meta,
    proof_of_record,
    run_consistency,
    self_ref_extend,
    self_ref_record,
    self_ref_sentence,
    totality_sentence,
    witness_certified,
)
from src.tableaux import Proof, prove

INCONSISTENT = ["C0 = C1", "~(C0 = C1)"]


def system(*texts, name="test", level=NONE):
    basis = AxiomBasis.from_sentences(name, [parse_formula(t) for t in texts])
    return GeneralizedArithmetic(basis, level)


class TestBases(unittest.TestCase):
    def test_named_bases(self):
        self.assertEqual(len(named_basis("empty")), 0)
        self.assertEqual(len(named_basis("totality")), 3)
        self.assertEqual(len(named_basis("totality-sa")), 2)
        self.assertEqual(len(named_basis("chain:3")), 4)
        with self.assertRaises(LStarError):
            named_basis("peano")

    def test_relational_axioms_are_pi1(self):
        basis = named_basis("relational")
        self.assertTrue(basis.flags["pi1"])
        for axiom_id, sentence in basis.items():
            with self.subTest(axiom=axiom_id):
                self.assertEqual(classify(sentence).label, "Pi(1)")

    def test_membership_up_to_renaming(self):
        basis = system("A x. x <= double(x)").basis
        self.assertTrue(basis.contains(parse_formula("A y. y <= double(y)")))
        self.assertEqual(basis.axiom_id(parse_formula("A z. z <= double(z)")), "ax0")
        self.assertIsNone(basis.axiom_id(parse_formula("C0 = C0")))

    def test_duplicates_collapse(self):
        basis = AxiomBasis.from_sentences(
            "dup", [parse_formula("A x. x = x"), parse_formula("A y. y = y")]
        )
        self.assertEqual(len(basis), 1)

    def test_open_axiom_rejected(self):
        with self.assertRaises(LStarError):
            AxiomBasis.from_sentences("open", [parse_formula("x = C0")])

    def test_chain(self):
        basis = named_basis("chain:2")
        self.assertEqual(basis.axioms[0], chain_atom(0))
        self.assertTrue(all(decide_delta0(a) for a in basis.axioms))


class TestBasisFiles(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def _write(self, text):
        path = os.path.join(self.tmp.name, "basis.txt")
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def test_comments_and_blank_lines(self):
        path = self._write("# doubling\n\nA x. x <= double(x)  # grows\nC0 <= C1\n")
        basis = load_basis_file(path)
        self.assertEqual([axiom_id for axiom_id, _ in basis.items()], ["line3", "line4"])
        self.assertEqual(named_basis(path).axioms, basis.axioms)

    def test_parse_error_reports_file_line(self):
        path = self._write("C0 = C0\n\nC0 = \n")
        with self.assertRaises(ParseError) as ctx:
            load_basis_file(path)
        self.assertEqual(ctx.exception.line, 3)

    def test_open_formula(self):
        with self.assertRaises(LStarError):
            load_basis_file(self._write("x = C0\n"))

    def test_missing_file(self):
        with self.assertRaises(LStarError):
            load_basis_file(os.path.join(self.tmp.name, "absent.txt"))


class TestClassifyType(unittest.TestCase):
    def test_totality_basis_is_type_m(self):
        result = classify_type(GeneralizedArithmetic(named_basis("totality")), budget=500)
        self.assertEqual(result.kind, TypeKind.TYPE_M)
        self.assertTrue(all(e.proved for e in result.evidence))

    def test_partial_totality_is_type_a(self):
        result = classify_type(GeneralizedArithmetic(named_basis("totality-sa")), budget=300)
        self.assertEqual(result.kind, TypeKind.TYPE_A)
        self.assertEqual([e.which for e in result.evidence],
                         [Totality.SUCCESSOR, Totality.ADDITION, Totality.MULTIPLICATION])
        self.assertFalse(result.evidence[-1].proved)

    def test_empty_basis_is_not_typed(self):
        result = classify_type(GeneralizedArithmetic(named_basis("empty")), budget=200)
        self.assertEqual(result.kind, TypeKind.TYPE_NS)
        self.assertEqual(len(result.evidence), 1)
        self.assertLessEqual(result.evidence[0].expansions, 200)

    def test_totality_shapes(self):
        for which in Totality:
            self.assertEqual(classify(totality_sentence(which)).label, "Pi(2)")


class TestLocalizedTotality(unittest.TestCase):
    def test_literal_variant_is_false(self):
        for k in range(3):
            with self.subTest(k=k):
                self.assertFalse(
                    decide_delta0(localized_mult_totality(k, LocalizationVariant.LITERAL))
                )

    def test_prose_variant_is_true(self):
        for k in range(5):
            with self.subTest(k=k):
                self.assertTrue(decide_delta0(localized_mult_totality(k, LocalizationVariant.PROSE)))

    def test_negative_k(self):
        with self.assertRaises(LStarError):
            localized_mult_totality(-1, LocalizationVariant.PROSE)


class TestSelfRef(unittest.TestCase):
    def setUp(self):
        self.g = GeneralizedArithmetic(named_basis("relational"), RANK_ZERO)
        self.extended = self_ref_extend(self.g)

    def test_diagonal_identity(self):
        basis = self.extended.basis
        self.assertIsInstance(basis, SelfRefBasis)
        self.assertEqual(godel_number(basis.record), basis.number)
        self.assertEqual(diagonalize(basis.record.template), basis.number)
        self.assertEqual(basis.record.system, "relational")
        self.assertEqual(basis.record.level, "rank0")

    def test_extension_keeps_level_and_axioms(self):
        self.assertEqual(self.extended.level, RANK_ZERO)
        self.assertEqual(len(self.extended.basis), len(self.g.basis) + 1)
        self.assertEqual(self.extended.basis.axiom_id(self_ref_sentence(self.extended.basis.number)),
                         SelfRefBasis.SELF_REF_ID)

    def test_stand_in_sentence(self):
        self.assertEqual(classify(self_ref_sentence(12345)).label, "Pi(1)")

    def test_record(self):
        record = self_ref_record(self.extended)
        self.assertEqual(record.kind, SchemaKind.SELF_REF)
        self.assertEqual(record.code, self.extended.basis.number)
        with self.assertRaises(SchemaGateError):
            self_ref_record(self.g)


class TestConsistencySearch(unittest.TestCase):
    def test_level0_minus_refutes_contradictory_basis(self):
        outcome = consistency_search(system("C0 = C1"), SearchMode.LEVEL0_MINUS, budget=100)
        self.assertEqual(outcome.verdict, SearchVerdict.REFUTATION_FOUND)
        self.assertEqual(outcome.proofs[0].goal, eq(C0, C1))

    def test_level0_minus_within_budget(self):
        outcome = consistency_search(system("C0 = C0"), SearchMode.LEVEL0_MINUS, budget=100)
        self.assertEqual(outcome.verdict, SearchVerdict.NO_REFUTATION_FOUND)
        self.assertLessEqual(outcome.expansions, 100)

    def test_level_one_witness_is_certified(self):
        g = system(*INCONSISTENT)
        outcome = consistency_search(g, SearchMode.LEVEL_N, budget=500, n=1, candidate_slice=100)
        self.assertEqual(outcome.verdict, SearchVerdict.REFUTATION_FOUND)
        self.assertEqual(outcome.witness.sentence, "C0 = C1")
        self.assertTrue(witness_certified(g, outcome))

    def test_level_one_on_consistent_chain(self):
        g = GeneralizedArithmetic(named_basis("chain:2"))
        outcome = consistency_search(g, SearchMode.LEVEL_N, budget=300, n=1, candidate_slice=50)
        self.assertEqual(outcome.verdict, SearchVerdict.NO_REFUTATION_FOUND)
        self.assertGreater(outcome.candidates_tried, 0)
        self.assertFalse(witness_certified(g, outcome))

    def test_candidate_stream_reaches_each_rank(self):
        for n in range(5):
            ranks = set()
            for candidate in itertools.islice(pi_candidates_by_size(n), 500):
                shape = classify(candidate)
                self.assertTrue(shape.within_pi(n), (n, print_formula(candidate)))
                ranks.add(shape.rank)
            with self.subTest(n=n):
                self.assertEqual(ranks, set(range(min(n, 3) + 1)))

    def test_run_record(self):
        outcome, record = run_consistency(system("C0 = C1"), SearchMode.LEVEL0_MINUS, budget=50)
        self.assertEqual(record.verdict, outcome.verdict)
        self.assertEqual(record.mode, "level0minus")
        self.assertEqual(record.system, "test@none")
        self.assertEqual(loads_run_record(dumps_run_record(record)), record)

    def test_malformed_run_record(self):
        for data in (b"", b"{", b'{"system": "x"}'):
            with self.assertRaises(ProofFormatError):
                loads_run_record(data)


class TestMetaPredicates(unittest.TestCase):
    def test_pair(self):
        phi = parse_formula("A x. x <= double(x)")
        self.assertTrue(pair_meta(godel_number(phi), godel_number(Not(phi))))
        self.assertFalse(pair_meta(godel_number(phi), godel_number(phi)))
        self.assertFalse(pair_meta(0, 1))
        pi2 = totality_sentence(Totality.ADDITION)
        self.assertFalse(pair_meta(godel_number(pi2), godel_number(Not(pi2))))
        self.assertTrue(pair_meta(godel_number(pi2), godel_number(Not(pi2)), rank=2))

    def test_prf(self):
        g = system("C0 = C1")
        proof = prove(eq(C0, C1), g.basis, budget=100)
        self.assertIsInstance(proof, Proof)
        self.assertTrue(prf_meta(g, godel_number(eq(C0, C1)), proof))
        self.assertTrue(prf_meta(g, godel_number(eq(C0, C1)), godel_number(proof)))
        self.assertFalse(prf_meta(g, godel_number(eq(C1, C0)), proof))
        self.assertFalse(prf_meta(system(), godel_number(eq(C0, C1)), proof))


class TestSchemaRecords(unittest.TestCase):
    def setUp(self):
        self.phi = parse_formula("A x. x <= double(x)")
        self.g = system("A x. x <= double(x)", name="doubling", level=EnrichmentLevel.rank(1))
        self.proof = prove(self.phi, self.g.basis, self.g.level, budget=100)

    def test_group2(self):
        record = group2_record(self.phi, self.proof, self.g)
        self.assertEqual(record.kind, SchemaKind.GROUP2)
        self.assertEqual(record.sentence, print_formula(self.phi))
        basis_name, code, phi = parse_group2_display(record.display)
        self.assertEqual((basis_name, code, phi), ("doubling", godel_number(self.phi), self.phi))
        self.assertEqual(proof_of_record(record), self.proof)

    def test_group2_gates(self):
        with self.assertRaises(SchemaGateError):
            group2_record(totality_sentence(Totality.ADDITION), self.proof, self.g)
        with self.assertRaises(SchemaGateError):
            group2_record(parse_formula("(A x. x = x) & C0 = C0"), self.proof, self.g)
        with self.assertRaises(SchemaGateError):
            group2_record(parse_formula("A x. x <= x"), self.proof, self.g)

    def test_group2_display_rejects_other_text(self):
        with self.assertRaises(LStarError):
            parse_group2_display("A p. p = p")

    def test_group3_violated_by_inconsistent_basis(self):
        record = group3_record(system(*INCONSISTENT, name="bad"), budget=500)
        self.assertTrue(record.violated)
        self.assertEqual(record.witness.sentence, "C0 = C1")
        self.assertIn("Prf[bad]", record.display)

    def test_group3_holds_on_chain(self):
        record = group3_record(GeneralizedArithmetic(named_basis("chain:1")), budget=200)
        self.assertFalse(record.violated)
        self.assertIsNone(record.witness)


if __name__ == "__main__":
    unittest.main()
