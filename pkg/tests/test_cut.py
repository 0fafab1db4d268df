"""
Tests for cut_combine
"""

import unittest
from pathlib import Path

from src.cut import CUT_SLACK, cut_combine
from src.enrichment import NONE, RANK_ZERO, EnrichmentLevel
from src.errors import CutShapeError
from src.generators import make_rng, random_true_atom
from src.lang import And, Implies, Not, Or, parse_formula
from src.models import JustificationKind
from src.systems import AxiomBasis, named_basis
from src.tableaux import (
    Justification,
    Proof,
    ProofNode,
    check_proof,
    proof_size,
    prove,
    read_proof_file,
)

GOLDEN = Path(__file__).parent / "golden"
RULE = JustificationKind.RULE


def _implication_proof(psi, basis_name="empty"):
    """root ~(psi -> psi), psi & ~psi, psi, ~psi"""
    goal = Implies(psi, psi)
    rule = JustificationKind.RULE
    nodes = (
        ProofNode(0, None, Not(goal), Justification(JustificationKind.ROOT)),
        ProofNode(1, 0, And(psi, Not(psi)), Justification(rule, rule=2, ancestor=0)),
        ProofNode(2, 1, psi, Justification(rule, rule=1, ancestor=1)),
        ProofNode(3, 2, Not(psi), Justification(rule, rule=1, ancestor=1)),
    )
    return Proof(goal=goal, nodes=nodes, basis=basis_name)


class TestCutCombine(unittest.TestCase):
    def setUp(self):
        self.basis = named_basis("empty")
        self.tautology = read_proof_file(GOLDEN / "tautology.proof")
        self.psi = self.tautology.goal
        self.implication = _implication_proof(self.psi)

    def test_inputs_are_valid(self):
        self.assertTrue(check_proof(self.implication, self.basis).valid)

    def test_tautology_through_its_own_implication(self):
        result = cut_combine(self.tautology, self.implication, basis=self.basis)
        self.assertEqual(result.goal, self.psi)
        self.assertEqual(result.level, RANK_ZERO)
        self.assertLessEqual(proof_size(result),
                             proof_size(self.tautology) + proof_size(self.implication) + CUT_SLACK)
        self.assertTrue(check_proof(result, self.basis, EnrichmentLevel.rank(1)).valid)
        self.assertTrue(check_proof(result, self.basis, RANK_ZERO).valid)

    def test_result_structure(self):
        result = cut_combine(self.tautology, self.implication)
        root, lem, first = result.nodes[:3]
        self.assertEqual(root.sentence, Not(self.psi))
        self.assertEqual(lem.justification.kind, JustificationKind.LOGICAL)
        self.assertEqual(lem.sentence, Or(self.psi, Not(self.psi)))
        self.assertEqual(first.justification.rule, 3)
        self.assertEqual(first.sentence, self.psi)
        self.assertIn(Not(self.psi), [node.sentence for node in result.nodes
                                      if node.parent == lem.id])

    def test_rejected_without_enrichment(self):
        result = cut_combine(self.tautology, self.implication)
        verdict = check_proof(result, self.basis, NONE)
        self.assertFalse(verdict.valid)
        self.assertEqual(verdict.node_id, 1)

    def test_goal_mismatch(self):
        other = _implication_proof(parse_formula("C1 = C1"))
        with self.assertRaises(CutShapeError):
            cut_combine(self.tautology, other)

    def test_invalid_input(self):
        broken = Proof(goal=self.psi, nodes=self.tautology.nodes[:3], basis="empty")
        with self.assertRaises(CutShapeError):
            cut_combine(broken, self.implication, basis=self.basis)

    def test_different_bases(self):
        other = _implication_proof(self.psi, basis_name="relational")
        with self.assertRaises(CutShapeError):
            cut_combine(self.tautology, other)

    def test_size_bound_on_generated_pairs(self):
        rng = make_rng(41)
        for i in range(100):
            a, b = random_true_atom(rng), random_true_atom(rng)
            if a == b:
                continue
            basis = AxiomBasis.from_sentences(f"pair{i}", [a, Implies(a, b)])
            proof_a = prove(a, basis, budget=2000, max_term_size=1)
            proof_ab = prove(Implies(a, b), basis, budget=2000, max_term_size=1)
            self.assertIsInstance(proof_a, Proof)
            self.assertIsInstance(proof_ab, Proof)
            result = cut_combine(proof_a, proof_ab, basis=basis)
            self.assertLessEqual(proof_size(result),
                                 proof_size(proof_a) + proof_size(proof_ab) + CUT_SLACK)
            self.assertTrue(check_proof(result, basis, RANK_ZERO).valid)
            self.assertFalse(check_proof(result, basis, NONE).valid)


class TestRootChainPlacement(unittest.TestCase):
    """proof_impl need not open with the ~(Psi -> Phi) decomposition"""

    def setUp(self):
        self.a = parse_formula("C1 <= C2")
        self.b = parse_formula("C0 <= C1")

    def _psi_proof(self, basis):
        nodes = (
            ProofNode(0, None, Not(self.a), Justification(JustificationKind.ROOT)),
            ProofNode(1, 0, self.a,
                      Justification(JustificationKind.AXIOM, axiom=basis.axiom_id(self.a))),
        )
        return Proof(goal=self.a, nodes=nodes, basis=basis.name)

    def _assert_combines(self, proof_psi, proof_impl, basis):
        self.assertTrue(check_proof(proof_psi, basis).valid)
        self.assertTrue(check_proof(proof_impl, basis).valid)
        result = cut_combine(proof_psi, proof_impl, basis=basis)
        self.assertEqual(result.goal, self.b)
        self.assertLessEqual(proof_size(result),
                             proof_size(proof_psi) + proof_size(proof_impl) + CUT_SLACK)
        self.assertTrue(check_proof(result, basis, RANK_ZERO).valid)
        self.assertFalse(check_proof(result, basis, NONE).valid)
        return result

    def test_axiom_before_decomposition(self):
        basis = AxiomBasis.from_sentences("late-chain", [self.a, Or(Not(self.a), self.b)])
        goal = Implies(self.a, self.b)
        axiom = Justification(JustificationKind.AXIOM,
                              axiom=basis.axiom_id(Or(Not(self.a), self.b)))
        nodes = (
            ProofNode(0, None, Not(goal), Justification(JustificationKind.ROOT)),
            ProofNode(1, 0, Or(Not(self.a), self.b), axiom),
            ProofNode(2, 1, And(self.a, Not(self.b)), Justification(RULE, rule=2, ancestor=0)),
            ProofNode(3, 2, self.a, Justification(RULE, rule=1, ancestor=2)),
            ProofNode(4, 3, Not(self.b), Justification(RULE, rule=1, ancestor=2)),
            ProofNode(5, 4, Not(self.a), Justification(RULE, rule=3, ancestor=1)),
            ProofNode(6, 4, self.b, Justification(RULE, rule=3, ancestor=1)),
        )
        proof_impl = Proof(goal=goal, nodes=nodes, basis=basis.name)
        result = self._assert_combines(self._psi_proof(basis), proof_impl, basis)
        sentences = [node.sentence for node in result.nodes]
        self.assertNotIn(And(self.a, Not(self.b)), sentences)
        self.assertNotIn(Not(goal), sentences)
        self.assertEqual(proof_size(result), 8)

    def test_no_decomposition(self):
        goal = Implies(self.a, self.b)
        basis = AxiomBasis.from_sentences("direct", [self.a, goal])
        nodes = (
            ProofNode(0, None, Not(goal), Justification(JustificationKind.ROOT)),
            ProofNode(1, 0, goal, Justification(JustificationKind.AXIOM,
                                                axiom=basis.axiom_id(goal))),
        )
        proof_impl = Proof(goal=goal, nodes=nodes, basis=basis.name)
        result = self._assert_combines(self._psi_proof(basis), proof_impl, basis)
        self.assertEqual(proof_size(result), 8)
        by_id = {node.id: node for node in result.nodes}
        splits = [node for node in result.nodes if node.justification.rule == 4]
        self.assertEqual(len(splits), 2)
        for node in splits:
            self.assertEqual(by_id[node.justification.ancestor].sentence, goal)
        self.assertEqual({node.sentence for node in splits}, {Not(self.a), self.b})


if __name__ == "__main__":
    unittest.main()
