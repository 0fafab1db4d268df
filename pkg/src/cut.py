"""
The cut construction.

cut_combine turns proofs of Psi and Psi -> Phi into a proof of Phi whose
size is bounded by the sum of the two plus a constant. The result cites
Psi | ~Psi as a logical axiom, so it only checks at a level that permits it.
"""

from typing import Dict, Iterator, List, Optional

from src.config import log
from src.enrichment import EnrichmentLevel, minimal_level
from src.errors import CutShapeError
from src.lang import And, Formula, Implies, Not, Or, alpha_equal, canonical, print_formula
from src.models import JustificationKind, LemShape
from src.tableaux import (
    AxiomSource,
    DraftNode,
    Proof,
    branch_closed,
    check_proof,
    freeze,
    proof_size,
    rule2_result,
    thaw,
)

# Extra nodes cut_combine may add beyond the two input proofs
CUT_SLACK = 4


def _walk(root: DraftNode) -> Iterator[DraftNode]:
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def _repoint(root: DraftNode, replacements: Dict[int, DraftNode]) -> None:
    """Redirect ancestor references by object identity"""
    for node in _walk(root):
        if node.ancestor is not None and id(node.ancestor) in replacements:
            node.ancestor = replacements[id(node.ancestor)]


def _strip(node: DraftNode, stripped: Dict[int, Optional[DraftNode]]) -> List[DraftNode]:
    """Children of node with stripped descendants spliced out"""
    kept: List[DraftNode] = []
    for child in node.children:
        if id(child) in stripped:
            kept.extend(_strip(child, stripped))
        else:
            child.children = _strip(child, stripped)
            kept.append(child)
    return kept


def cut_combine(
    proof_psi: Proof,
    proof_impl: Proof,
    basis: Optional[AxiomSource] = None,
    level: Optional[EnrichmentLevel] = None,
) -> Proof:
    """
    Combine a proof of Psi and a proof of Psi -> Phi into a proof of Phi.

    The result has root ~Phi, the logical axiom Psi | ~Psi, and the rule-3
    siblings Psi and ~Psi. The body of proof_psi hangs under ~Psi. The body of
    proof_impl hangs under Psi with every node of its root chain
    ~(Psi -> Phi), Psi & ~Phi, Psi, ~Phi removed and references moved to the
    new Psi and ~Phi. A branch that closed only against a removed sentence is
    re-closed with at most three nodes where its complement occurs. The chain
    nodes may sit anywhere below the root, after axiom insertions say, or be
    missing altogether when proof_impl closes against Psi -> Phi directly.

    Args:
        proof_psi: Proof of Psi
        proof_impl: Proof of Psi -> Phi
        basis: When given, both inputs are checked against it first
        level: Level recorded in the result; defaults to the weakest level
               covering both inputs and lem_axiom(Psi)

    Raises:
        CutShapeError: goal mismatch, invalid input, or a shape the
                       construction cannot re-close
    """
    psi = proof_psi.goal
    implication = proof_impl.goal
    if not isinstance(implication, Implies) or not alpha_equal(implication.left, psi):
        raise CutShapeError(
            "Goal mismatch: second proof must prove Psi -> Phi for the first proof's Psi",
            {"psi": print_formula(psi), "implication": print_formula(implication)},
        )
    if proof_psi.basis != proof_impl.basis:
        raise CutShapeError(
            f"Proofs come from different bases: {proof_psi.basis} vs {proof_impl.basis}"
        )
    if basis is not None:
        for label, proof in (("Psi", proof_psi), ("Psi -> Phi", proof_impl)):
            verdict = check_proof(proof, basis, proof.level)
            if not verdict.valid:
                raise CutShapeError(
                    f"Input proof of {label} is invalid: {verdict.reason}",
                    {"node_id": verdict.node_id},
                )

    phi = implication.right
    if level is None:
        level = max(proof_psi.level, proof_impl.level, minimal_level(psi))

    root = DraftNode(Not(phi), JustificationKind.ROOT)
    lem = DraftNode(Or(psi, Not(psi)), JustificationKind.LOGICAL, shape=LemShape.LEM)
    positive = DraftNode(psi, JustificationKind.RULE, rule=3, ancestor=lem)
    negative = DraftNode(Not(psi), JustificationKind.RULE, rule=3, ancestor=lem)
    root.children = [lem]
    lem.children = [positive, negative]

    # ~Psi side: proof_psi's root becomes the negative sibling
    psi_root = thaw(proof_psi)
    negative.children = psi_root.children
    _repoint(negative, {id(psi_root): negative})

    # Psi side: drop the root chain of proof_impl
    impl_root = thaw(proof_impl)
    opened = rule2_result(impl_root.sentence)
    stripped: Dict[int, Optional[DraftNode]] = {id(impl_root): None}
    conjunctions = set()
    for node in _walk(impl_root):
        if node is impl_root or node.kind != JustificationKind.RULE:
            continue
        if node.rule == 2 and node.ancestor is impl_root and alpha_equal(node.sentence, opened):
            stripped[id(node)] = None
            conjunctions.add(id(node))
        elif node.rule == 1 and id(node.ancestor) in conjunctions:
            if alpha_equal(node.sentence, psi):
                stripped[id(node)] = positive
            elif alpha_equal(node.sentence, Not(phi)):
                stripped[id(node)] = root
    positive.children = _strip(impl_root, stripped)
    _repoint(positive, {key: value for key, value in stripped.items() if value is not None})
    for node in _walk(positive):
        if node.ancestor is not None and id(node.ancestor) in stripped:
            raise CutShapeError("A kept node refers to a removed root-chain node")

    _reclose(root, positive, psi, phi)

    result = freeze(phi, root, proof_impl.basis, level)
    bound = proof_size(proof_psi) + proof_size(proof_impl) + CUT_SLACK
    if proof_size(result) > bound:
        raise CutShapeError(
            f"Combined proof has {proof_size(result)} nodes, above the bound {bound}"
        )
    log(f"✓ cut_combine: {proof_size(proof_psi)} + {proof_size(proof_impl)} -> "
        f"{proof_size(result)} nodes")
    return result


def _reclose(root: DraftNode, positive: DraftNode, psi: Formula, phi: Formula) -> None:
    """
    Close branches under positive that relied on ~(Psi -> Phi) or Psi & ~Phi.

    Walks top-down; the first node stating Psi -> Phi or ~(Psi & ~Phi) above
    an open leaf gets its subtree replaced by a split that closes against
    Psi and ~Phi.
    """
    implication_key = canonical(Implies(psi, phi))
    guard_key = canonical(Not(And(psi, Not(phi))))
    prefix = [root, root.children[0], positive]

    def has_open_leaf(node: DraftNode, path: List[DraftNode]) -> bool:
        path = path + [node]
        if not node.children:
            return not branch_closed(n.sentence for n in path)
        return any(has_open_leaf(child, path) for child in node.children)

    def visit(node: DraftNode, path: List[DraftNode]) -> None:
        key = canonical(node.sentence)
        if key in (implication_key, guard_key) and has_open_leaf(node, path):
            if key == implication_key:
                node.children = [
                    DraftNode(Not(psi), JustificationKind.RULE, rule=4, ancestor=node),
                    DraftNode(phi, JustificationKind.RULE, rule=4, ancestor=node),
                ]
            else:
                disjunction = DraftNode(
                    Or(Not(psi), Not(Not(phi))), JustificationKind.RULE, rule=2, ancestor=node
                )
                disjunction.children = [
                    DraftNode(Not(psi), JustificationKind.RULE, rule=3, ancestor=disjunction),
                    DraftNode(Not(Not(phi)), JustificationKind.RULE, rule=3, ancestor=disjunction),
                ]
                node.children = [disjunction]
            return
        for child in node.children:
            visit(child, path + [node])

    if positive.children:
        for child in positive.children:
            visit(child, prefix)
    if has_open_leaf(positive, prefix[:-1]):
        raise CutShapeError("Proof of Psi -> Phi does not fit the cut construction")
