"""
Seeded random generators for terms, formulas, proof corpora and mutations.

Used by the fuzz command and by the counted property tests. Every generator
takes a random.Random so a run is reproducible from its seed.
"""

import random
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.config import default_seed
from src.lang import (
    C0,
    C1,
    C2,
    FUNCTION_ARITY,
    And,
    App,
    Atom,
    BoundedExists,
    BoundedForAll,
    Exists,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    Term,
    Var,
    double_power,
    formula_params,
    formula_size,
    le,
    parse_formula,
    substitute,
    term_size,
)
from src.models import JustificationKind
from src.semantics import decide_delta0
from src.systems import AxiomBasis
from src.tableaux import Justification, Proof, prove

VARIABLES = ("x", "y", "z", "u", "v")
_FUNCTIONS = tuple(FUNCTION_ARITY)
_SMALL_BOUNDS = (C0, C1, C2, App("double", (C2,)))


def make_rng(seed: Optional[int] = None) -> random.Random:
    return random.Random(default_seed() if seed is None else seed)


def random_term(rng: random.Random, depth: int, variables: Sequence[str] = ()) -> Term:
    """Term of depth at most depth over C0-C2, the given variables and every function symbol"""
    leaves: List[Term] = [C0, C1, C2] + [Var(v) for v in variables]
    if depth <= 0 or rng.random() < 0.3:
        return rng.choice(leaves)
    name = rng.choice(_FUNCTIONS)
    args = tuple(random_term(rng, depth - 1, variables) for _ in range(FUNCTION_ARITY[name]))
    return App(name, args)


def random_atom(rng: random.Random, depth: int, variables: Sequence[str] = ()) -> Atom:
    return Atom(random_term(rng, depth, variables), rng.choice(("=", "<=")),
                random_term(rng, depth, variables))


def random_formula(
    rng: random.Random,
    depth: int,
    variables: Sequence[str] = (),
    bounded_only: bool = False,
) -> Formula:
    """
    Random formula whose free variables are among variables. With
    bounded_only the result is Delta0 and every quantifier bound is a
    closed term of value at most 4.
    """
    if depth <= 0:
        return random_atom(rng, 2, variables)
    choice = rng.randrange(8)
    if choice == 0:
        return random_atom(rng, 2, variables)
    if choice == 1:
        return Not(random_formula(rng, depth - 1, variables, bounded_only))
    if choice in (2, 3, 4):
        connective = (And, Or, Implies)[choice - 2]
        return connective(
            random_formula(rng, depth - 1, variables, bounded_only),
            random_formula(rng, depth - 1, variables, bounded_only),
        )
    var = rng.choice(VARIABLES)
    inner = tuple(dict.fromkeys(tuple(variables) + (var,)))
    body = random_formula(rng, depth - 1, inner, bounded_only)
    if bounded_only or choice == 5:
        bound = rng.choice(_SMALL_BOUNDS + tuple(Var(v) for v in variables if v != var))
        kind = rng.choice((BoundedForAll, BoundedExists))
        return kind(var, bound, body)
    return (ForAll if choice == 6 else Exists)(var, body)


def random_sentence(rng: random.Random, depth: int) -> Formula:
    return random_formula(rng, depth, ())


def random_delta0_sentence(rng: random.Random, depth: int) -> Formula:
    return random_formula(rng, depth, (), bounded_only=True)


def random_true_atom(rng: random.Random) -> Atom:
    """A closed atom that holds in the standard model"""
    while True:
        atom = random_atom(rng, 2)
        if decide_delta0(atom):
            return atom


def random_true_delta0(rng: random.Random, depth: int, attempts: int = 200) -> Formula:
    """A Delta0 sentence true in the standard model; falls back to a true atom"""
    for _ in range(attempts):
        candidate = random_delta0_sentence(rng, depth)
        if decide_delta0(candidate):
            return candidate
    return random_true_atom(rng)

# ============================================================================
# Proof corpora
# ============================================================================

# Universal laws of the standard model, used as axioms of corpus tasks
LAWS: Tuple[ForAll, ...] = tuple(
    parse_formula(text)
    for text in (
        "A x. sub(x, x) = C0",
        "A x. C0 <= x",
        "A x. x <= double(x)",
        "A x. pred(x) <= x",
        "A x. max(x, C0) = x",
        "A x. div(x, C1) = x",
        "A x. log(x) <= x",
        "A x. bit(x, C0) = C0",
    )
)

_TASK_BOUNDS = (C2, App("double", (C2,)))

ProofTask = Tuple[List[Formula], Formula]


def _body(rng: random.Random, accept: Callable[[Formula], bool]) -> Formula:
    """Random atom over x passing accept; x = x when none turns up"""
    for _ in range(200):
        body = random_atom(rng, 1, ("x",))
        if accept(body):
            return body
    return Atom(Var("x"), "=", Var("x"))


def _propositional_task(rng: random.Random) -> ProofTask:
    a, b, c = random_true_atom(rng), random_true_atom(rng), random_atom(rng, 1)
    goal = rng.choice([a, And(a, b), Or(a, c), b, Implies(c, a)])
    return [a, Implies(a, b)], goal


def _bounded_instance_task(rng: random.Random) -> ProofTask:
    """P(t) from A x <= s. P(x) and t <= s (rules 8 and 4)"""
    s, t = rng.choice(_TASK_BOUNDS), rng.choice((C0, C1, C2))
    body = _body(rng, lambda p: decide_delta0(BoundedForAll("x", s, p)))
    return [BoundedForAll("x", s, body), le(t, s)], substitute(body, "x", t)


def _bounded_witness_task(rng: random.Random) -> ProofTask:
    """E x <= s. P(x) from P(t) and t <= s (rules 2, 8 and 4)"""
    s, t = rng.choice(_TASK_BOUNDS), rng.choice((C0, C1, C2))
    body = _body(rng, lambda p: decide_delta0(substitute(p, "x", t)))
    return [substitute(body, "x", t), le(t, s)], BoundedExists("x", s, body)


def _bounded_law_task(rng: random.Random) -> ProofTask:
    """A x <= s. U(x) from the law A x. U(x) (rules 2, 6, 1 and 7)"""
    law = rng.choice(LAWS)
    return [law], BoundedForAll(law.var, rng.choice(_TASK_BOUNDS), law.body)


def _law_instance_task(rng: random.Random) -> ProofTask:
    """U(t) for a ground t from the law A x. U(x) (rule 7)"""
    law = rng.choice(LAWS)
    return [law], substitute(law.body, law.var, random_term(rng, 1))


def _witness_elimination_task(rng: random.Random) -> ProofTask:
    """q from E x. P(x) and A y. ~P(y) | q (rules 5, 7 and 3)"""
    body = _body(rng, lambda p: decide_delta0(BoundedExists("x", C2, p)))
    q = random_true_atom(rng)
    rest = ForAll("y", Or(Not(substitute(body, "x", Var("y"))), q))
    return [Exists("x", body), rest], q


_TASKS: Tuple[Callable[[random.Random], ProofTask], ...] = (
    _propositional_task,
    _bounded_instance_task,
    _bounded_witness_task,
    _bounded_law_task,
    _law_instance_task,
    _witness_elimination_task,
)


def proof_task(rng: random.Random) -> ProofTask:
    """
    A true basis and a true Delta0 goal that follows from it in a few steps.

    Tasks are drawn evenly from propositional consequences of {A, A -> B}
    and five quantified shapes that between them need every rule 1-8.
    """
    return rng.choice(_TASKS)(rng)


def proof_corpus(
    rng: random.Random,
    count: int,
    budget: int = 5000,
    max_term_size: int = 1,
) -> List[Tuple[AxiomBasis, Proof]]:
    """
    Up to count (basis, proof) pairs found by prove() for proof_task goals.
    Tasks the search cannot finish within budget are skipped.
    """
    corpus = []
    attempts = 0
    while len(corpus) < count and attempts < 4 * count:
        attempts += 1
        sentences, goal = proof_task(rng)
        basis = AxiomBasis.from_sentences(f"corpus{attempts}", sentences)
        result = prove(goal, basis, budget=budget, max_term_size=max_term_size)
        if isinstance(result, Proof):
            corpus.append((basis, result))
    return corpus


def _foreign_term(proof: Proof) -> Term:
    depth = 2 + sum(formula_size(node.sentence) for node in proof.nodes)
    depth += sum(term_size(node.justification.term) for node in proof.nodes
                 if node.justification.term is not None)
    return double_power(depth)


def foreign_sentence(proof: Proof) -> Atom:
    """
    A closed atom deeper than anything the tree's sentences and witness terms
    could produce, so no rule, axiom or root check accepts it in their place.
    """
    return Atom(_foreign_term(proof), "=", C0)


def _params_above(proof: Proof, index: int) -> List[str]:
    by_id = {node.id: node for node in proof.nodes}
    found: Dict[str, None] = {}
    parent = proof.nodes[index].parent
    while parent is not None:
        for p in sorted(formula_params(by_id[parent].sentence)):
            found.setdefault(p)
        parent = by_id[parent].parent
    return list(found)


def mutate_proof(proof: Proof, rng: random.Random, basis: Optional[AxiomBasis] = None) -> Proof:
    """
    Change one node so the tree no longer checks.

    The node is re-labelled as a proper axiom when its sentence is not in
    the basis, given a foreign instantiation term (rule 8), given a stale or
    wrong parameter (rules 5 and 6), or has its sentence swapped for
    foreign_sentence(proof).
    """
    index = rng.randrange(len(proof.nodes))
    node = proof.nodes[index]
    j = node.justification
    roll = rng.random()
    stale = _params_above(proof, index)
    if (
        basis is not None
        and j.kind == JustificationKind.RULE
        and not basis.contains(node.sentence)
        and roll < 0.5
    ):
        mutated = replace(node, justification=Justification(JustificationKind.AXIOM,
                                                            axiom="forged"))
    elif j.kind == JustificationKind.RULE and j.rule == 8 and roll < 0.8:
        mutated = replace(node, justification=replace(j, term=_foreign_term(proof)))
    elif j.kind == JustificationKind.RULE and j.rule in (5, 6) and (stale or j.rule == 6):
        param = rng.choice(stale) if stale else "forged"
        mutated = replace(node, justification=replace(j, param=param))
    else:
        mutated = replace(node, sentence=foreign_sentence(proof))
    nodes = proof.nodes[:index] + (mutated,) + proof.nodes[index + 1:]
    return replace(proof, nodes=nodes)
