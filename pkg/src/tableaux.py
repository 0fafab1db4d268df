"""
Semantic tableaux: proof objects, the eight rules, checking and search.

A proof of Phi is a tree rooted at ~Phi. Every other node is a proper axiom
of the basis, a logical axiom permitted by the enrichment level, or the
result of a rule applied to a node above it on the same branch:

    1  U & G           =>  U, or G
    2  ~~U => U;  ~(U | G) => ~U & ~G;  ~(U -> G) => U & ~G;
       ~(U & G) => ~U | ~G;  ~E v. U => A v. ~U;  ~A v. U => E v. ~U;
       and the bounded forms of the last two
    3  U | G           =>  siblings U and G
    4  U -> G          =>  siblings ~U and G
    5  E v. U(v)       =>  U(#p) with #p fresh on the branch
    6  E v <= s. U(v)  =>  #p <= s & U(#p) with #p fresh on the branch
    7  A v. U(v)       =>  U(t) for a ground term t
    8  A v <= s. U(v)  =>  t <= s -> U(t) for a ground term t

A branch is closed when it holds some sentence together with its negation,
compared up to renaming of bound variables.
"""

import functools
import itertools
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Protocol, Tuple, Union

import orjson
from pydantic import ValidationError

from src.config import default_budget, get_config, log
from src.enrichment import NONE, EnrichmentLevel, lem_shape, permits
from src.errors import LStarError, NotClosedError, ProofFormatError
from src.lang import (
    C0,
    C1,
    C2,
    And,
    BoundedExists,
    BoundedForAll,
    Exists,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    Param,
    Term,
    canonical,
    formula_params,
    free_vars,
    is_sentence,
    iter_ground_subterms,
    iter_subformulas,
    le,
    map_params,
    map_term_params,
    parse_formula,
    parse_term,
    print_formula,
    print_term,
    substitute,
    term_vars,
    terms_of_size,
)
from src.models import (
    JustificationKind,
    JustificationRecord,
    LemShape,
    ProofDocument,
    ProofHeader,
    ProofNodeRecord,
    Verdict,
)

# ============================================================================
# Proof objects
# ============================================================================


class AxiomSource(Protocol):
    """What the checker and the search need from an axiom basis"""

    name: str

    def contains(self, sentence: Formula) -> bool: ...

    def axiom_id(self, sentence: Formula) -> Optional[str]: ...

    def enumerate(self) -> Iterator[Formula]: ...


@dataclass(frozen=True)
class Justification:
    kind: JustificationKind
    rule: Optional[int] = None
    ancestor: Optional[int] = None
    term: Optional[Term] = None
    param: Optional[str] = None
    axiom: Optional[str] = None
    shape: Optional[LemShape] = None


@dataclass(frozen=True)
class ProofNode:
    id: int
    parent: Optional[int]
    sentence: Formula
    justification: Justification


@dataclass(frozen=True)
class Proof:
    """A candidate tree, nodes listed in pre-order with the root first"""

    goal: Formula
    nodes: Tuple[ProofNode, ...]
    basis: str
    level: EnrichmentLevel = NONE

    def children(self) -> Dict[int, List[int]]:
        result: Dict[int, List[int]] = {node.id: [] for node in self.nodes}
        for node in self.nodes:
            if node.parent is not None and node.parent in result:
                result[node.parent].append(node.id)
        return result


def proof_size(p: Proof) -> int:
    return len(p.nodes)


@dataclass(eq=False)
class DraftNode:
    """Mutable tree node used while assembling proofs; ancestors are object references"""

    sentence: Formula
    kind: JustificationKind
    rule: Optional[int] = None
    ancestor: Optional["DraftNode"] = None
    term: Optional[Term] = None
    param: Optional[str] = None
    axiom: Optional[str] = None
    shape: Optional[LemShape] = None
    children: List["DraftNode"] = field(default_factory=list)


def thaw(proof: Proof) -> DraftNode:
    """Draft tree of a proof; the proof's node list must be well formed"""
    drafts: Dict[int, DraftNode] = {}
    for node in proof.nodes:
        j = node.justification
        draft = DraftNode(
            node.sentence,
            j.kind,
            rule=j.rule,
            ancestor=drafts.get(j.ancestor) if j.ancestor is not None else None,
            term=j.term,
            param=j.param,
            axiom=j.axiom,
            shape=j.shape,
        )
        drafts[node.id] = draft
        if node.parent is not None:
            drafts[node.parent].children.append(draft)
    return drafts[proof.nodes[0].id]


def _uniquify_parameters(root: DraftNode) -> None:
    """Rename rule 5/6 parameters so each is introduced exactly once in the tree"""
    counter = itertools.count(1)
    stack: List[Tuple[DraftNode, Dict[str, str]]] = [(root, {})]
    while stack:
        node, mapping = stack.pop()
        if node.kind == JustificationKind.RULE and node.rule in (5, 6) and node.param:
            renamed = f"p{next(counter)}"
            mapping = {**mapping, node.param: renamed}
            node.param = renamed
        if mapping:
            node.sentence = map_params(node.sentence, mapping)
            if node.term is not None:
                node.term = map_term_params(node.term, mapping)
        for child in reversed(node.children):
            stack.append((child, mapping))


def freeze(goal: Formula, root: DraftNode, basis: str, level: EnrichmentLevel) -> Proof:
    """Number a draft tree in pre-order and build the immutable proof"""
    _uniquify_parameters(root)
    ids: Dict[int, int] = {}
    nodes: List[ProofNode] = []
    stack: List[Tuple[DraftNode, Optional[int]]] = [(root, None)]
    while stack:
        draft, parent = stack.pop()
        node_id = len(nodes)
        ids[id(draft)] = node_id
        ancestor = ids[id(draft.ancestor)] if draft.ancestor is not None else None
        nodes.append(
            ProofNode(
                node_id,
                parent,
                draft.sentence,
                Justification(
                    draft.kind,
                    rule=draft.rule,
                    ancestor=ancestor,
                    term=draft.term,
                    param=draft.param,
                    axiom=draft.axiom,
                    shape=draft.shape,
                ),
            )
        )
        for child in reversed(draft.children):
            stack.append((child, node_id))
    return Proof(goal=goal, nodes=tuple(nodes), basis=basis, level=level)

# ============================================================================
# Rule schemas
# ============================================================================


def rule1_results(f: Formula) -> Optional[Tuple[Formula, Formula]]:
    if isinstance(f, And):
        return f.left, f.right
    return None


def rule2_result(f: Formula) -> Optional[Formula]:
    """The single sentence rule 2 derives from a negation, if any"""
    if not isinstance(f, Not):
        return None
    g = f.body
    if isinstance(g, Not):
        return g.body
    if isinstance(g, Or):
        return And(Not(g.left), Not(g.right))
    if isinstance(g, Implies):
        return And(g.left, Not(g.right))
    if isinstance(g, And):
        return Or(Not(g.left), Not(g.right))
    if isinstance(g, Exists):
        return ForAll(g.var, Not(g.body))
    if isinstance(g, ForAll):
        return Exists(g.var, Not(g.body))
    if isinstance(g, BoundedExists):
        return BoundedForAll(g.var, g.bound, Not(g.body))
    if isinstance(g, BoundedForAll):
        return BoundedExists(g.var, g.bound, Not(g.body))
    return None


def split_results(f: Formula) -> Optional[Tuple[int, Formula, Formula]]:
    """(rule, left, right) for rules 3 and 4"""
    if isinstance(f, Or):
        return 3, f.left, f.right
    if isinstance(f, Implies):
        return 4, Not(f.left), f.right
    return None


def witness_result(f: Formula, param: str) -> Optional[Tuple[int, Formula]]:
    """(rule, result) for rules 5 and 6 with the given parameter"""
    p = Param(param)
    if isinstance(f, Exists):
        return 5, substitute(f.body, f.var, p)
    if isinstance(f, BoundedExists):
        return 6, And(le(p, f.bound), substitute(f.body, f.var, p))
    return None


@functools.lru_cache(maxsize=131072)
def instance_result(f: Formula, t: Term) -> Optional[Tuple[int, Formula]]:
    """(rule, result) for rules 7 and 8 with the given term"""
    if isinstance(f, ForAll):
        return 7, substitute(f.body, f.var, t)
    if isinstance(f, BoundedForAll):
        return 8, Implies(le(t, f.bound), substitute(f.body, f.var, t))
    return None


def branch_closed(sentences: Iterable[Formula]) -> bool:
    keys = set()
    negated = set()
    for s in sentences:
        keys.add(canonical(s))
        if isinstance(s, Not):
            negated.add(canonical(s.body))
    return not keys.isdisjoint(negated)

# ============================================================================
# Checker
# ============================================================================


class _Reject(Exception):
    def __init__(self, reason: str, node_id: Optional[int]):
        super().__init__(reason)
        self.reason = reason
        self.node_id = node_id


class ProofChecker:
    """
    Independent verifier for candidate trees.

    Shares only the rule schemas with the search; it never trusts the
    producer of the tree.
    """

    def __init__(
        self,
        basis: AxiomSource,
        level: EnrichmentLevel,
        allow_multi_variable: Optional[bool] = None,
    ):
        self.basis = basis
        self.level = level
        self.allow_multi_variable = allow_multi_variable

    def check(self, proof: Proof) -> Verdict:
        try:
            self._check(proof)
        except _Reject as rejection:
            return Verdict(valid=False, reason=rejection.reason, node_id=rejection.node_id)
        return Verdict(valid=True)

    def _check(self, proof: Proof) -> None:
        if not proof.nodes:
            raise _Reject("proof has no nodes", None)

        index: Dict[int, ProofNode] = {}
        paths: Dict[int, Tuple[int, ...]] = {}
        for position, node in enumerate(proof.nodes):
            if node.id in index:
                raise _Reject("duplicate node id", node.id)
            if position == 0:
                if node.parent is not None:
                    raise _Reject("first node must be the root", node.id)
                paths[node.id] = ()
            else:
                if node.parent is None or node.parent not in index:
                    raise _Reject("parent must be listed before the node", node.id)
                paths[node.id] = paths[node.parent] + (node.parent,)
            index[node.id] = node
        children = proof.children()

        for position, node in enumerate(proof.nodes):
            self._check_node(proof, position, node, index, paths, children)

    def _check_node(self, proof, position, node, index, paths, children) -> None:
        s = node.sentence
        j = node.justification
        if free_vars(s):
            raise _Reject("sentence has free variables", node.id)

        if position == 0:
            if j.kind != JustificationKind.ROOT:
                raise _Reject("root must carry the root justification", node.id)
            if canonical(s) != canonical(Not(proof.goal)):
                raise _Reject("root must be the negated goal", node.id)
        elif j.kind == JustificationKind.ROOT:
            raise _Reject("only the first node may be the root", node.id)
        elif j.kind == JustificationKind.AXIOM:
            if not self.basis.contains(s):
                raise _Reject(f"not an axiom of basis {self.basis.name}", node.id)
            if j.axiom is not None and self.basis.axiom_id(s) != j.axiom:
                raise _Reject(f"axiom id {j.axiom} does not name this sentence", node.id)
        elif j.kind == JustificationKind.LOGICAL:
            shape = lem_shape(s)
            if shape is None:
                raise _Reject("logical axiom is not an excluded-middle sentence", node.id)
            if j.shape != shape:
                raise _Reject(f"shape tag does not match: sentence is {shape.value}", node.id)
            if not permits(self.level, s, self.allow_multi_variable):
                raise _Reject(f"logical axiom not permitted at level {self.level}", node.id)
        else:
            self._check_rule(node, index, paths, children)

        kids = children[node.id]
        if len(kids) > 2:
            raise _Reject("node has more than two children", node.id)
        if len(kids) == 2:
            rules = {index[k].justification.rule for k in kids}
            if not rules <= {3, 4}:
                raise _Reject("branching is only allowed for rules 3 and 4", node.id)
        if not kids and not branch_closed(index[i].sentence for i in paths[node.id] + (node.id,)):
            raise _Reject("open branch", node.id)

    def _check_rule(self, node, index, paths, children) -> None:
        j = node.justification
        s = node.sentence
        if j.rule is None or j.ancestor is None:
            raise _Reject("rule application needs a rule and an ancestor", node.id)
        if j.ancestor not in paths[node.id]:
            raise _Reject("ancestor is not above the node on its branch", node.id)
        if j.rule in (5, 6):
            if j.param is None:
                raise _Reject(f"rule {j.rule} needs a fresh parameter", node.id)
        elif j.param is not None:
            raise _Reject(f"rule {j.rule} takes no parameter", node.id)
        if j.rule in (7, 8):
            if j.term is None:
                raise _Reject(f"rule {j.rule} needs an instantiation term", node.id)
            if term_vars(j.term):
                raise _Reject("instantiation term must be ground", node.id)
        elif j.term is not None:
            raise _Reject(f"rule {j.rule} takes no term", node.id)

        ancestor = index[j.ancestor].sentence
        key = canonical(s)

        if j.rule == 1:
            parts = rule1_results(ancestor)
            if parts is None or key not in (canonical(parts[0]), canonical(parts[1])):
                raise _Reject("rule 1 result is not a conjunct of the ancestor", node.id)
        elif j.rule == 2:
            expected = rule2_result(ancestor)
            if expected is None or key != canonical(expected):
                raise _Reject("rule 2 result does not match the ancestor", node.id)
        elif j.rule in (3, 4):
            self._check_split(node, index, children, ancestor)
        elif j.rule in (5, 6):
            above = (index[i].sentence for i in paths[node.id])
            if any(j.param in formula_params(f) for f in above):
                raise _Reject(f"parameter #{j.param} is not fresh", node.id)
            expected = witness_result(ancestor, j.param)
            if expected is None or expected[0] != j.rule or key != canonical(expected[1]):
                raise _Reject(f"rule {j.rule} result does not match the ancestor", node.id)
        elif j.rule in (7, 8):
            expected = instance_result(ancestor, j.term)
            if expected is None or expected[0] != j.rule or key != canonical(expected[1]):
                raise _Reject(f"rule {j.rule} result does not match the ancestor", node.id)
        else:
            raise _Reject(f"unknown rule {j.rule}", node.id)

    def _check_split(self, node, index, children, ancestor) -> None:
        j = node.justification
        expected = split_results(ancestor)
        if expected is None or expected[0] != j.rule:
            raise _Reject(f"rule {j.rule} does not apply to the ancestor", node.id)
        siblings = children[node.parent]
        if len(siblings) != 2:
            raise _Reject(f"rule {j.rule} result without its sibling", node.id)
        first, second = (index[i] for i in siblings)
        for other in (first, second):
            oj = other.justification
            if oj.kind != JustificationKind.RULE or oj.rule != j.rule or oj.ancestor != j.ancestor:
                raise _Reject("siblings must come from one rule 3/4 application", node.id)
        pair = (canonical(first.sentence), canonical(second.sentence))
        wanted = (canonical(expected[1]), canonical(expected[2]))
        if pair != wanted and pair != wanted[::-1]:
            raise _Reject(f"rule {j.rule} siblings do not match the ancestor", node.id)


def check_proof(
    p: Proof,
    basis: AxiomSource,
    level: Optional[EnrichmentLevel] = None,
    allow_multi_variable: Optional[bool] = None,
) -> Verdict:
    """
    Verify p against basis at level (p's recorded level when omitted).

    Total: malformed trees come back as an invalid verdict naming the first
    offending node.
    """
    return ProofChecker(basis, level if level is not None else p.level,
                        allow_multi_variable).check(p)

# ============================================================================
# Search
# ============================================================================


@dataclass(frozen=True)
class NotFoundWithinBudget:
    """Search gave up; never a claim that the goal is unprovable"""

    budget: int
    expansions: int
    depth_reached: int
    exhausted: bool = False

    def __bool__(self) -> bool:
        return False


class _BudgetExhausted(Exception):
    pass


@dataclass(eq=False)
class _Step:
    sentence: Formula
    kind: JustificationKind
    rule: Optional[int] = None
    anchor: Optional[int] = None
    term: Optional[Term] = None
    param: Optional[str] = None
    axiom: Optional[str] = None
    shape: Optional[LemShape] = None
    children: List["_Step"] = field(default_factory=list)


@dataclass(frozen=True)
class _Move:
    order: Tuple[int, int, int]
    cost: int
    kind: JustificationKind
    anchor: Optional[int]
    result: Formula
    rule: Optional[int] = None
    second: Optional[Formula] = None
    term: Optional[Term] = None
    param: Optional[str] = None
    axiom: Optional[str] = None
    shape: Optional[LemShape] = None
    marks: Optional[tuple] = None


# Move groups, tried in this order after closers
_ALPHA, _AXIOM, _BETA, _GAMMA, _LOGICAL = range(5)

_CONSTANTS: Tuple[Term, ...] = (C0, C1, C2)


@functools.lru_cache(maxsize=1024)
def _generated_terms(base: Tuple[Term, ...], max_size: int) -> Tuple[Tuple[int, Term], ...]:
    """Function applications over base by increasing size, from 2 to max_size"""
    return tuple((size, t) for size in range(2, max_size + 1) for t in terms_of_size(base, size))


@functools.lru_cache(maxsize=65536)
def _ground_terms(f: Formula) -> Tuple[Term, ...]:
    return tuple(dict.fromkeys(iter_ground_subterms(f)))


@functools.lru_cache(maxsize=65536)
def _closed_subformulas(f: Formula) -> Tuple[Formula, ...]:
    return tuple(dict.fromkeys(g for g in iter_subformulas(f) if is_sentence(g)))


class ProofSearch:
    """
    Budgeted iterative-deepening search for a proof of a goal.

    Each deepening level bounds the weight of the tree still to be built: one
    per node, plus the size of generated instantiation terms beyond one.
    Within a level, moves that close the branch go first, then rules
    1, 2, 5 and 6, axiom insertions, rule 3/4 splits, rule 7/8
    instantiations and finally excluded-middle axioms. Failing states are
    remembered per deepening limit.

    The budget counts attempted moves. expansions is readable after run().
    """

    def __init__(
        self,
        basis: AxiomSource,
        level: EnrichmentLevel = NONE,
        budget: Optional[int] = None,
        max_term_size: Optional[int] = None,
        allow_multi_variable: Optional[bool] = None,
    ):
        self.basis = basis
        self.level = level
        self.budget = budget if budget is not None else default_budget()
        self.max_term_size = (
            max_term_size
            if max_term_size is not None
            else int(get_config().get("search", "max_term_size"))
        )
        self.allow_multi_variable = allow_multi_variable
        self.expansions = 0
        self.depth_reached = 0

        self._axioms: List[Tuple[Formula, Optional[str]]] = []
        self._axiom_source = iter(basis.enumerate())
        self._axioms_done = False

        self._entries: List[Tuple[Formula, tuple]] = []
        self._keys: Counter = Counter()
        self._params: Counter = Counter()
        self._marks: Counter = Counter()
        self._failed: Dict[tuple, Tuple[int, bool]] = {}
        self._cutoff = False

    # ===== Branch bookkeeping =====

    def _push(self, sentence: Formula) -> bool:
        """Add sentence to the branch; True when the branch is now closed"""
        key = canonical(sentence)
        closes = self._keys[("~", key)] > 0 or (
            isinstance(sentence, Not) and self._keys[canonical(sentence.body)] > 0
        )
        self._entries.append((sentence, key))
        self._keys[key] += 1
        for p in formula_params(sentence):
            self._params[p] += 1
        return closes

    def _pop(self) -> None:
        sentence, key = self._entries.pop()
        self._keys[key] -= 1
        if not self._keys[key]:
            del self._keys[key]
        for p in formula_params(sentence):
            self._params[p] -= 1
            if not self._params[p]:
                del self._params[p]

    def _on_branch(self, f: Formula) -> bool:
        return self._keys[canonical(f)] > 0

    def _would_close(self, f: Formula) -> bool:
        key = canonical(f)
        return self._keys[("~", key)] > 0 or (
            isinstance(f, Not) and self._keys[canonical(f.body)] > 0
        )

    def _state(self) -> tuple:
        return (frozenset(self._keys), frozenset(self._marks))

    def _spend(self) -> None:
        self.expansions += 1
        if self.expansions > self.budget:
            raise _BudgetExhausted()

    def _fresh_param(self) -> str:
        index = len(self._params) + 1
        while f"p{index}" in self._params:
            index += 1
        return f"p{index}"

    def _axiom_window(self, limit: int) -> List[Tuple[Formula, Optional[str]]]:
        wanted = 16 + 4 * limit
        while not self._axioms_done and len(self._axioms) < wanted:
            try:
                axiom = next(self._axiom_source)
            except StopIteration:
                self._axioms_done = True
                break
            self._axioms.append((axiom, self.basis.axiom_id(axiom)))
        return self._axioms[:wanted]

    # ===== Moves =====

    def _closing_rank(self, f: Formula, second: Optional[Formula] = None) -> int:
        """0 closes the branch outright, 1 leaves a split with one closed side, 2 otherwise"""
        if second is not None:
            left, right = self._would_close(f), self._would_close(second)
            return 0 if left and right else (1 if left or right else 2)
        if self._would_close(f):
            return 0
        split = split_results(f)
        if split is not None and (self._would_close(split[1]) or self._would_close(split[2])):
            return 1
        return 2

    def _term_pool(self) -> List[Tuple[int, Term]]:
        params = tuple(Param(p) for p in self._params)
        pool: Dict[Term, int] = {t: 1 for t in params + _CONSTANTS}
        for sentence, _ in self._entries:
            for t in _ground_terms(sentence):
                pool.setdefault(t, 1)
        base = params + _CONSTANTS
        for size, t in _generated_terms(base, self.max_term_size):
            pool.setdefault(t, size)
        return list(pool.items())

    def _moves(self, limit: int) -> List[_Move]:
        moves: List[_Move] = []
        seen = set()

        def add(move: _Move) -> None:
            ident = (move.kind, move.rule, move.anchor, canonical(move.result),
                     canonical(move.second) if move.second is not None else None)
            if ident not in seen:
                seen.add(ident)
                moves.append(move)

        universals: List[Tuple[int, Formula]] = []
        for position, (s, key) in enumerate(self._entries):
            parts = rule1_results(s)
            if parts is not None:
                for part in parts:
                    if not self._on_branch(part):
                        add(_Move((self._closing_rank(part), _ALPHA, 1), 1,
                                  JustificationKind.RULE, position, part, rule=1))
                continue
            opened = rule2_result(s)
            if opened is not None:
                if not self._on_branch(opened):
                    add(_Move((self._closing_rank(opened), _ALPHA, 1), 1,
                              JustificationKind.RULE, position, opened, rule=2))
                continue
            if isinstance(s, (Exists, BoundedExists)):
                mark = ("delta", key)
                if not self._marks[mark]:
                    param = self._fresh_param()
                    rule, result = witness_result(s, param)
                    add(_Move((self._closing_rank(result), _ALPHA, 1), 1,
                              JustificationKind.RULE, position, result, rule=rule,
                              param=param, marks=mark))
                continue
            split = split_results(s)
            if split is not None:
                mark = ("split", key)
                rule, left, right = split
                if not self._marks[mark] and not self._on_branch(left) and not self._on_branch(right):
                    add(_Move((self._closing_rank(left, right), _BETA, 2), 2,
                              JustificationKind.RULE, position, left, rule=rule,
                              second=right, marks=mark))
                continue
            if isinstance(s, (ForAll, BoundedForAll)):
                universals.append((position, s))

        window = self._axiom_window(limit)
        if not self._axioms_done:
            # the basis may hold axioms beyond the window
            self._cutoff = True
        for axiom, axiom_id in window:
            if not self._on_branch(axiom):
                add(_Move((self._closing_rank(axiom), _AXIOM, 1), 1,
                          JustificationKind.AXIOM, None, axiom, axiom=axiom_id))

        if universals:
            for term, cost in self._term_pool():
                if cost > limit:
                    self._cutoff = True
                    continue
                for position, s in universals:
                    rule, result = instance_result(s, term)
                    if not self._on_branch(result):
                        add(_Move((self._closing_rank(result), _GAMMA, cost), cost,
                                  JustificationKind.RULE, position, result, rule=rule,
                                  term=term))

        if self.level != NONE:
            for sentence, _ in list(self._entries):
                for psi in _closed_subformulas(sentence):
                    candidate = Or(psi, Not(psi))
                    if self._on_branch(candidate):
                        continue
                    if permits(self.level, candidate, self.allow_multi_variable):
                        add(_Move((self._closing_rank(candidate), _LOGICAL, 1), 1,
                                  JustificationKind.LOGICAL, None, candidate,
                                  shape=LemShape.LEM))

        moves.sort(key=lambda m: m.order)
        return moves

    # ===== Deepening =====

    def _close(self, limit: int) -> Optional[Tuple[int, List[_Step]]]:
        state = self._state()
        remembered = self._failed.get(state)
        if remembered is not None:
            failed_limit, dead = remembered
            if dead:
                return None
            if limit <= failed_limit:
                self._cutoff = True
                return None
        outer = self._cutoff
        self._cutoff = False
        found = self._expand(limit) if limit > 0 else self._mark_frontier()
        if found is None:
            previous = self._failed.get(state, (-1, False))[0]
            self._failed[state] = (max(limit, previous), not self._cutoff)
        self._cutoff = outer or self._cutoff
        return found

    def _mark_frontier(self) -> None:
        """At limit zero: flag a cutoff when any move would exist"""
        if self._moves(1):
            self._cutoff = True
        return None

    def _close_min(self, limit: int) -> Optional[Tuple[int, List[_Step]]]:
        outer = self._cutoff
        for attempt in range(limit + 1):
            self._cutoff = False
            found = self._close(attempt)
            if found is not None:
                self._cutoff = outer
                return found
        self._cutoff = outer or self._cutoff
        return None

    def _expand(self, limit: int) -> Optional[Tuple[int, List[_Step]]]:
        self.depth_reached = max(self.depth_reached, len(self._entries))
        for move in self._moves(limit):
            if move.cost > limit:
                self._cutoff = True
                continue
            self._spend()
            if move.marks is not None:
                self._marks[move.marks] += 1
            try:
                found = self._apply(move, limit)
            finally:
                if move.marks is not None:
                    self._marks[move.marks] -= 1
                    if not self._marks[move.marks]:
                        del self._marks[move.marks]
            if found is not None:
                return found
        return None

    def _step(self, move: _Move, sentence: Formula, children: List[_Step]) -> _Step:
        return _Step(sentence, move.kind, rule=move.rule, anchor=move.anchor, term=move.term,
                     param=move.param, axiom=move.axiom, shape=move.shape, children=children)

    def _apply(self, move: _Move, limit: int) -> Optional[Tuple[int, List[_Step]]]:
        remaining = limit - move.cost
        if move.second is None:
            closed = self._push(move.result)
            try:
                sub = (0, []) if closed else self._close(remaining)
            finally:
                self._pop()
            if sub is None:
                return None
            return move.cost + sub[0], [self._step(move, move.result, sub[1])]

        closed = self._push(move.result)
        try:
            left = (0, []) if closed else self._close_min(remaining)
        finally:
            self._pop()
        if left is None:
            return None
        closed = self._push(move.second)
        try:
            right = (0, []) if closed else self._close(remaining - left[0])
        finally:
            self._pop()
        if right is None:
            return None
        return move.cost + left[0] + right[0], [
            self._step(move, move.result, left[1]),
            self._step(move, move.second, right[1]),
        ]

    # ===== Entry point =====

    def run(self, goal: Formula) -> Union[Proof, NotFoundWithinBudget]:
        unbound = free_vars(goal)
        if unbound:
            raise NotClosedError(f"Goal has free variable(s): {', '.join(sorted(unbound))}")
        started = time.perf_counter()
        root = Not(goal)
        self._push(root)
        limit = 0
        try:
            while True:
                self._cutoff = False
                found = self._close(limit)
                if found is not None:
                    proof = self._assemble(goal, root, found[1])
                    log(f"✓ Proof found: {proof_size(proof)} nodes, {self.expansions} "
                        f"expansions, {(time.perf_counter() - started) * 1000:.1f}ms")
                    return proof
                if not self._cutoff:
                    log(f"✗ Search space exhausted after {self.expansions} expansions")
                    return NotFoundWithinBudget(self.budget, self.expansions,
                                                self.depth_reached, exhausted=True)
                limit += 1
        except _BudgetExhausted:
            log(f"✗ Budget of {self.budget} expansions exhausted at limit {limit}")
            return NotFoundWithinBudget(self.budget, self.expansions, self.depth_reached)
        finally:
            self._entries.clear()
            self._keys.clear()
            self._params.clear()
            self._marks.clear()

    def _assemble(self, goal: Formula, root: Formula, steps: List[_Step]) -> Proof:
        root_draft = DraftNode(root, JustificationKind.ROOT)

        def materialize(items: List[_Step], path: List[DraftNode]) -> List[DraftNode]:
            drafts = []
            for step in items:
                draft = DraftNode(
                    step.sentence,
                    step.kind,
                    rule=step.rule,
                    ancestor=path[step.anchor] if step.anchor is not None else None,
                    term=step.term,
                    param=step.param,
                    axiom=step.axiom,
                    shape=step.shape,
                )
                draft.children = materialize(step.children, path + [draft])
                drafts.append(draft)
            return drafts

        root_draft.children = materialize(steps, [root_draft])
        return freeze(goal, root_draft, self.basis.name, self.level)


def prove(
    goal: Formula,
    basis: AxiomSource,
    level: EnrichmentLevel = NONE,
    budget: Optional[int] = None,
    max_term_size: Optional[int] = None,
) -> Union[Proof, NotFoundWithinBudget]:
    """
    Search for a tableaux proof of goal.

    Returns the proof, or NotFoundWithinBudget once the expansion budget runs
    out (or the finite search space is used up).

    Raises:
        NotClosedError: goal has free variables
    """
    return ProofSearch(basis, level, budget, max_term_size).run(goal)

# ============================================================================
# Proof files
# ============================================================================


def proof_to_document(proof: Proof) -> ProofDocument:
    records = []
    for node in proof.nodes:
        j = node.justification
        records.append(
            ProofNodeRecord(
                id=node.id,
                parent=node.parent,
                sentence=print_formula(node.sentence),
                justification=JustificationRecord(
                    kind=j.kind,
                    rule=j.rule,
                    ancestor=j.ancestor,
                    term=print_term(j.term) if j.term is not None else None,
                    param=j.param,
                    axiom=j.axiom,
                    shape=j.shape,
                ),
            )
        )
    header = ProofHeader(
        goal=print_formula(proof.goal),
        basis=proof.basis,
        level=str(proof.level),
    )
    return ProofDocument(header=header, nodes=records)


def proof_from_document(document: ProofDocument) -> Proof:
    """
    Raises:
        ProofFormatError: a sentence, term or level does not parse
    """
    header = document.header
    try:
        goal = parse_formula(header.goal)
        level = EnrichmentLevel.parse(header.level)
    except LStarError as e:
        raise ProofFormatError(f"Bad proof header: {e.message}") from e

    nodes = []
    for record in document.nodes:
        j = record.justification
        try:
            sentence = parse_formula(record.sentence, allow_params=True)
            term = parse_term(j.term, allow_params=True) if j.term is not None else None
        except LStarError as e:
            raise ProofFormatError(f"Node {record.id}: {e.message}", {"node_id": record.id}) from e
        nodes.append(
            ProofNode(
                record.id,
                record.parent,
                sentence,
                Justification(j.kind, j.rule, j.ancestor, term, j.param, j.axiom, j.shape),
            )
        )
    return Proof(goal=goal, nodes=tuple(nodes), basis=header.basis, level=level)


def dumps_proof(proof: Proof) -> bytes:
    """JSON Lines: header, then one node record per line, LF-terminated"""
    document = proof_to_document(proof)
    lines = [orjson.dumps(document.header.model_dump(mode="json"),
                          option=orjson.OPT_APPEND_NEWLINE)]
    lines.extend(orjson.dumps(record.to_wire(), option=orjson.OPT_APPEND_NEWLINE)
                 for record in document.nodes)
    return b"".join(lines)


def loads_document(data: bytes) -> ProofDocument:
    lines = [line for line in data.split(b"\n") if line.strip()]
    if not lines:
        raise ProofFormatError("Empty proof file")
    try:
        header = ProofHeader.model_validate(orjson.loads(lines[0]))
        records = [ProofNodeRecord.model_validate(orjson.loads(line)) for line in lines[1:]]
    except orjson.JSONDecodeError as e:
        raise ProofFormatError(f"Proof file is not JSON Lines: {e}") from e
    except ValidationError as e:
        raise ProofFormatError(f"Invalid proof record: {e.errors()[0]['msg']}") from e
    return ProofDocument(header=header, nodes=records)


def loads_proof(data: bytes) -> Proof:
    return proof_from_document(loads_document(data))


def write_proof_file(proof: Proof, path: Union[str, Path]) -> None:
    Path(path).write_bytes(dumps_proof(proof))


def read_proof_file(path: Union[str, Path]) -> Proof:
    """
    Raises:
        ProofFormatError: unreadable or malformed file
    """
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise ProofFormatError(f"Cannot read proof file {path}: {e.strerror}") from e
    return loads_proof(data)
