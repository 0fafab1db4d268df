"""
Prenex* normal form and the Delta0 / Pi / Sigma classification.

A Prenex* formula is a block of unbounded quantifiers over a Delta0 matrix.
Bounded quantifiers stay in the matrix; only when a bounded quantifier
governs an unbounded one is it rewritten into its unbounded equivalent
(A v <= t. P  ->  A v. (v <= t -> P)) so the inner quantifier can move out.
"""

from typing import FrozenSet, List, Optional, Tuple

from src.errors import NotClosedError, NotPrenexError
from src.lang import (
    And,
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
    all_variable_names,
    encode_nat,
    free_vars,
    fresh_variable,
    le,
    substitute,
    term_vars,
)
from src.models import PrenexClass, PrenexShape
from src.semantics import is_delta0

# A prefix entry is (is_universal, variable)
Prefix = List[Tuple[bool, str]]


def split_prefix(f: Formula) -> Tuple[Prefix, Formula]:
    prefix: Prefix = []
    while isinstance(f, (ForAll, Exists)):
        prefix.append((isinstance(f, ForAll), f.var))
        f = f.body
    return prefix, f


def is_prenex(f: Formula) -> bool:
    return is_delta0(split_prefix(f)[1])


def classify(s: Formula) -> PrenexClass:
    """
    Classify a Prenex* sentence.

    Raises:
        NotPrenexError: the matrix under the unbounded prefix is not Delta0
    """
    prefix, matrix = split_prefix(s)
    if not is_delta0(matrix):
        raise NotPrenexError(
            "Sentence is not in Prenex* form; normalize it with to_prenex first"
        )
    if not prefix:
        return PrenexClass(shape=PrenexShape.DELTA0, rank=0)
    blocks = 1
    for (previous, _), (current, _) in zip(prefix, prefix[1:]):
        if previous != current:
            blocks += 1
    shape = PrenexShape.PI if prefix[0][0] else PrenexShape.SIGMA
    return PrenexClass(shape=shape, rank=blocks)


def strip_leading_block(s: Formula) -> Formula:
    """Drop the outermost block of like unbounded quantifiers"""
    if not isinstance(s, (ForAll, Exists)):
        return s
    kind = type(s)
    while isinstance(s, kind):
        s = s.body
    return s


# ============================================================================
# Normalization
# ============================================================================


def _rename_apart(f: Formula, used: set, avoid: frozenset) -> Formula:
    """Give every quantifier its own variable name"""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(_rename_apart(f.body, used, avoid))
    if isinstance(f, (And, Or, Implies)):
        left = _rename_apart(f.left, used, avoid)
        return type(f)(left, _rename_apart(f.right, used, avoid))
    var, body = f.var, f.body
    if var in used:
        new_var = fresh_variable(var, used | avoid)
        body = substitute(body, var, Var(new_var))
        var = new_var
    used.add(var)
    body = _rename_apart(body, used, avoid)
    if isinstance(f, (BoundedForAll, BoundedExists)):
        return type(f)(var, f.bound, body)
    return type(f)(var, body)


def _flip(prefix: Prefix) -> Prefix:
    return [(not universal, var) for universal, var in prefix]


def _pull(f: Formula) -> Tuple[Prefix, Formula]:
    if isinstance(f, Atom):
        return [], f
    if isinstance(f, Not):
        prefix, matrix = _pull(f.body)
        return _flip(prefix), Not(matrix)
    if isinstance(f, (And, Or)):
        left_prefix, left = _pull(f.left)
        right_prefix, right = _pull(f.right)
        return left_prefix + right_prefix, type(f)(left, right)
    if isinstance(f, Implies):
        left_prefix, left = _pull(f.left)
        right_prefix, right = _pull(f.right)
        return _flip(left_prefix) + right_prefix, Implies(left, right)
    if isinstance(f, (ForAll, Exists)):
        prefix, matrix = _pull(f.body)
        return [(isinstance(f, ForAll), f.var)] + prefix, matrix
    if is_delta0(f.body):
        return [], f
    guard = le(Var(f.var), f.bound)
    if isinstance(f, BoundedForAll):
        return _pull(ForAll(f.var, Implies(guard, f.body)))
    return _pull(Exists(f.var, And(guard, f.body)))


def to_prenex(f: Formula) -> Formula:
    """
    Equivalent Prenex* sentence: unbounded quantifiers pulled left-to-right,
    outermost first, after renaming bound variables apart.

    Raises:
        NotClosedError: f has free variables
    """
    unbound = free_vars(f)
    if unbound:
        raise NotClosedError(f"to_prenex needs a sentence; free: {', '.join(sorted(unbound))}")
    renamed = _rename_apart(f, set(), all_variable_names(f))
    prefix, matrix = _pull(renamed)
    for universal, var in reversed(prefix):
        matrix = ForAll(var, matrix) if universal else Exists(var, matrix)
    return matrix


def _guard_bound(body: Formula, var: str, universal: bool) -> Optional[Term]:
    """
    Bound t of the guard `var <= t` that to_prenex leaves where a bounded
    quantifier was unfolded: `var <= t -> ...` under a universal,
    `var <= t & ...` under an existential, with the roles swapped under
    negative polarity. t may only mention variables bound outside `var`.
    """

    def is_guard(g: Formula, inner: FrozenSet[str]) -> bool:
        return (
            isinstance(g, Atom)
            and g.rel == "<="
            and g.lhs == Var(var)
            and not term_vars(g.rhs) & (inner | {var})
        )

    def walk(g: Formula, positive: bool, inner: FrozenSet[str]) -> Optional[Term]:
        if isinstance(g, Atom):
            return None
        if isinstance(g, Not):
            return walk(g.body, not positive, inner)
        if isinstance(g, (And, Or, Implies)):
            wanted = Implies if universal == positive else And
            if isinstance(g, wanted) and is_guard(g.left, inner):
                return g.left.rhs
            left_positive = not positive if isinstance(g, Implies) else positive
            found = walk(g.left, left_positive, inner)
            if found is None:
                found = walk(g.right, positive, inner)
            return found
        if g.var == var:
            return None
        return walk(g.body, positive, inner | {g.var})

    return walk(body, True, frozenset())


def truncate(f: Formula, bound: int) -> Formula:
    """
    Replace every unbounded quantifier with its bounded form at encode_nat(bound).

    A quantifier guarded by `v <= t` in its scope (the shape to_prenex gives an
    unfolded bounded quantifier) is bounded at t instead, so truncation agrees
    on a sentence and its Prenex* form.
    """
    numeral = encode_nat(bound)

    def visit(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return g
        if isinstance(g, Not):
            return Not(visit(g.body))
        if isinstance(g, (And, Or, Implies)):
            return type(g)(visit(g.left), visit(g.right))
        if isinstance(g, (ForAll, Exists)):
            universal = isinstance(g, ForAll)
            guard = _guard_bound(g.body, g.var, universal)
            cap = numeral if guard is None else guard
            if universal:
                return BoundedForAll(g.var, cap, visit(g.body))
            return BoundedExists(g.var, cap, visit(g.body))
        return type(g)(g.var, g.bound, visit(g.body))

    return visit(f)
