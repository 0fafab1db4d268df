"""
Standard-model semantics of L* over the naturals.

Ground terms evaluate exactly with Python integers. Delta0 formulas are
decided by enumerating bounded quantifiers from 0 up to the bound, with
short-circuiting and a ceiling on the total number of assignments per call.
"""

import math
from typing import Callable, Dict, Mapping, Optional

from src.config import enumeration_ceiling
from src.errors import (
    EnumerationCeilingExceeded,
    NotClosedError,
    NotDelta0Error,
    UnassignedVariableError,
)
from src.lang import (
    BOUNDED_QUANTIFIERS,
    And,
    Atom,
    BoundedForAll,
    Const,
    Exists,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    Param,
    Term,
    Var,
    free_vars,
)

# Variables are keyed by name, parameters by "#name".
Environment = Mapping[str, int]

# ============================================================================
# Grounding functions
# ============================================================================


def g_sub(x: int, y: int) -> int:
    return x - y if x >= y else 0


def g_div(x: int, y: int) -> int:
    return x if y == 0 else x // y


def g_pred(x: int) -> int:
    return x - 1 if x > 0 else 0


def g_max(x: int, y: int) -> int:
    return x if x >= y else y


def g_log(x: int) -> int:
    """ceil(log2(x + 1)), which is the binary length of x"""
    return x.bit_length()


def integer_root(x: int, n: int) -> int:
    """Largest r with r**n <= x, for n >= 1"""
    if x < 2 or n == 1:
        return x
    if n >= x.bit_length():
        return 1
    if n == 2:
        return math.isqrt(x)
    # binary search on r over [lo, hi) with lo**n <= x < hi**n
    lo = 1 << ((x.bit_length() - 1) // n)
    hi = lo << 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if mid ** n <= x:
            lo = mid
        else:
            hi = mid
    return lo


def g_root(x: int, y: int) -> int:
    return x if y == 0 else integer_root(x, y)


def g_count(x: int, j: int) -> int:
    """Number of 1-bits among the j rightmost bits of x"""
    if j >= x.bit_length():
        return x.bit_count()
    return (x & ((1 << j) - 1)).bit_count()


def g_bit(x: int, i: int) -> int:
    """The i-th rightmost bit of x, counting from 1; bit(x, 0) = 0"""
    if i == 0 or i > x.bit_length():
        return 0
    return (x >> (i - 1)) & 1


def g_add(x: int, y: int) -> int:
    return x + y


def g_double(x: int) -> int:
    return x << 1


GROUNDING: Dict[str, Callable[..., int]] = {
    "sub": g_sub,
    "div": g_div,
    "pred": g_pred,
    "max": g_max,
    "log": g_log,
    "root": g_root,
    "count": g_count,
    "bit": g_bit,
    "add": g_add,
    "double": g_double,
}

# ============================================================================
# Evaluation
# ============================================================================


def eval_term(t: Term, env: Optional[Environment] = None) -> int:
    """
    Evaluate a term in the standard model.

    Args:
        t: Term to evaluate
        env: Values for variables (by name) and parameters (by "#name")

    Returns:
        The natural number denoted by t

    Raises:
        UnassignedVariableError: a variable or parameter of t has no value
    """
    env = env or {}
    if isinstance(t, Const):
        return t.index
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnassignedVariableError(f"Variable '{t.name}' is not assigned") from None
    if isinstance(t, Param):
        try:
            return env[f"#{t.name}"]
        except KeyError:
            raise UnassignedVariableError(f"Parameter '#{t.name}' is not assigned") from None
    return GROUNDING[t.fn](*(eval_term(a, env) for a in t.args))


def is_delta0(f: Formula) -> bool:
    """True when every quantifier in f is bounded"""
    if isinstance(f, Atom):
        return True
    if isinstance(f, Not):
        return is_delta0(f.body)
    if isinstance(f, (And, Or, Implies)):
        return is_delta0(f.left) and is_delta0(f.right)
    if isinstance(f, BOUNDED_QUANTIFIERS):
        return is_delta0(f.body)
    return False


class Delta0Evaluator:
    """
    Structural-recursion evaluator for Delta0 formulas.

    One instance counts bounded-quantifier assignments across a whole
    decision; passing the ceiling raises EnumerationCeilingExceeded.
    """

    def __init__(self, ceiling: Optional[int] = None):
        self.ceiling = ceiling if ceiling is not None else enumeration_ceiling()
        self.assignments = 0

    def _tick(self) -> None:
        self.assignments += 1
        if self.assignments > self.ceiling:
            raise EnumerationCeilingExceeded(
                f"Bounded enumeration exceeded {self.ceiling} assignments",
                {"ceiling": self.ceiling},
            )

    def holds(self, f: Formula, env: Dict[str, int]) -> bool:
        if isinstance(f, Atom):
            lhs = eval_term(f.lhs, env)
            rhs = eval_term(f.rhs, env)
            return lhs == rhs if f.rel == "=" else lhs <= rhs
        if isinstance(f, Not):
            return not self.holds(f.body, env)
        if isinstance(f, And):
            return self.holds(f.left, env) and self.holds(f.right, env)
        if isinstance(f, Or):
            return self.holds(f.left, env) or self.holds(f.right, env)
        if isinstance(f, Implies):
            return (not self.holds(f.left, env)) or self.holds(f.right, env)
        if isinstance(f, (ForAll, Exists)):
            raise NotDelta0Error(f"Unbounded quantifier over '{f.var}' in a Delta0 context")

        bound = eval_term(f.bound, env)
        inner = dict(env)
        universal = isinstance(f, BoundedForAll)
        for value in range(bound + 1):
            self._tick()
            inner[f.var] = value
            if self.holds(f.body, inner) != universal:
                return not universal
        return universal


def holds(f: Formula, env: Optional[Environment] = None, ceiling: Optional[int] = None) -> bool:
    """
    Truth of a Delta0 formula under env.

    Raises:
        NotDelta0Error: f has an unbounded quantifier
        UnassignedVariableError: env misses a free variable of f
    """
    if not is_delta0(f):
        raise NotDelta0Error("Formula is not Delta0: it has an unbounded quantifier")
    missing = [v for v in free_vars(f) if v not in (env or {})]
    if missing:
        raise UnassignedVariableError(f"Unassigned variable(s): {', '.join(sorted(missing))}")
    return Delta0Evaluator(ceiling).holds(f, dict(env or {}))


def decide_delta0(s: Formula, ceiling: Optional[int] = None) -> bool:
    """
    Decide a closed Delta0 sentence in the standard model.

    Raises:
        NotClosedError: s has free variables
        NotDelta0Error: s has an unbounded quantifier
    """
    unbound = free_vars(s)
    if unbound:
        raise NotClosedError(f"Sentence has free variable(s): {', '.join(sorted(unbound))}")
    return holds(s, {}, ceiling)
