"""
Enrichment levels and the excluded-middle gate.

An enrichment level decides which excluded-middle sentences a tableaux proof
may cite as logical axioms:

    none       nothing
    rank0      Psi | ~Psi for Delta0 sentences Psi
    rank0plus  rank0, plus universal closures A x. (psi | ~psi) of Delta0 psi
    rankK:k    Psi | ~Psi for Prenex* sentences of rank <= k
    inf        Psi | ~Psi for every sentence Psi
"""

import functools
from dataclasses import dataclass
from typing import List, Optional

from src.config import get_config
from src.errors import LStarError, NotClosedError, NotDelta0Error, NotPrenexError
from src.lang import (
    ForAll,
    Formula,
    Not,
    Or,
    alpha_equal,
    forall_many,
    free_vars,
    free_vars_ordered,
)
from src.models import LemShape, LevelKind
from src.prenex import classify
from src.semantics import is_delta0

_LEVEL_ORDER = {
    LevelKind.NONE: 0,
    LevelKind.RANK_ZERO: 1,
    LevelKind.RANK_ZERO_PLUS: 2,
    LevelKind.RANK_K: 3,
    LevelKind.INFINITE: 4,
}

# ============================================================================
# Levels
# ============================================================================


@functools.total_ordering
@dataclass(frozen=True)
class EnrichmentLevel:
    """A point on the chain none < rank0 < rank0plus < rankK:1 < rankK:2 < ... < inf"""

    kind: LevelKind
    k: int = 0

    def __post_init__(self):
        if self.kind == LevelKind.RANK_K:
            if self.k < 1:
                raise LStarError(f"rankK level needs k >= 1, got {self.k}")
        elif self.k != 0:
            raise LStarError(f"Level {self.kind.value} takes no rank argument")

    @property
    def _key(self):
        return (_LEVEL_ORDER[self.kind], self.k)

    def __lt__(self, other: "EnrichmentLevel") -> bool:
        if not isinstance(other, EnrichmentLevel):
            return NotImplemented
        return self._key < other._key

    def __str__(self) -> str:
        if self.kind == LevelKind.RANK_K:
            return f"rankK:{self.k}"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> "EnrichmentLevel":
        """Parse none | rank0 | rank0plus | rankK:k | inf"""
        value = text.strip()
        if value.startswith("rankK:"):
            digits = value[len("rankK:"):]
            if not digits.isdigit():
                raise LStarError(f"Invalid rank in level '{text}'")
            return cls(LevelKind.RANK_K, int(digits))
        try:
            return cls(LevelKind(value))
        except ValueError:
            raise LStarError(
                f"Unknown enrichment level '{text}'",
                {"expected": "none|rank0|rank0plus|rankK:k|inf"},
            ) from None

    @classmethod
    def rank(cls, k: int) -> "EnrichmentLevel":
        return cls(LevelKind.RANK_K, k)


NONE = EnrichmentLevel(LevelKind.NONE)
RANK_ZERO = EnrichmentLevel(LevelKind.RANK_ZERO)
RANK_ZERO_PLUS = EnrichmentLevel(LevelKind.RANK_ZERO_PLUS)
INFINITE = EnrichmentLevel(LevelKind.INFINITE)

# ============================================================================
# Excluded-middle axioms
# ============================================================================


def lem_axiom(psi: Formula) -> Formula:
    """psi | ~psi for a sentence psi"""
    unbound = free_vars(psi)
    if unbound:
        raise NotClosedError(
            f"lem_axiom needs a sentence; free: {', '.join(sorted(unbound))}"
        )
    return Or(psi, Not(psi))


def lem_plus_axiom(psi: Formula) -> Formula:
    """
    Universal closure of psi | ~psi, quantifying free variables in order of
    first occurrence.

    Raises:
        NotDelta0Error: psi has an unbounded quantifier
        LStarError: psi is closed
    """
    if not is_delta0(psi):
        raise NotDelta0Error("lem_plus_axiom needs a Delta0 formula")
    variables = free_vars_ordered(psi)
    if not variables:
        raise LStarError("Formula is closed; use lem_axiom instead")
    return forall_many(variables, Or(psi, Not(psi)))


def _excluded_middle_operand(f: Formula) -> Optional[Formula]:
    if isinstance(f, Or) and isinstance(f.right, Not) and alpha_equal(f.left, f.right.body):
        return f.left
    return None


@functools.lru_cache(maxsize=65536)
def lem_shape(candidate: Formula) -> Optional[LemShape]:
    """Which excluded-middle shape a sentence has, if any"""
    if free_vars(candidate):
        return None
    if _excluded_middle_operand(candidate) is not None:
        return LemShape.LEM
    prefix: List[str] = []
    body = candidate
    while isinstance(body, ForAll):
        prefix.append(body.var)
        body = body.body
    psi = _excluded_middle_operand(body)
    if psi is None or not is_delta0(psi):
        return None
    if len(set(prefix)) != len(prefix) or set(prefix) != set(free_vars(psi)):
        return None
    return LemShape.LEM_PLUS if len(prefix) == 1 else LemShape.LEM_PLUS_MULTI


def permits(
    level: EnrichmentLevel,
    candidate: Formula,
    allow_multi_variable: Optional[bool] = None,
) -> bool:
    """Whether candidate may appear as a logical axiom at level"""
    shape = lem_shape(candidate)
    if shape is None or level.kind == LevelKind.NONE:
        return False
    if shape == LemShape.LEM:
        psi = candidate.left
        if level.kind == LevelKind.INFINITE:
            return True
        if level.kind == LevelKind.RANK_K:
            try:
                return classify(psi).rank <= level.k
            except NotPrenexError:
                return False
        return is_delta0(psi)
    if level < RANK_ZERO_PLUS:
        return False
    if shape == LemShape.LEM_PLUS_MULTI:
        if allow_multi_variable is None:
            allow_multi_variable = bool(
                get_config().get("enrichment", "allow_multi_variable_plus", default=True)
            )
        return allow_multi_variable
    return True


def minimal_level(psi: Formula) -> EnrichmentLevel:
    """Weakest level permitting lem_axiom(psi)"""
    if is_delta0(psi):
        return RANK_ZERO
    try:
        return EnrichmentLevel.rank(classify(psi).rank)
    except NotPrenexError:
        return INFINITE

