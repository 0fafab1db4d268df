"""
Pydantic models and enums shared across the toolkit.

Key points:
1. Enums name every closed choice (levels, justification kinds, commands)
2. Wire records (proof files, run records, bench reports) are pydantic models,
   serialized in field-declaration order
3. Gödel numbers travel as hex strings because they outgrow JSON integers
4. CommandResponse mirrors the success/metadata/error envelope of every command
"""

from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, model_validator

# ============================================================================
# Big naturals
# ============================================================================


def parse_bignat(value: Any) -> Any:
    if isinstance(value, str):
        text = value.strip().lower()
        if text.startswith("0x"):
            return int(text, 16)
    return value


def format_bignat(value: int) -> str:
    """Decimal for ordinary sizes, hex past the interpreter's int/str limit"""
    if value.bit_length() <= 14000:
        return str(value)
    return hex(value)


BigNat = Annotated[
    int,
    BeforeValidator(parse_bignat),
    PlainSerializer(lambda v: hex(v), return_type=str, when_used="json"),
    Field(ge=0),
]

# ============================================================================
# Enums for Constants
# ============================================================================


class CommandType(str, Enum):
    """CLI subcommands"""
    EVAL = "eval"
    DECIDE = "decide"
    CLASSIFY = "classify"
    PRENEX = "prenex"
    PROVE = "prove"
    CHECK = "check"
    CUT = "cut"
    ENCODE = "encode"
    GODEL = "godel"
    SYSTEM = "system"
    BENCH = "bench"
    REPORT = "report"
    FUZZ = "fuzz"


class OutputFormat(str, Enum):
    TEXT = "text"
    STRUCTURED = "structured"


class LevelKind(str, Enum):
    """Enrichment levels, weakest first"""
    NONE = "none"
    RANK_ZERO = "rank0"
    RANK_ZERO_PLUS = "rank0plus"
    RANK_K = "rankK"
    INFINITE = "inf"


class JustificationKind(str, Enum):
    ROOT = "root"
    AXIOM = "axiom"
    LOGICAL = "logical"
    RULE = "rule"


class LemShape(str, Enum):
    """Which excluded-middle shape a logical-axiom node uses"""
    LEM = "lem"
    LEM_PLUS = "lem_plus"
    LEM_PLUS_MULTI = "lem_plus_multi"


class PrenexShape(str, Enum):
    DELTA0 = "Delta0"
    PI = "Pi"
    SIGMA = "Sigma"


class Totality(str, Enum):
    SUCCESSOR = "successor"
    ADDITION = "addition"
    MULTIPLICATION = "multiplication"


class LocalizationVariant(str, Enum):
    LITERAL = "literal"
    PROSE = "prose"


class TypeKind(str, Enum):
    TYPE_M = "TypeM"
    TYPE_A = "TypeA"
    TYPE_S = "TypeS"
    TYPE_NS = "TypeNS"


class SchemaKind(str, Enum):
    GROUP2 = "Group2"
    GROUP3 = "Group3"
    SELF_REF = "SelfRef"


class SearchMode(str, Enum):
    LEVEL0_MINUS = "level0minus"
    LEVEL_N = "level"


class SearchVerdict(str, Enum):
    REFUTATION_FOUND = "RefutationFound"
    NO_REFUTATION_FOUND = "NoRefutationFound"

# ============================================================================
# Classification
# ============================================================================


class PrenexClass(BaseModel):
    """Position of a Prenex* sentence in the Delta0 / Pi / Sigma hierarchy"""

    model_config = ConfigDict(frozen=True)

    shape: PrenexShape = Field(..., description="Delta0, Pi or Sigma")
    rank: int = Field(0, ge=0, description="Number of unbounded quantifier blocks")
    minimal: bool = Field(True, description="rank is the least syntactically attainable")

    @model_validator(mode='after')
    def validate_rank(self):
        """Delta0 has rank 0, Pi/Sigma at least 1"""
        if (self.shape == PrenexShape.DELTA0) != (self.rank == 0):
            raise ValueError(f"Shape {self.shape.value} cannot have rank {self.rank}")
        return self

    def within_pi(self, k: int) -> bool:
        """Member of Pi(k) under the inclusion chain"""
        if self.shape == PrenexShape.DELTA0:
            return True
        if self.shape == PrenexShape.PI:
            return self.rank <= k
        return self.rank + 1 <= k

    def within_sigma(self, k: int) -> bool:
        if self.shape == PrenexShape.DELTA0:
            return True
        if self.shape == PrenexShape.SIGMA:
            return self.rank <= k
        return self.rank + 1 <= k

    @property
    def label(self) -> str:
        if self.shape == PrenexShape.DELTA0:
            return "Delta0"
        return f"{self.shape.value}({self.rank})"

# ============================================================================
# Proof file records
# ============================================================================

PROOF_FORMAT = "lstar-proof/1"


class JustificationRecord(BaseModel):
    """Wire form of a node justification; absent fields are omitted"""

    kind: JustificationKind
    rule: Optional[int] = Field(None, ge=1, le=8)
    ancestor: Optional[int] = Field(None, ge=0)
    term: Optional[str] = Field(None, description="Rule 7/8 instantiation term")
    param: Optional[str] = Field(None, description="Rule 5/6 fresh parameter, without '#'")
    axiom: Optional[str] = Field(None, description="Proper axiom id within the basis")
    shape: Optional[LemShape] = Field(None, description="Excluded-middle shape tag")

    @model_validator(mode='after')
    def validate_fields(self):
        """Rule applications need rule and ancestor; other kinds carry neither"""
        if self.kind == JustificationKind.RULE:
            if self.rule is None or self.ancestor is None:
                raise ValueError("Rule justification requires rule and ancestor")
        elif self.rule is not None or self.ancestor is not None:
            raise ValueError(f"{self.kind.value} justification cannot carry rule/ancestor")
        if self.kind == JustificationKind.LOGICAL and self.shape is None:
            raise ValueError("Logical axiom justification requires a shape tag")
        return self


class ProofNodeRecord(BaseModel):
    id: int = Field(..., ge=0)
    parent: Optional[int] = Field(..., ge=0, description="Parent id, null for the root")
    sentence: str
    justification: JustificationRecord

    def to_wire(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "parent": self.parent,
            "sentence": self.sentence,
            "justification": self.justification.model_dump(mode="json", exclude_none=True),
        }


class ProofHeader(BaseModel):
    format: Literal["lstar-proof/1"] = PROOF_FORMAT
    goal: str
    basis: str
    level: str


class ProofDocument(BaseModel):
    """A whole proof file: header plus pre-ordered node records"""

    header: ProofHeader
    nodes: List[ProofNodeRecord]

# ============================================================================
# Verdicts
# ============================================================================


class Verdict(BaseModel):
    """Checker outcome; invalid verdicts name the reason and the first bad node"""

    valid: bool
    reason: Optional[str] = None
    node_id: Optional[int] = None

    @model_validator(mode='after')
    def validate_verdict(self):
        """Ensure an invalid verdict explains itself"""
        if not self.valid and not self.reason:
            raise ValueError("Invalid verdict must include a reason")
        return self

    def __bool__(self) -> bool:
        return self.valid

# ============================================================================
# Systems
# ============================================================================


class TotalityEvidence(BaseModel):
    which: Totality
    proved: bool
    proof_size: Optional[int] = None
    expansions: int = 0
    budget: int


class TypeClass(BaseModel):
    """Budget-relative lower bound on a system's type"""

    kind: TypeKind
    evidence: List[TotalityEvidence]


class PairWitness(BaseModel):
    """Codes of a sentence and of its negation, both proved"""

    x: BigNat
    y: BigNat
    sentence: str


class SelfRefTemplate(BaseModel):
    model_config = ConfigDict(frozen=True)

    system: str
    level: str


class SelfRefRecord(BaseModel):
    """
    SelfRef axiom record. ``template`` is the code of the record with its
    self-reference left open; applying the diagonal function to it yields
    the record's own Gödel number.
    """

    model_config = ConfigDict(frozen=True)

    system: str
    level: str
    template: BigNat


class SchemaRecord(BaseModel):
    kind: SchemaKind
    system: str
    display: str = Field(..., description="Rendered schema shape")
    realization: str = Field(..., description="How Prf/Pair are realized")
    code: Optional[BigNat] = Field(None, description="Gödel number of the recorded sentence")
    sentence: Optional[str] = None
    proof: Optional[ProofDocument] = None
    witness: Optional[PairWitness] = None
    violated: Optional[bool] = None
    budget: Optional[int] = None

    @model_validator(mode='after')
    def validate_kind_fields(self):
        """Group2 records bind a sentence and its code"""
        if self.kind == SchemaKind.GROUP2 and (self.code is None or self.sentence is None):
            raise ValueError("Group2 record requires code and sentence")
        return self


class RunRecord(BaseModel):
    """One consistency search, as written to a run-record file"""

    system: str
    mode: str
    budget: int
    verdict: SearchVerdict
    expansions: int
    witness: Optional[PairWitness] = None
    proofs: List[ProofDocument] = Field(default_factory=list)
    wall_time_ms: float

# ============================================================================
# Bench
# ============================================================================


class BenchRow(BaseModel):
    n: int = Field(..., ge=1)
    plain_size: Optional[int] = Field(None, description="None when the budget ran out")
    plain_expansions: int
    plain_budget_exhausted: bool
    enriched_size: int
    enriched_valid: bool
    cut_steps: int
    cut_bound: Optional[int] = Field(None, description="Size bound of the last cut step")
    enriched_expansions: int
    wall_time_ms: float


class BenchReport(BaseModel):
    family: str
    level: str
    budget: int
    n_max: int
    rows: List[BenchRow]
    c1: int = Field(..., description="Measured slope of the enriched size")
    c2: int = Field(..., description="Measured intercept of the enriched size")
    linear_bound_holds: bool
    all_valid: bool

# ============================================================================
# Command envelope
# ============================================================================


class ErrorDetail(BaseModel):
    """Detailed error information"""

    code: str = Field(..., description="Error code")
    message: str = Field(..., description="Human-readable error message")
    field: Optional[str] = Field(None, description="Argument that caused the error")
    details: Optional[Dict[str, Any]] = Field(None, description="Additional error details")
    suggestion: Optional[str] = Field(None, description="Suggested fix")


class ResponseMetadata(BaseModel):
    command: CommandType
    execution_time_ms: float


class CommandResponse(BaseModel):
    """Envelope for structured CLI output"""

    success: bool = Field(..., description="Command outcome")
    metadata: ResponseMetadata
    data: Optional[Any] = None
    error: Optional[ErrorDetail] = None

    @model_validator(mode='after')
    def validate_response(self):
        """Ensure response has error only when failed"""
        if not self.success and self.error is None and self.data is None:
            raise ValueError("Failed response must include error details or data")
        return self
