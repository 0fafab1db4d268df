"""
Axiom bases, generalized arithmetics and the self-justification lab.

A generalized arithmetic pairs an axiom basis with an enrichment level for
the tableaux apparatus. This module builds the concrete bases (relational
arithmetic, totality statements, implication chains, basis files), ranks a
system by which totality statements it proves within a budget, and runs the
bounded consistency experiments: SelfRef extensions, Level(0-) and Level(n)
refutation searches, and the Group-2 / Group-3 schema records, whose Prf and
Pair are realized by the native checker and decoder.
"""

import itertools
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import orjson
from pydantic import ValidationError

from src.config import default_budget, get_config, log
from src.enrichment import NONE, EnrichmentLevel
from src.errors import (
    InvalidGodelCode,
    LStarError,
    NotPrenexError,
    ParseError,
    ProofFormatError,
    SchemaGateError,
)
from src.godel import decode_formula, diagonalize, godel_decode, godel_number
from src.lang import (
    BoundedExists,
    BoundedForAll,
    C0,
    C1,
    C2,
    Exists,
    Formula,
    ForAll,
    Implies,
    Not,
    Term,
    Var,
    add_relation,
    alpha_equal,
    canonical,
    conjoin,
    double_power,
    encode_nat,
    eq,
    exists_many,
    fn,
    forall_many,
    formula_params,
    is_sentence,
    le,
    mult_relation,
    parse_formula,
    print_formula,
    term_vars,
    terms_of_size,
)
from src.models import (
    LocalizationVariant,
    PairWitness,
    RunRecord,
    SchemaKind,
    SchemaRecord,
    SearchMode,
    SearchVerdict,
    SelfRefRecord,
    SelfRefTemplate,
    Totality,
    TotalityEvidence,
    TypeClass,
    TypeKind,
)
from src.prenex import classify, is_prenex, to_prenex
from src.tableaux import (
    NotFoundWithinBudget,
    Proof,
    ProofSearch,
    check_proof,
    proof_from_document,
    proof_size,
    proof_to_document,
)

# ============================================================================
# Axiom bases
# ============================================================================


class AxiomBasis:
    """
    A finite set of proper axioms with stable ids.

    Membership is tested up to renaming of bound variables; enumerate()
    yields each axiom once, in declaration order.
    """

    def __init__(
        self,
        name: str,
        axioms: Sequence[Tuple[str, Formula]],
        flags: Optional[Dict[str, object]] = None,
    ):
        self.name = name
        self.flags = dict(flags or {})
        self._axioms: List[Tuple[str, Formula]] = []
        self._ids: Dict[tuple, str] = {}
        for axiom_id, sentence in axioms:
            if not is_sentence(sentence):
                raise LStarError(f"Axiom {axiom_id} of basis {name} is not a sentence")
            if formula_params(sentence):
                raise LStarError(f"Axiom {axiom_id} of basis {name} mentions a parameter")
            key = canonical(sentence)
            if key in self._ids:
                continue
            self._ids[key] = axiom_id
            self._axioms.append((axiom_id, sentence))

    @classmethod
    def from_sentences(cls, name: str, sentences: Sequence[Formula], **flags) -> "AxiomBasis":
        return cls(name, [(f"ax{i}", s) for i, s in enumerate(sentences)], flags)

    @property
    def axioms(self) -> List[Formula]:
        return [sentence for _, sentence in self._axioms]

    def contains(self, sentence: Formula) -> bool:
        return canonical(sentence) in self._ids

    def axiom_id(self, sentence: Formula) -> Optional[str]:
        return self._ids.get(canonical(sentence))

    def enumerate(self) -> Iterator[Formula]:
        return iter(self.axioms)

    def items(self) -> List[Tuple[str, Formula]]:
        return list(self._axioms)

    def __len__(self) -> int:
        return len(self._axioms)

    def __repr__(self) -> str:
        return f"AxiomBasis({self.name!r}, {len(self)} axioms)"


class SelfRefBasis(AxiomBasis):
    """A basis extended by one SelfRef axiom, enumerated after the base axioms"""

    SELF_REF_ID = "selfref"

    def __init__(self, base: AxiomBasis, record: SelfRefRecord, number: int):
        self.base = base
        self.record = record
        self.number = number
        self.sentence = self_ref_sentence(number)
        super().__init__(
            f"{base.name}+selfref",
            base.items() + [(self.SELF_REF_ID, self.sentence)],
            {**base.flags, "self_ref": True},
        )


@dataclass(frozen=True)
class GeneralizedArithmetic:
    """An axiom basis paired with the tableaux apparatus at a fixed enrichment level"""

    basis: AxiomBasis
    level: EnrichmentLevel = NONE

    @property
    def name(self) -> str:
        return f"{self.basis.name}@{self.level}"

# ============================================================================
# Relational arithmetic
# ============================================================================


def _v(*names: str) -> Tuple[Var, ...]:
    return tuple(Var(n) for n in names)


def totality_sentence(which: Totality) -> Formula:
    x, y, z = _v("x", "y", "z")
    if which == Totality.SUCCESSOR:
        return ForAll("x", exists_many(["z"], add_relation(x, C1, z)))
    if which == Totality.ADDITION:
        return forall_many(["x", "y"], exists_many(["z"], add_relation(x, y, z)))
    return forall_many(["x", "y"], exists_many(["z"], mult_relation(x, y, z)))


def relational_arith_basis() -> AxiomBasis:
    """
    Addition and multiplication as three-place relations with their
    associative, commutative, identity and distributive laws, plus the
    successor axioms written with Add(x, C1, z). Every axiom is Pi(1).
    """
    x, y, z, u, v, w, s = _v("x", "y", "z", "u", "v", "w", "s")
    add, mult = add_relation, mult_relation

    def associativity(rel):
        return forall_many(
            ["x", "y", "z", "u", "v", "w"],
            Implies(conjoin(rel(x, y, u), rel(u, z, w), rel(y, z, v)), rel(x, v, w)),
        )

    def commutativity(rel):
        return forall_many(["x", "y", "z"], Implies(rel(x, y, z), rel(y, x, z)))

    axioms = [
        ("add_assoc", associativity(add)),
        ("add_comm", commutativity(add)),
        ("add_ident", ForAll("x", add(x, C0, x))),
        ("mult_assoc", associativity(mult)),
        ("mult_comm", commutativity(mult)),
        ("mult_ident", ForAll("x", mult(x, C1, x))),
        (
            "distrib",
            forall_many(
                ["x", "y", "z", "u", "v", "w", "s"],
                Implies(
                    conjoin(add(y, z, u), mult(x, u, s), mult(x, y, v), mult(x, z, w)),
                    add(v, w, s),
                ),
            ),
        ),
        ("succ_nonzero", forall_many(["x", "z"], Implies(add(x, C1, z), Not(eq(z, C0))))),
        (
            "succ_inj",
            forall_many(
                ["x", "y", "u", "v"],
                Implies(conjoin(add(x, C1, u), add(y, C1, v), eq(u, v)), eq(x, y)),
            ),
        ),
        (
            "succ_cong",
            forall_many(
                ["x", "y", "u", "v"],
                Implies(conjoin(add(x, C1, u), add(y, C1, v), eq(x, y)), eq(u, v)),
            ),
        ),
    ]
    return AxiomBasis("relational", axioms, {"pi1": True})


def totality_basis(which: Sequence[Totality], name: str) -> AxiomBasis:
    return AxiomBasis(name, [(t.value, totality_sentence(t)) for t in which])


def chain_atom(i: int) -> Formula:
    """A_i: the true atom encode_nat(i) = encode_nat(i)"""
    numeral = encode_nat(i)
    return eq(numeral, numeral)


def chain_basis(n: int) -> AxiomBasis:
    """A_0 plus A_i -> A_(i+1) for i < n"""
    axioms = [("a0", chain_atom(0))]
    axioms += [(f"step{i}", Implies(chain_atom(i), chain_atom(i + 1))) for i in range(n)]
    return AxiomBasis(f"chain:{n}", axioms)


def load_basis_file(path: Union[str, Path]) -> AxiomBasis:
    """
    One sentence per line; blank lines and '#' comments are skipped.

    Raises:
        LStarError: unreadable file, parse error or open formula
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise LStarError(f"Cannot read basis file {path}: {e.strerror}") from e
    axioms = []
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        try:
            sentence = parse_formula(content)
        except ParseError as e:
            raise ParseError(e.message.split(" (line")[0], number, e.column) from e
        if not is_sentence(sentence):
            raise LStarError(f"Line {number} of {path} is not a sentence")
        axioms.append((f"line{number}", sentence))
    return AxiomBasis(str(path), axioms)


_CHAIN_RE = re.compile(r"chain:(\d+)\Z")


def named_basis(name: str) -> AxiomBasis:
    """
    Resolve a basis name: empty, relational, totality, totality-sa,
    totality-s, chain:<n>, or a path to a basis file.
    """
    if name == "empty":
        return AxiomBasis("empty", [])
    if name == "relational":
        return relational_arith_basis()
    if name == "totality":
        return totality_basis(list(Totality), name)
    if name == "totality-sa":
        return totality_basis([Totality.SUCCESSOR, Totality.ADDITION], name)
    if name == "totality-s":
        return totality_basis([Totality.SUCCESSOR], name)
    match = _CHAIN_RE.match(name)
    if match:
        return chain_basis(int(match.group(1)))
    if Path(name).is_file():
        return load_basis_file(name)
    raise LStarError(
        f"Unknown basis '{name}'",
        {"known": ["empty", "relational", "totality", "totality-sa", "totality-s", "chain:<n>"]},
    )

# ============================================================================
# Type classification
# ============================================================================

_TYPE_LADDER = (
    (Totality.SUCCESSOR, TypeKind.TYPE_S),
    (Totality.ADDITION, TypeKind.TYPE_A),
    (Totality.MULTIPLICATION, TypeKind.TYPE_M),
)


def classify_type(g: GeneralizedArithmetic, budget: Optional[int] = None) -> TypeClass:
    """
    Strongest of TypeS/A/M whose totality statements were all proved within
    budget, trying successor, addition and multiplication in turn. A budget
    that runs out leaves the statement unproven, never refuted.
    """
    budget = budget if budget is not None else default_budget()
    evidence: List[TotalityEvidence] = []
    kind = TypeKind.TYPE_NS
    for which, reached in _TYPE_LADDER:
        result, used = _attempt(g, totality_sentence(which), budget)
        proved = isinstance(result, Proof)
        evidence.append(
            TotalityEvidence(
                which=which,
                proved=proved,
                proof_size=proof_size(result) if proved else None,
                expansions=used,
                budget=budget,
            )
        )
        log(f"{'✓' if proved else '✗'} {g.name}: {which.value} totality "
            f"{'proved' if proved else 'unproven within budget'}")
        if not proved:
            break
        kind = reached
    return TypeClass(kind=kind, evidence=evidence)

# ============================================================================
# Localized totality
# ============================================================================


def localized_mult_totality(k: int, variant: LocalizationVariant) -> Formula:
    """
    Multiplication totality restricted to small inputs, as a Delta0 sentence.

    LITERAL bounds x, y by double^k(C2) and z by double^(2k)(C2); PROSE bounds
    x, y by 2^k - 1 and z by 2^(2k).
    """
    if k < 0:
        raise LStarError(f"Localization needs k >= 0, got {k}")
    if variant == LocalizationVariant.LITERAL:
        input_bound: Term = double_power(k)
        output_bound: Term = double_power(2 * k)
    else:
        input_bound = encode_nat(2 ** k - 1)
        output_bound = encode_nat(2 ** (2 * k))
    x, y, z = _v("x", "y", "z")
    return BoundedForAll(
        "x", input_bound,
        BoundedForAll("y", input_bound, BoundedExists("z", output_bound, mult_relation(x, y, z))),
    )

# ============================================================================
# SelfRef
# ============================================================================


SELF_REF_MODULUS = 2 ** 61 - 1


def self_ref_sentence(number: int) -> Formula:
    """
    The object-language stand-in carried by a SelfRef axiom: a true Pi(1)
    sentence A p. ~(p + g = (p + g) + C1), where g is the record number
    reduced modulo a 61-bit prime so the numeral stays shallow.
    """
    p = Var("p")
    numeral = encode_nat(number % SELF_REF_MODULUS)
    shifted = fn("add", p, numeral)
    return ForAll("p", Not(eq(shifted, fn("add", shifted, C1))))


def self_ref_extend(g: GeneralizedArithmetic) -> GeneralizedArithmetic:
    """
    Add SelfRef(basis, level) to g's basis.

    The record's template code names (system, level); diagonalizing it gives
    the number of the record that stores that template, which is the
    record's own Gödel number. The asserted content, that no proof of C0 = C1
    exists from the extended basis at g's level, stays a meta-level claim
    checked only by bounded search.
    """
    template = SelfRefTemplate(system=g.basis.name, level=str(g.level))
    template_code = godel_number(template)
    number = diagonalize(template_code)
    record = godel_decode(number)
    log(f"✓ SelfRef for {g.name}: number has {number.bit_length()} bits")
    return GeneralizedArithmetic(SelfRefBasis(g.basis, record, number), g.level)


def self_ref_record(g: GeneralizedArithmetic) -> SchemaRecord:
    """Schema record describing the SelfRef axiom of an extended system"""
    basis = g.basis
    if not isinstance(basis, SelfRefBasis):
        raise SchemaGateError(f"System {g.name} has no SelfRef axiom")
    return SchemaRecord(
        kind=SchemaKind.SELF_REF,
        system=g.name,
        display=f"SelfRef({basis.base.name}, {g.level}): no {g.level}-proof of C0 = C1 "
                f"from {basis.name}",
        realization="Meta-level record; the checker admits its stand-in sentence as a "
                    "proper axiom and the claim is tested by bounded search",
        code=basis.number,
        sentence=print_formula(basis.sentence),
    )

# ============================================================================
# Meta predicates
# ============================================================================


def pair_meta(x: int, y: int, rank: int = 1) -> bool:
    """True when x codes a Pi(rank) Prenex* sentence and y codes its negation"""
    try:
        phi = decode_formula(x)
    except InvalidGodelCode:
        return False
    if not is_sentence(phi):
        return False
    try:
        if not classify(phi).within_pi(rank):
            return False
    except NotPrenexError:
        return False
    return y == godel_number(Not(phi))


def prf_meta(g: GeneralizedArithmetic, phi: int, p: Union[Proof, int]) -> bool:
    """True when p is a valid proof, from g's basis at g's level, of the sentence coded by phi"""
    try:
        sentence = decode_formula(phi)
        if isinstance(p, int):
            p = godel_decode(p)
    except InvalidGodelCode:
        return False
    if not isinstance(p, Proof) or not alpha_equal(p.goal, sentence):
        return False
    return check_proof(p, g.basis, g.level).valid

# ============================================================================
# Consistency searches
# ============================================================================


@dataclass
class ConsistencyOutcome:
    """Result of a bounded refutation search; exhaustion is never a consistency claim"""

    verdict: SearchVerdict
    budget: int
    expansions: int
    proofs: List[Proof] = field(default_factory=list)
    witness: Optional[PairWitness] = None
    sentence: Optional[Formula] = None
    candidates_tried: int = 0

    def to_record(self, g: GeneralizedArithmetic, mode: str, wall_time_ms: float) -> RunRecord:
        return RunRecord(
            system=g.name,
            mode=mode,
            budget=self.budget,
            verdict=self.verdict,
            expansions=self.expansions,
            witness=self.witness,
            proofs=[proof_to_document(p) for p in self.proofs],
            wall_time_ms=wall_time_ms,
        )


# Variables of the alternating prefixes A x. E y. A z. ... tried as candidates
_CANDIDATE_VARIABLES = ("x", "y", "z")


def pi_candidates_by_size(n: int) -> Iterator[Formula]:
    """
    Atoms and negated atoms, then for n >= 1 atoms over x, y, z closed by the
    alternating prefix A x. E y. A z. cut after the last variable they use,
    so a Pi(k) candidate appears for every k <= min(n, 3). Ordered by size.
    """
    closed = (C0, C1, C2)
    names = _CANDIDATE_VARIABLES[:min(n, len(_CANDIDATE_VARIABLES))]
    open_base = closed + tuple(Var(v) for v in names)
    for size in itertools.count(2):
        for left_size in range(1, size):
            lefts = terms_of_size(open_base, left_size)
            rights = terms_of_size(open_base, size - left_size)
            for lhs in lefts:
                for rhs in rights:
                    for atom in (eq(lhs, rhs), le(lhs, rhs)):
                        used = term_vars(lhs) | term_vars(rhs)
                        if not used:
                            yield atom
                            yield Not(atom)
                            continue
                        depth = 1 + max(names.index(v) for v in used)
                        candidate: Formula = atom
                        for position in reversed(range(depth)):
                            quantifier = ForAll if position % 2 == 0 else Exists
                            candidate = quantifier(names[position], candidate)
                        yield candidate


def _basis_candidates(basis: AxiomBasis, n: int) -> Iterator[Formula]:
    for axiom in basis.enumerate():
        try:
            candidate = axiom if is_prenex(axiom) else to_prenex(axiom)
            if classify(candidate).within_pi(n):
                yield candidate
        except LStarError:
            continue


def _harvest(proof: Proof, n: int) -> List[Formula]:
    found = []
    for node in proof.nodes:
        s = node.sentence
        if formula_params(s) or not is_prenex(s):
            continue
        if classify(s).within_pi(n):
            found.append(s)
    return found


def consistency_search(
    g: GeneralizedArithmetic,
    mode: SearchMode,
    budget: Optional[int] = None,
    n: int = 1,
    candidate_slice: Optional[int] = None,
) -> ConsistencyOutcome:
    """
    Bounded refutation search.

    LEVEL0_MINUS looks for a proof of C0 = C1. LEVEL_N interleaves three
    candidate streams of Pi(n) sentences (basis axioms, sentences harvested
    from proofs found so far, and a size-ordered syntactic stream) and looks
    for proofs of a candidate and of its negation, each attempt limited to
    candidate_slice expansions, until budget expansions are spent.
    """
    cfg = get_config()
    budget = budget if budget is not None else default_budget()

    if mode == SearchMode.LEVEL0_MINUS:
        result, used = _attempt(g, eq(C0, C1), budget)
        if isinstance(result, Proof):
            log(f"✗ {g.name}: C0 = C1 proved in {proof_size(result)} nodes")
            return ConsistencyOutcome(SearchVerdict.REFUTATION_FOUND, budget,
                                      used, [result],
                                      sentence=eq(C0, C1), candidates_tried=1)
        log(f"✓ {g.name}: no proof of C0 = C1 within {budget} expansions")
        return ConsistencyOutcome(SearchVerdict.NO_REFUTATION_FOUND, budget,
                                  used, candidates_tried=1)

    slice_budget = candidate_slice or int(cfg.get("search", "candidate_slice"))
    harvested: List[Formula] = []
    streams = [_basis_candidates(g.basis, n), None, pi_candidates_by_size(n)]
    seen = set()
    spent = 0
    tried = 0
    harvest_pos = 0

    def next_from(index: int) -> Optional[Formula]:
        nonlocal harvest_pos
        if index == 1:
            while harvest_pos < len(harvested):
                candidate = harvested[harvest_pos]
                harvest_pos += 1
                if canonical(candidate) not in seen:
                    return candidate
            return None
        for candidate in streams[index]:
            if canonical(candidate) not in seen:
                return candidate
        return None

    exhausted_basis = False
    for turn in itertools.count():
        index = turn % 3
        if index == 0 and exhausted_basis:
            continue
        candidate = next_from(index)
        if candidate is None:
            exhausted_basis = exhausted_basis or index == 0
            continue
        seen.add(canonical(candidate))
        tried += 1
        proofs = []
        for goal in (candidate, Not(candidate)):
            remaining = budget - spent
            if remaining <= 0:
                break
            result, used = _attempt(g, goal, min(slice_budget, remaining))
            spent += max(1, used)
            if isinstance(result, Proof):
                proofs.append(result)
                harvested.extend(_harvest(result, n))
            else:
                break
        if len(proofs) == 2:
            witness = PairWitness(
                x=godel_number(candidate),
                y=godel_number(Not(candidate)),
                sentence=print_formula(candidate),
            )
            log(f"✗ {g.name}: both {print_formula(candidate)} and its negation proved")
            return ConsistencyOutcome(SearchVerdict.REFUTATION_FOUND, budget, spent, proofs,
                                      witness, candidate, tried)
        if spent >= budget:
            break
    log(f"✓ {g.name}: no Level({n}) refutation within {budget} expansions ({tried} candidates)")
    return ConsistencyOutcome(SearchVerdict.NO_REFUTATION_FOUND, budget, spent,
                              candidates_tried=tried)


def _attempt(
    g: GeneralizedArithmetic, goal: Formula, budget: int
) -> Tuple[Union[Proof, NotFoundWithinBudget], int]:
    search = ProofSearch(g.basis, g.level, budget)
    result = search.run(goal)
    return result, min(search.expansions, budget)


def run_consistency(g: GeneralizedArithmetic, mode: SearchMode, budget: Optional[int] = None,
                    n: int = 1) -> Tuple[ConsistencyOutcome, RunRecord]:
    """consistency_search plus its run record"""
    started = time.perf_counter()
    outcome = consistency_search(g, mode, budget, n)
    wall = (time.perf_counter() - started) * 1000
    label = mode.value if mode == SearchMode.LEVEL0_MINUS else f"{mode.value}:{n}"
    return outcome, outcome.to_record(g, label, wall)


def dumps_run_record(record: RunRecord) -> bytes:
    return orjson.dumps(record.model_dump(mode="json"), option=orjson.OPT_APPEND_NEWLINE)


def loads_run_record(data: bytes) -> RunRecord:
    """
    Raises:
        ProofFormatError: malformed run record
    """
    try:
        return RunRecord.model_validate(orjson.loads(data))
    except (orjson.JSONDecodeError, ValidationError) as e:
        raise ProofFormatError(f"Invalid run record: {e}") from e


def witness_certified(g: GeneralizedArithmetic, outcome: ConsistencyOutcome, n: int = 1) -> bool:
    """pair_meta plus both prf_meta checks on a refutation witness"""
    if outcome.witness is None or len(outcome.proofs) != 2:
        return False
    w = outcome.witness
    return (
        pair_meta(w.x, w.y, rank=n)
        and prf_meta(g, w.x, outcome.proofs[0])
        and prf_meta(g, w.y, outcome.proofs[1])
    )

# ============================================================================
# Schema records
# ============================================================================

_GROUP2_DISPLAY = re.compile(
    r"A p\. \(Prf\[(?P<basis>[^\]]+)\]\((?P<code>0x[0-9a-f]+), p\) -> (?P<phi>.+)\)\Z"
)
GROUP3_DISPLAY = "A x. A y. A p. A q. ~(Pair(x, y) & Prf[{basis}](x, p) & Prf[{basis}](y, q))"


def group2_display(basis_name: str, code: int, phi: Formula) -> str:
    return f"A p. (Prf[{basis_name}]({hex(code)}, p) -> {print_formula(phi)})"


def parse_group2_display(display: str) -> Tuple[str, int, Formula]:
    """Inverse of group2_display: (basis name, code, sentence)"""
    match = _GROUP2_DISPLAY.match(display)
    if match is None:
        raise LStarError("Not a Group-2 display form")
    return match.group("basis"), int(match.group("code"), 16), parse_formula(match.group("phi"))


def group2_record(phi: Formula, proof: Proof, g: GeneralizedArithmetic) -> SchemaRecord:
    """
    Group-2 instance for a Pi(1) sentence phi with its witnessing proof.

    Raises:
        SchemaGateError: phi is not Prenex* Pi(1), or proof is not a valid proof of phi
    """
    try:
        shape = classify(phi)
    except NotPrenexError as e:
        raise SchemaGateError("Group-2 records need a Prenex* sentence") from e
    if not shape.within_pi(1):
        raise SchemaGateError(f"Group-2 records need a Pi(1) sentence, got {shape.label}")
    code = godel_number(phi)
    if not prf_meta(g, code, proof):
        raise SchemaGateError("Proof does not check as a proof of the sentence")
    return SchemaRecord(
        kind=SchemaKind.GROUP2,
        system=g.name,
        display=group2_display(g.basis.name, code, phi),
        realization="Prf is the native proof checker at the meta level; the code is the "
                    "sentence's Gödel number",
        code=code,
        sentence=print_formula(phi),
        proof=proof_to_document(proof),
    )


def group3_record(g: GeneralizedArithmetic, budget: Optional[int] = None) -> SchemaRecord:
    """
    Group-3 record: runs a Level(1) search and reports whether a witness
    satisfying Pair, Prf and Prf was found, which violates the schema.
    """
    outcome = consistency_search(g, SearchMode.LEVEL_N, budget, n=1)
    violated = witness_certified(g, outcome, 1)
    return SchemaRecord(
        kind=SchemaKind.GROUP3,
        system=g.name,
        display=GROUP3_DISPLAY.format(basis=g.basis.name),
        realization="Pair is the Gödel decoder and Prf the native checker, both at the "
                    "meta level; the content is tested by bounded Level(1) search",
        witness=outcome.witness if violated else None,
        violated=violated,
        budget=outcome.budget,
    )


def proof_of_record(record: SchemaRecord) -> Optional[Proof]:
    return proof_from_document(record.proof) if record.proof is not None else None
