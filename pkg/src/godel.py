"""
Gödel numbering for formulas, proofs and SelfRef records.

An object is written as a stream of unsigned LEB128 varints whose first item
names the object kind; strings are a length varint followed by UTF-8 bytes.
The number is the stream read as a big-endian integer. The first byte is
never zero, so the number determines the stream and the scheme is
injective. Decoding rejects any stream the encoder would not produce.

    C0 = C0  ->  01 01 0B 0B  ->  16845579
"""

from typing import List, Tuple, Union

from src.enrichment import EnrichmentLevel
from src.errors import InvalidGodelCode, LStarError
from src.lang import (
    FUNCTION_ARITY,
    And,
    App,
    Atom,
    BoundedExists,
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
    is_param_name,
    is_variable_name,
)
from src.models import JustificationKind, LemShape, SelfRefRecord, SelfRefTemplate
from src.tableaux import Justification, Proof, ProofNode

# Object kinds
KIND_FORMULA = 1
KIND_PROOF = 2
KIND_SELF_REF = 3
KIND_SELF_REF_TEMPLATE = 4

# Formula tags
ATOM_EQ = 1
ATOM_LE = 2
NOT = 3
AND = 4
OR = 5
IMPLIES = 6
FORALL = 7
EXISTS = 8
BOUNDED_FORALL = 9
BOUNDED_EXISTS = 10

# Term tags; function symbols follow APP_BASE in FUNCTION_ARITY order
CONST_BASE = 11
VAR = 14
PARAM = 15
APP_BASE = 16

_BINARY_TAGS = {And: AND, Or: OR, Implies: IMPLIES}
_QUANTIFIER_TAGS = {
    ForAll: FORALL,
    Exists: EXISTS,
    BoundedForAll: BOUNDED_FORALL,
    BoundedExists: BOUNDED_EXISTS,
}
_TAG_TYPES = {tag: kind for kind, tag in {**_BINARY_TAGS, **_QUANTIFIER_TAGS}.items()}
_FUNCTIONS = tuple(FUNCTION_ARITY)

_JUSTIFICATION_CODES = {
    JustificationKind.ROOT: 1,
    JustificationKind.AXIOM: 2,
    JustificationKind.LOGICAL: 3,
    JustificationKind.RULE: 4,
}
_SHAPE_CODES = {LemShape.LEM: 1, LemShape.LEM_PLUS: 2, LemShape.LEM_PLUS_MULTI: 3}

# Rule 7/8 term vs rule 5/6 parameter marker
_NO_WITNESS, _TERM_WITNESS, _PARAM_WITNESS = 0, 1, 2

GodelSubject = Union[Formula, Proof, SelfRefRecord, SelfRefTemplate]

# ============================================================================
# Encoding
# ============================================================================


class _Writer:
    def __init__(self):
        self.out = bytearray()

    def varint(self, value: int) -> None:
        if value < 0:
            raise LStarError(f"Cannot encode negative value {value}")
        while True:
            low = value & 0x7F
            value >>= 7
            if value:
                self.out.append(low | 0x80)
            else:
                self.out.append(low)
                return

    def string(self, text: str) -> None:
        data = text.encode("utf-8")
        self.varint(len(data))
        self.out.extend(data)

    def term(self, t: Term) -> None:
        stack = [t]
        while stack:
            u = stack.pop()
            if isinstance(u, Const):
                self.varint(CONST_BASE + u.index)
            elif isinstance(u, Var):
                self.varint(VAR)
                self.string(u.name)
            elif isinstance(u, Param):
                self.varint(PARAM)
                self.string(u.name)
            else:
                self.varint(APP_BASE + _FUNCTIONS.index(u.fn))
                stack.extend(reversed(u.args))

    def formula(self, f: Formula) -> None:
        # explicit stacks keep deep formulas and numerals off the recursion limit
        stack = [f]
        while stack:
            g = stack.pop()
            if isinstance(g, Atom):
                self.varint(ATOM_EQ if g.rel == "=" else ATOM_LE)
                self.term(g.lhs)
                self.term(g.rhs)
            elif isinstance(g, Not):
                self.varint(NOT)
                stack.append(g.body)
            elif type(g) in _BINARY_TAGS:
                self.varint(_BINARY_TAGS[type(g)])
                stack.append(g.right)
                stack.append(g.left)
            else:
                self.varint(_QUANTIFIER_TAGS[type(g)])
                self.string(g.var)
                if isinstance(g, (BoundedForAll, BoundedExists)):
                    self.term(g.bound)
                stack.append(g.body)

    def proof(self, p: Proof) -> None:
        self.formula(p.goal)
        self.string(p.basis)
        self.string(str(p.level))
        self.varint(len(p.nodes))
        for node in p.nodes:
            j = node.justification
            self.varint(node.id)
            self.varint(0 if node.parent is None else node.parent + 1)
            self.formula(node.sentence)
            self.varint(_JUSTIFICATION_CODES[j.kind])
            if j.kind == JustificationKind.AXIOM:
                self.varint(0 if j.axiom is None else 1)
                if j.axiom is not None:
                    self.string(j.axiom)
            elif j.kind == JustificationKind.LOGICAL:
                self.varint(_SHAPE_CODES[j.shape])
            elif j.kind == JustificationKind.RULE:
                self.varint(j.rule)
                self.varint(j.ancestor)
                if j.term is not None:
                    self.varint(_TERM_WITNESS)
                    self.term(j.term)
                elif j.param is not None:
                    self.varint(_PARAM_WITNESS)
                    self.string(j.param)
                else:
                    self.varint(_NO_WITNESS)

    def number(self) -> int:
        return int.from_bytes(bytes(self.out), "big")


def godel_number(x: GodelSubject) -> int:
    """Gödel number of a formula, proof, SelfRef record or SelfRef template"""
    writer = _Writer()
    if isinstance(x, Proof):
        writer.varint(KIND_PROOF)
        writer.proof(x)
    elif isinstance(x, SelfRefRecord):
        writer.varint(KIND_SELF_REF)
        writer.string(x.system)
        writer.string(x.level)
        writer.varint(x.template)
    elif isinstance(x, SelfRefTemplate):
        writer.varint(KIND_SELF_REF_TEMPLATE)
        writer.string(x.system)
        writer.string(x.level)
    else:
        writer.varint(KIND_FORMULA)
        writer.formula(x)
    return writer.number()

# ============================================================================
# Decoding
# ============================================================================


class _Reader:
    def __init__(self, code: int):
        if code <= 0:
            raise InvalidGodelCode(f"Not a Gödel number: {code}")
        self.data = code.to_bytes((code.bit_length() + 7) // 8, "big")
        self.pos = 0

    def fail(self, message: str) -> InvalidGodelCode:
        return InvalidGodelCode(f"{message} at byte {self.pos}", {"offset": self.pos})

    def varint(self) -> int:
        value = shift = 0
        while True:
            if self.pos >= len(self.data):
                raise self.fail("Truncated code")
            byte = self.data[self.pos]
            self.pos += 1
            if byte == 0 and shift:
                raise self.fail("Non-minimal varint")
            value |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return value
            shift += 7

    def string(self) -> str:
        length = self.varint()
        end = self.pos + length
        if end > len(self.data):
            raise self.fail("Truncated string")
        try:
            text = self.data[self.pos:end].decode("utf-8")
        except UnicodeDecodeError:
            raise self.fail("Invalid UTF-8 string") from None
        self.pos = end
        return text

    def name(self, check, what: str) -> str:
        text = self.string()
        if not check(text):
            raise self.fail(f"Invalid {what} name {text!r}")
        return text

    def term(self) -> Term:
        # open applications with the arguments read so far
        frames: List[Tuple[str, List[Term]]] = []
        while True:
            tag = self.varint()
            if CONST_BASE <= tag < CONST_BASE + 3:
                value: Term = Const(tag - CONST_BASE)
            elif tag == VAR:
                value = Var(self.name(is_variable_name, "variable"))
            elif tag == PARAM:
                value = Param(self.name(is_param_name, "parameter"))
            elif 0 <= tag - APP_BASE < len(_FUNCTIONS):
                frames.append((_FUNCTIONS[tag - APP_BASE], []))
                continue
            else:
                raise self.fail(f"Unknown term tag {tag}")
            while frames:
                fn, args = frames[-1]
                args.append(value)
                if len(args) < FUNCTION_ARITY[fn]:
                    break
                frames.pop()
                value = App(fn, tuple(args))
            else:
                return value

    def formula(self) -> Formula:
        # open connectives and quantifiers: (type, leading fields, subformulas read)
        frames: List[Tuple[type, tuple, List[Formula]]] = []
        while True:
            tag = self.varint()
            if tag in (ATOM_EQ, ATOM_LE):
                lhs = self.term()
                value: Formula = Atom(lhs, "=" if tag == ATOM_EQ else "<=", self.term())
            elif tag == NOT:
                frames.append((Not, (), []))
                continue
            else:
                kind = _TAG_TYPES.get(tag)
                if kind is None:
                    raise self.fail(f"Unknown formula tag {tag}")
                if kind in (And, Or, Implies):
                    frames.append((kind, (), []))
                    continue
                var = self.name(is_variable_name, "variable")
                head = (var, self.term()) if kind in (BoundedForAll, BoundedExists) else (var,)
                frames.append((kind, head, []))
                continue
            while frames:
                kind, head, parts = frames[-1]
                parts.append(value)
                if len(parts) < (2 if kind in (And, Or, Implies) else 1):
                    break
                frames.pop()
                try:
                    value = kind(*head, *parts)
                except LStarError as e:
                    raise self.fail(e.message) from e
            else:
                return value

    def proof(self) -> Proof:
        goal = self.formula()
        basis = self.string()
        try:
            level = EnrichmentLevel.parse(self.string())
        except LStarError as e:
            raise self.fail(e.message) from e
        nodes = []
        for _ in range(self.varint()):
            node_id = self.varint()
            parent = self.varint()
            sentence = self.formula()
            nodes.append(ProofNode(node_id, parent - 1 if parent else None, sentence,
                                   self.justification()))
        return Proof(goal=goal, nodes=tuple(nodes), basis=basis, level=level)

    def justification(self) -> Justification:
        code = self.varint()
        kinds = {value: key for key, value in _JUSTIFICATION_CODES.items()}
        kind = kinds.get(code)
        if kind is None:
            raise self.fail(f"Unknown justification code {code}")
        if kind == JustificationKind.AXIOM:
            flag = self.varint()
            if flag not in (0, 1):
                raise self.fail("Invalid axiom id flag")
            return Justification(kind, axiom=self.string() if flag else None)
        if kind == JustificationKind.LOGICAL:
            shapes = {value: key for key, value in _SHAPE_CODES.items()}
            shape = shapes.get(self.varint())
            if shape is None:
                raise self.fail("Unknown excluded-middle shape")
            return Justification(kind, shape=shape)
        if kind == JustificationKind.ROOT:
            return Justification(kind)
        rule = self.varint()
        if not 1 <= rule <= 8:
            raise self.fail(f"Unknown rule {rule}")
        ancestor = self.varint()
        witness = self.varint()
        if witness == _TERM_WITNESS:
            return Justification(kind, rule=rule, ancestor=ancestor, term=self.term())
        if witness == _PARAM_WITNESS:
            return Justification(kind, rule=rule, ancestor=ancestor,
                                 param=self.name(is_param_name, "parameter"))
        if witness != _NO_WITNESS:
            raise self.fail("Unknown witness marker")
        return Justification(kind, rule=rule, ancestor=ancestor)

    def finish(self) -> None:
        if self.pos != len(self.data):
            raise self.fail("Trailing bytes after object")


def godel_decode(code: int) -> GodelSubject:
    """
    Inverse of godel_number.

    Raises:
        InvalidGodelCode: code is not the number of any encodable object
    """
    reader = _Reader(code)
    kind = reader.varint()
    if kind == KIND_FORMULA:
        result = reader.formula()
    elif kind == KIND_PROOF:
        result = reader.proof()
    elif kind == KIND_SELF_REF:
        system, level = reader.string(), reader.string()
        result = SelfRefRecord(system=system, level=level, template=reader.varint())
    elif kind == KIND_SELF_REF_TEMPLATE:
        system, level = reader.string(), reader.string()
        result = SelfRefTemplate(system=system, level=level)
    else:
        raise reader.fail(f"Unknown object kind {kind}")
    reader.finish()
    return result


def decode_formula(code: int) -> Formula:
    """godel_decode restricted to formula codes"""
    result = godel_decode(code)
    if not isinstance(result, (Atom, Not, And, Or, Implies, ForAll, Exists,
                               BoundedForAll, BoundedExists)):
        raise InvalidGodelCode("Code does not name a formula")
    return result


def diagonalize(template_code: int) -> int:
    """
    Number of the SelfRef record built from a template code.

    The record stores template_code, and its own number is what this returns,
    so reading the stored reference back through diagonalize reproduces the
    record's number.
    """
    template = godel_decode(template_code)
    if not isinstance(template, SelfRefTemplate):
        raise InvalidGodelCode("Code does not name a SelfRef template")
    return godel_number(
        SelfRefRecord(system=template.system, level=template.level, template=template_code)
    )
