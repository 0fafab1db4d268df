"""
Abstract syntax, text syntax and printing for the language L*.

Terms are built from the constants C0, C1, C2, variables, parameters
(``#name``, introduced only by tableaux rules 5 and 6) and the ten
U-Grounding function symbols. Formulas use the predicates ``=`` and ``<=``,
the connectives ``~ & | ->`` and the quantifiers ``A``/``E`` in unbounded and
bounded (``A x <= t.``) form.

Grammar (whitespace-insensitive, ASCII):

    formula := "A" var ("<=" term)? "." formula | "E" var ("<=" term)? "." formula
             | formula binop formula | "~" formula | "(" formula ")" | atom
    binop   := "&" | "|" | "->"     precedence ~ > & > | > ->, -> right-assoc
    atom    := term ("=" | "<=") term
    term    := "C0" | "C1" | "C2" | var | param | term "+" term | "(" term ")"
             | fn "(" term ("," term)? ")"

A quantifier body extends as far right as possible, so the printer wraps
every quantified operand of a connective in parentheses.
"""

import functools
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from src.errors import ArityError, LStarError, ParseError, UnknownSymbolError

# ============================================================================
# Symbols
# ============================================================================

FUNCTION_ARITY: Dict[str, int] = {
    "sub": 2,
    "div": 2,
    "pred": 1,
    "max": 2,
    "log": 1,
    "root": 2,
    "count": 2,
    "bit": 2,
    "add": 2,
    "double": 1,
}

# The eight non-growth symbols; add and double are the growth functions.
NON_GROWTH_FUNCTIONS = ("sub", "div", "pred", "max", "log", "root", "count", "bit")

RELATIONS = ("=", "<=")

_VARIABLE_RE = re.compile(r"[a-z][a-z0-9_]*\Z")

# ============================================================================
# Terms
# ============================================================================


@dataclass(frozen=True, slots=True)
class Const:
    index: int

    def __post_init__(self):
        if self.index not in (0, 1, 2):
            raise UnknownSymbolError(f"Unknown constant C{self.index}")


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Param:
    """Fresh symbol introduced by tableaux rule 5/6"""

    name: str


@dataclass(frozen=True, slots=True)
class App:
    fn: str
    args: Tuple["Term", ...]

    def __post_init__(self):
        arity = FUNCTION_ARITY.get(self.fn)
        if arity is None:
            raise UnknownSymbolError(f"Unknown function symbol '{self.fn}'")
        if len(self.args) != arity:
            raise ArityError(
                f"Function '{self.fn}' takes {arity} argument(s), got {len(self.args)}"
            )


Term = Union[Const, Var, Param, App]

C0 = Const(0)
C1 = Const(1)
C2 = Const(2)

# ============================================================================
# Formulas
# ============================================================================


@dataclass(frozen=True, slots=True)
class Atom:
    lhs: Term
    rel: str
    rhs: Term

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise UnknownSymbolError(f"Unknown relation '{self.rel}'")


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class ForAll:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class BoundedForAll:
    var: str
    bound: Term
    body: "Formula"

    def __post_init__(self):
        if self.var in term_vars(self.bound):
            raise LStarError(f"Bound term of 'A {self.var} <= ...' mentions '{self.var}'")


@dataclass(frozen=True, slots=True)
class BoundedExists:
    var: str
    bound: Term
    body: "Formula"

    def __post_init__(self):
        if self.var in term_vars(self.bound):
            raise LStarError(f"Bound term of 'E {self.var} <= ...' mentions '{self.var}'")


Formula = Union[Atom, Not, And, Or, Implies, ForAll, Exists, BoundedForAll, BoundedExists]

BINARY_CONNECTIVES = (And, Or, Implies)
UNBOUNDED_QUANTIFIERS = (ForAll, Exists)
BOUNDED_QUANTIFIERS = (BoundedForAll, BoundedExists)
QUANTIFIERS = UNBOUNDED_QUANTIFIERS + BOUNDED_QUANTIFIERS

# ============================================================================
# Tokenizer
# ============================================================================

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<op>->|<=|[()~&|=.,+])
    | (?P<param>\#[A-Za-z0-9_]+)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "op", "param", "ident", "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"Unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = match.lastgroup
        chunk = match.group()
        if kind == "ws":
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = pos + chunk.rindex("\n") + 1
        else:
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ============================================================================
# Parser
# ============================================================================


class _Parser:
    """Recursive-descent parser over the token list"""

    def __init__(self, text: str, allow_params: bool):
        self.tokens = tokenize(text)
        self.pos = 0
        self.allow_params = allow_params

    # ===== Token helpers =====

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.current
        found = "end of input" if token.kind == "eof" else repr(token.text)
        return ParseError(f"{message}, found {found}", token.line, token.column)

    def _at(self, text: str) -> bool:
        token = self.current
        return token.kind == "op" and token.text == text

    def _accept(self, text: str) -> bool:
        if self._at(text):
            self.pos += 1
            return True
        return False

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            raise self._error(f"Expected '{text}'")
        token = self.current
        self.pos += 1
        return token

    def finish(self) -> None:
        if self.current.kind != "eof":
            raise self._error("Unexpected trailing input")

    # ===== Formulas =====

    def formula(self) -> Formula:
        left = self._disjunction()
        if self._accept("->"):
            return Implies(left, self.formula())
        return left

    def _disjunction(self) -> Formula:
        left = self._conjunction()
        while self._accept("|"):
            left = Or(left, self._conjunction())
        return left

    def _conjunction(self) -> Formula:
        left = self._unary()
        while self._accept("&"):
            left = And(left, self._unary())
        return left

    def _unary(self) -> Formula:
        if self._accept("~"):
            return Not(self._unary())
        token = self.current
        if token.kind == "ident" and token.text in ("A", "E"):
            return self._quantified()
        return self._primary()

    def _quantified(self) -> Formula:
        keyword = self.current.text
        self.pos += 1
        var_token = self.current
        var = self._variable_name()
        bound = None
        if self._accept("<="):
            bound = self.term()
            if var in term_vars(bound):
                raise ParseError(
                    f"Bound term of quantifier over '{var}' mentions '{var}'",
                    var_token.line, var_token.column,
                )
        self._expect(".")
        body = self.formula()
        if bound is None:
            return ForAll(var, body) if keyword == "A" else Exists(var, body)
        return BoundedForAll(var, bound, body) if keyword == "A" else BoundedExists(var, bound, body)

    def _primary(self) -> Formula:
        if not self._at("("):
            return self._atom()
        start = self.pos
        formula_error: Optional[LStarError] = None
        try:
            self.pos += 1
            inner = self.formula()
            self._expect(")")
            if not (self._at("=") or self._at("<=") or self._at("+")):
                return inner
        except LStarError as e:
            formula_error = e
        # "(" opened a term, as in "(x + y) = z"
        self.pos = start
        try:
            return self._atom()
        except LStarError:
            if formula_error is not None:
                raise formula_error
            raise

    def _atom(self) -> Formula:
        lhs = self.term()
        token = self.current
        if token.kind == "op" and token.text in RELATIONS:
            self.pos += 1
            return Atom(lhs, token.text, self.term())
        raise self._error("Expected '=' or '<='")

    # ===== Terms =====

    def term(self) -> Term:
        left = self._summand()
        while self._accept("+"):
            left = App("add", (left, self._summand()))
        return left

    def _summand(self) -> Term:
        token = self.current
        if self._accept("("):
            inner = self.term()
            self._expect(")")
            return inner
        if token.kind == "param":
            if not self.allow_params:
                raise self._error("Parameters cannot appear in user input")
            self.pos += 1
            return Param(token.text[1:])
        if token.kind != "ident":
            raise self._error("Expected a term")
        if token.text in ("C0", "C1", "C2"):
            self.pos += 1
            return Const(int(token.text[1]))
        if not _VARIABLE_RE.match(token.text):
            raise UnknownSymbolError(
                f"Unknown symbol '{token.text}' (line {token.line}, column {token.column})",
                {"line": token.line, "column": token.column},
            )
        self.pos += 1
        if self._at("("):
            return self._application(token)
        if token.text in FUNCTION_ARITY:
            raise ParseError(
                f"Function symbol '{token.text}' used without arguments", token.line, token.column
            )
        return Var(token.text)

    def _application(self, name: Token) -> Term:
        if name.text not in FUNCTION_ARITY:
            raise UnknownSymbolError(
                f"Unknown function symbol '{name.text}' (line {name.line}, column {name.column})",
                {"line": name.line, "column": name.column},
            )
        self._expect("(")
        args = [self.term()]
        while self._accept(","):
            args.append(self.term())
        self._expect(")")
        arity = FUNCTION_ARITY[name.text]
        if len(args) != arity:
            raise ArityError(
                f"Function '{name.text}' takes {arity} argument(s), got {len(args)} "
                f"(line {name.line}, column {name.column})",
                {"line": name.line, "column": name.column},
            )
        return App(name.text, tuple(args))

    def _variable_name(self) -> str:
        token = self.current
        if token.kind != "ident" or not _VARIABLE_RE.match(token.text):
            raise self._error("Expected a lowercase variable name")
        if token.text in FUNCTION_ARITY:
            raise self._error(f"'{token.text}' is a function symbol, not a variable")
        self.pos += 1
        return token.text


def parse_formula(text: str, allow_params: bool = False) -> Formula:
    """
    Parse a formula of L*.

    Args:
        text: Formula text in the grammar above
        allow_params: Accept ``#name`` parameters (proof files only)

    Returns:
        The formula AST

    Raises:
        ParseError, ArityError, UnknownSymbolError
    """
    parser = _Parser(text, allow_params)
    result = parser.formula()
    parser.finish()
    return result


def parse_term(text: str, allow_params: bool = False) -> Term:
    parser = _Parser(text, allow_params)
    result = parser.term()
    parser.finish()
    return result


# ============================================================================
# Printer
# ============================================================================


def print_term(t: Term) -> str:
    if isinstance(t, Const):
        return f"C{t.index}"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Param):
        return f"#{t.name}"
    if t.fn == "add":
        left, right = t.args
        right_text = print_term(right)
        if isinstance(right, App) and right.fn == "add":
            right_text = f"({right_text})"
        return f"{print_term(left)} + {right_text}"
    return f"{t.fn}({', '.join(print_term(a) for a in t.args)})"


def _precedence(f: Formula) -> int:
    if isinstance(f, Atom):
        return 5
    if isinstance(f, Not):
        return 4
    if isinstance(f, And):
        return 3
    if isinstance(f, Or):
        return 2
    if isinstance(f, Implies):
        return 1
    return 0


def _wrap(f: Formula, needs_parens: bool) -> str:
    text = print_formula(f)
    return f"({text})" if needs_parens else text


def print_formula(f: Formula) -> str:
    """Canonical text; parse_formula(print_formula(f)) == f"""
    if isinstance(f, Atom):
        return f"{print_term(f.lhs)} {f.rel} {print_term(f.rhs)}"
    if isinstance(f, Not):
        return "~" + _wrap(f.body, not isinstance(f.body, Not))
    if isinstance(f, And):
        return f"{_wrap(f.left, _precedence(f.left) < 3)} & {_wrap(f.right, _precedence(f.right) <= 3)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left, _precedence(f.left) < 2)} | {_wrap(f.right, _precedence(f.right) <= 2)}"
    if isinstance(f, Implies):
        return f"{_wrap(f.left, _precedence(f.left) <= 1)} -> {_wrap(f.right, _precedence(f.right) < 1)}"
    keyword = "A" if isinstance(f, (ForAll, BoundedForAll)) else "E"
    if isinstance(f, BOUNDED_QUANTIFIERS):
        return f"{keyword} {f.var} <= {print_term(f.bound)}. {print_formula(f.body)}"
    return f"{keyword} {f.var}. {print_formula(f.body)}"


# ============================================================================
# Numerals
# ============================================================================


def encode_nat(n: int) -> Term:
    """
    Binary-like numeral for n built from C1, add and double.

    Reading the bits of n from the top: each further bit doubles, and a set bit
    adds C1 in front, so 11 becomes add(C1, double(add(C1, double(double(C1))))).
    """
    if n < 0:
        raise LStarError(f"encode_nat requires n >= 0, got {n}")
    if n == 0:
        return C0
    term: Term = C1
    for bit in bin(n)[3:]:
        term = App("double", (term,))
        if bit == "1":
            term = App("add", (C1, term))
    return term


def double_power(k: int, base: Term = C2) -> Term:
    """k-fold application of double to base"""
    term = base
    for _ in range(k):
        term = App("double", (term,))
    return term


def function_symbol_count(t: Term) -> int:
    if isinstance(t, App):
        return 1 + sum(function_symbol_count(a) for a in t.args)
    return 0


def term_size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + sum(term_size(a) for a in t.args)
    return 1


def formula_size(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1 + term_size(f.lhs) + term_size(f.rhs)
    if isinstance(f, Not):
        return 1 + formula_size(f.body)
    if isinstance(f, BINARY_CONNECTIVES):
        return 1 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, BOUNDED_QUANTIFIERS):
        return 1 + term_size(f.bound) + formula_size(f.body)
    return 1 + formula_size(f.body)


# ============================================================================
# Variables and parameters
# ============================================================================


def term_vars(t: Term) -> FrozenSet[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, App):
        result: FrozenSet[str] = frozenset()
        for a in t.args:
            result |= term_vars(a)
        return result
    return frozenset()


def _ordered_vars(f: Formula, bound: FrozenSet[str], out: Dict[str, None]) -> None:
    def visit_term(t: Term) -> None:
        if isinstance(t, Var):
            if t.name not in bound:
                out.setdefault(t.name)
        elif isinstance(t, App):
            for a in t.args:
                visit_term(a)

    if isinstance(f, Atom):
        visit_term(f.lhs)
        visit_term(f.rhs)
    elif isinstance(f, Not):
        _ordered_vars(f.body, bound, out)
    elif isinstance(f, BINARY_CONNECTIVES):
        _ordered_vars(f.left, bound, out)
        _ordered_vars(f.right, bound, out)
    else:
        if isinstance(f, BOUNDED_QUANTIFIERS):
            visit_term(f.bound)
        _ordered_vars(f.body, bound | {f.var}, out)


def free_vars_ordered(f: Formula) -> List[str]:
    """Free variables in order of first occurrence, left to right"""
    out: Dict[str, None] = {}
    _ordered_vars(f, frozenset(), out)
    return list(out)


def free_vars(f: Formula) -> FrozenSet[str]:
    return frozenset(free_vars_ordered(f))


def is_sentence(f: Formula) -> bool:
    return not free_vars_ordered(f)


def term_params(t: Term) -> FrozenSet[str]:
    if isinstance(t, Param):
        return frozenset((t.name,))
    if isinstance(t, App):
        result: FrozenSet[str] = frozenset()
        for a in t.args:
            result |= term_params(a)
        return result
    return frozenset()


@functools.lru_cache(maxsize=65536)
def formula_params(f: Formula) -> FrozenSet[str]:
    if isinstance(f, Atom):
        return term_params(f.lhs) | term_params(f.rhs)
    if isinstance(f, Not):
        return formula_params(f.body)
    if isinstance(f, BINARY_CONNECTIVES):
        return formula_params(f.left) | formula_params(f.right)
    if isinstance(f, BOUNDED_QUANTIFIERS):
        return term_params(f.bound) | formula_params(f.body)
    return formula_params(f.body)


def all_variable_names(f: Formula) -> FrozenSet[str]:
    """Every variable name in f, free or bound"""
    names = set(free_vars(f))

    def visit(g: Formula) -> None:
        if isinstance(g, Not):
            visit(g.body)
        elif isinstance(g, BINARY_CONNECTIVES):
            visit(g.left)
            visit(g.right)
        elif isinstance(g, QUANTIFIERS):
            names.add(g.var)
            if isinstance(g, BOUNDED_QUANTIFIERS):
                names.update(term_vars(g.bound))
            visit(g.body)
        else:
            names.update(term_vars(g.lhs) | term_vars(g.rhs))

    visit(f)
    return frozenset(names)


def fresh_variable(base: str, avoid: Iterable[str]) -> str:
    taken = set(avoid)
    stem = base.split("_")[0] or "v"
    index = 1
    while f"{stem}_{index}" in taken:
        index += 1
    return f"{stem}_{index}"


# ============================================================================
# Substitution
# ============================================================================


def subst_term(t: Term, var: str, replacement: Term) -> Term:
    if isinstance(t, Var):
        return replacement if t.name == var else t
    if isinstance(t, App):
        return App(t.fn, tuple(subst_term(a, var, replacement) for a in t.args))
    return t


def substitute(f: Formula, var: str, replacement: Term) -> Formula:
    """Capture-avoiding substitution of replacement for the free variable var"""
    if var not in free_vars(f):
        return f
    return _substitute(f, var, replacement, term_vars(replacement))


def _substitute(f: Formula, var: str, replacement: Term, danger: FrozenSet[str]) -> Formula:
    if isinstance(f, Atom):
        return Atom(subst_term(f.lhs, var, replacement), f.rel, subst_term(f.rhs, var, replacement))
    if isinstance(f, Not):
        return Not(_substitute(f.body, var, replacement, danger))
    if isinstance(f, BINARY_CONNECTIVES):
        return type(f)(
            _substitute(f.left, var, replacement, danger),
            _substitute(f.right, var, replacement, danger),
        )
    bound_term = subst_term(f.bound, var, replacement) if isinstance(f, BOUNDED_QUANTIFIERS) else None
    if f.var == var:
        body = f.body
        v = f.var
    else:
        v, body = f.var, f.body
        if v in danger and var in free_vars(body):
            v = fresh_variable(v, all_variable_names(body) | danger | {var})
            body = _substitute(body, f.var, Var(v), frozenset((v,)))
        body = _substitute(body, var, replacement, danger)
    if isinstance(f, BOUNDED_QUANTIFIERS):
        return type(f)(v, bound_term, body)
    return type(f)(v, body)


def rename_bound(f: Formula, new_var: str) -> Formula:
    """Rename the outermost bound variable of quantifier f to new_var"""
    body = substitute(f.body, f.var, Var(new_var))
    if isinstance(f, BOUNDED_QUANTIFIERS):
        return type(f)(new_var, f.bound, body)
    return type(f)(new_var, body)


# ============================================================================
# Alpha-canonical form
# ============================================================================


def _canon_term(t: Term, scope: Tuple[str, ...]) -> tuple:
    if isinstance(t, Var):
        for depth in range(len(scope) - 1, -1, -1):
            if scope[depth] == t.name:
                return ("b", len(scope) - 1 - depth)
        return ("v", t.name)
    if isinstance(t, Const):
        return ("c", t.index)
    if isinstance(t, Param):
        return ("p", t.name)
    return (t.fn,) + tuple(_canon_term(a, scope) for a in t.args)


def _canon(f: Formula, scope: Tuple[str, ...]) -> tuple:
    if isinstance(f, Atom):
        return (f.rel, _canon_term(f.lhs, scope), _canon_term(f.rhs, scope))
    if isinstance(f, Not):
        return ("~", _canon(f.body, scope))
    if isinstance(f, BINARY_CONNECTIVES):
        return (type(f).__name__, _canon(f.left, scope), _canon(f.right, scope))
    inner = scope + (f.var,)
    if isinstance(f, BOUNDED_QUANTIFIERS):
        return (type(f).__name__, _canon_term(f.bound, scope), _canon(f.body, inner))
    return (type(f).__name__, _canon(f.body, inner))


@functools.lru_cache(maxsize=262144)
def canonical(f: Formula) -> tuple:
    """De Bruijn-style key: alpha-equivalent formulas share it"""
    return _canon(f, ())


def alpha_equal(f: Formula, g: Formula) -> bool:
    return f == g or canonical(f) == canonical(g)


# ============================================================================
# Builders
# ============================================================================


def fn(name: str, *args: Term) -> App:
    return App(name, tuple(args))


def eq(lhs: Term, rhs: Term) -> Atom:
    return Atom(lhs, "=", rhs)


def le(lhs: Term, rhs: Term) -> Atom:
    return Atom(lhs, "<=", rhs)


def lt(lhs: Term, rhs: Term) -> Formula:
    """lhs < rhs, written ~(rhs <= lhs)"""
    return Not(le(rhs, lhs))


def conjoin(*parts: Formula) -> Formula:
    result = parts[0]
    for part in parts[1:]:
        result = And(result, part)
    return result


def forall_many(variables: Sequence[str], body: Formula) -> Formula:
    for v in reversed(variables):
        body = ForAll(v, body)
    return body


def exists_many(variables: Sequence[str], body: Formula) -> Formula:
    for v in reversed(variables):
        body = Exists(v, body)
    return body


def add_relation(x: Term, y: Term, z: Term) -> Formula:
    """Add(x, y, z): z - x = y and x <= z, true exactly when x + y = z"""
    return And(eq(fn("sub", z, x), y), le(x, z))


def add_relation_as_printed(x: Term, y: Term, z: Term) -> Formula:
    """The z - x = y and y <= z rendering; it also accepts z < x with y = 0"""
    return And(eq(fn("sub", z, x), y), le(y, z))


def mult_relation(x: Term, y: Term, z: Term) -> Formula:
    """Mult(x, y, z) as a quantifier-free formula"""
    zero_case = Implies(Or(eq(x, C0), eq(y, C0)), eq(z, C0))
    exact = And(eq(fn("div", z, x), y), lt(fn("div", fn("sub", z, C1), x), y))
    nonzero_case = Implies(And(Not(eq(x, C0)), Not(eq(y, C0))), exact)
    return And(zero_case, nonzero_case)


def iter_subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from iter_subformulas(f.body)
    elif isinstance(f, BINARY_CONNECTIVES):
        yield from iter_subformulas(f.left)
        yield from iter_subformulas(f.right)
    elif isinstance(f, QUANTIFIERS):
        yield from iter_subformulas(f.body)


def iter_ground_subterms(f: Formula) -> Iterator[Term]:
    """Closed subterms of f (no variables), outermost first"""

    def visit(t: Term) -> Iterator[Term]:
        if not term_vars(t):
            yield t
        if isinstance(t, App):
            for a in t.args:
                yield from visit(a)

    for g in iter_subformulas(f):
        if isinstance(g, Atom):
            yield from visit(g.lhs)
            yield from visit(g.rhs)
        elif isinstance(g, BOUNDED_QUANTIFIERS):
            yield from visit(g.bound)


# ============================================================================
# Parameter renaming
# ============================================================================


def map_term_params(t: Term, mapping: Dict[str, str]) -> Term:
    if isinstance(t, Param):
        return Param(mapping.get(t.name, t.name))
    if isinstance(t, App):
        return App(t.fn, tuple(map_term_params(a, mapping) for a in t.args))
    return t


def map_params(f: Formula, mapping: Dict[str, str]) -> Formula:
    """Rename parameters by mapping; names not in mapping are kept"""
    if not mapping or not (formula_params(f) & mapping.keys()):
        return f
    if isinstance(f, Atom):
        return Atom(map_term_params(f.lhs, mapping), f.rel, map_term_params(f.rhs, mapping))
    if isinstance(f, Not):
        return Not(map_params(f.body, mapping))
    if isinstance(f, BINARY_CONNECTIVES):
        return type(f)(map_params(f.left, mapping), map_params(f.right, mapping))
    if isinstance(f, BOUNDED_QUANTIFIERS):
        return type(f)(f.var, map_term_params(f.bound, mapping), map_params(f.body, mapping))
    return type(f)(f.var, map_params(f.body, mapping))


_PARAM_RE = re.compile(r"[A-Za-z0-9_]+\Z")


def is_variable_name(name: str) -> bool:
    return bool(_VARIABLE_RE.match(name)) and name not in FUNCTION_ARITY


def is_param_name(name: str) -> bool:
    return bool(_PARAM_RE.match(name))


@functools.lru_cache(maxsize=4096)
def terms_of_size(base: Tuple[Term, ...], size: int) -> Tuple[Term, ...]:
    """Every term of exactly the given size built over base by the function symbols"""
    if size < 1:
        return ()
    if size == 1:
        return base
    result: List[Term] = []
    for name, arity in FUNCTION_ARITY.items():
        if arity == 1:
            result.extend(App(name, (a,)) for a in terms_of_size(base, size - 1))
            continue
        for left_size in range(1, size - 1):
            for a in terms_of_size(base, left_size):
                for b in terms_of_size(base, size - 1 - left_size):
                    result.append(App(name, (a, b)))
    return tuple(result)
