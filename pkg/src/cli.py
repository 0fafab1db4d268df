"""
Command-line surface for the L* toolkit.

One subcommand per process. Results go to standard output, either as text
or as a CommandResponse envelope (--format structured); progress lines go
to standard error when --verbose is set.

Exit codes:
    0  success, Valid, true, proof or refutation found
    1  Invalid, false, NotFoundWithinBudget, NoRefutationFound
    2  usage, parse or input error
"""

import argparse
import os
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import orjson

from src.bench import ChainBenchmark, dumps_report, format_report
from src.config import get_config, log, set_verbose
from src.cut import cut_combine
from src.enrichment import NONE, RANK_ZERO, EnrichmentLevel
from src.errors import LStarError, NotClosedError
from src.generators import make_rng, random_formula
from src.godel import diagonalize, godel_decode, godel_number
from src.lang import (
    encode_nat,
    free_vars_ordered,
    function_symbol_count,
    is_sentence,
    parse_formula,
    parse_term,
    print_formula,
    print_term,
)
from src.models import (
    CommandResponse,
    CommandType,
    ErrorDetail,
    JustificationKind,
    OutputFormat,
    ResponseMetadata,
    SearchMode,
    SearchVerdict,
    format_bignat,
    parse_bignat,
)
from src.prenex import classify, to_prenex, truncate
from src.semantics import decide_delta0, eval_term
from src.systems import (
    GeneralizedArithmetic,
    classify_type,
    dumps_run_record,
    group2_record,
    group3_record,
    loads_run_record,
    named_basis,
    run_consistency,
    self_ref_extend,
    self_ref_record,
    witness_certified,
)
from src.tableaux import (
    Proof,
    check_proof,
    dumps_proof,
    proof_size,
    proof_to_document,
    prove,
    read_proof_file,
)
EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

# (exit code, text output, structured data)
Outcome = Tuple[int, str, Any]


class _UsageError(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class _ArgumentParser(argparse.ArgumentParser):
    """Raises instead of exiting so run() owns the exit status"""

    def error(self, message: str):
        raise _UsageError(f"{self.prog}: {message}")

# ============================================================================
# Helpers
# ============================================================================


def _level(text: Optional[str]):
    return EnrichmentLevel.parse(text) if text is not None else None


def _sentence(text: str):
    formula = parse_formula(text)
    if not is_sentence(formula):
        raise NotClosedError(
            f"Expected a sentence; free variables: {', '.join(free_vars_ordered(formula))}"
        )
    return formula


def format_proof(proof) -> str:
    """One line per node: id, parent, sentence and justification"""
    lines = [f"goal: {print_formula(proof.goal)}  basis: {proof.basis}  level: {proof.level}"]
    for node in proof.nodes:
        j = node.justification
        if j.kind == JustificationKind.RULE:
            why = f"rule {j.rule} from {j.ancestor}"
            if j.term is not None:
                why += f" with {print_term(j.term)}"
            if j.param is not None:
                why += f" with #{j.param}"
        elif j.kind == JustificationKind.AXIOM:
            why = f"axiom {j.axiom}" if j.axiom else "axiom"
        elif j.kind == JustificationKind.LOGICAL:
            why = f"logical ({j.shape.value})"
        else:
            why = "root"
        parent = "-" if node.parent is None else str(node.parent)
        lines.append(f"{node.id:>4} {parent:>4}  {print_formula(node.sentence)}    [{why}]")
    return "\n".join(lines)


def _write(path: Optional[str], data: bytes) -> None:
    if path is None:
        return
    try:
        Path(path).write_bytes(data)
    except OSError as e:
        raise LStarError(f"Cannot write {path}: {e.strerror}") from e

# ============================================================================
# Commands
# ============================================================================


def cmd_eval(args) -> Outcome:
    value = eval_term(parse_term(args.term))
    return EXIT_OK, format_bignat(value), {"value": format_bignat(value)}


def cmd_decide(args) -> Outcome:
    truth = decide_delta0(_sentence(args.sentence))
    return (EXIT_OK if truth else EXIT_NEGATIVE), str(truth).lower(), {"value": truth}


def cmd_classify(args) -> Outcome:
    sentence = _sentence(args.sentence)
    if args.normalize:
        sentence = to_prenex(sentence)
    shape = classify(sentence)
    text = shape.label if not args.normalize else f"{shape.label}  {print_formula(sentence)}"
    return EXIT_OK, text, {"class": shape.model_dump(mode="json"),
                           "sentence": print_formula(sentence)}


def cmd_prenex(args) -> Outcome:
    result = to_prenex(_sentence(args.sentence))
    if args.truncate is not None:
        result = truncate(result, args.truncate)
    text = print_formula(result)
    return EXIT_OK, text, {"sentence": text}


def cmd_prove(args) -> Outcome:
    basis = named_basis(args.basis)
    level = _level(args.level) or NONE
    result = prove(_sentence(args.goal), basis, level, args.budget, args.max_term_size)
    if not isinstance(result, Proof):
        text = (f"NotFoundWithinBudget: {result.expansions} expansions of {result.budget}, "
                f"depth {result.depth_reached}"
                + (", search space exhausted" if result.exhausted else ""))
        return EXIT_NEGATIVE, text, {
            "found": False,
            "budget": result.budget,
            "expansions": result.expansions,
            "depth_reached": result.depth_reached,
            "exhausted": result.exhausted,
        }
    _write(args.out, dumps_proof(result))
    text = f"Proof found: {proof_size(result)} nodes\n{format_proof(result)}"
    return EXIT_OK, text, {"found": True, "size": proof_size(result),
                           "proof": proof_to_document(result).model_dump(mode="json")}


def cmd_check(args) -> Outcome:
    proof = read_proof_file(args.proof_file)
    basis = named_basis(args.basis or proof.basis)
    verdict = check_proof(proof, basis, _level(args.level))
    if verdict.valid:
        return EXIT_OK, "Valid", verdict.model_dump(mode="json")
    where = f" (node {verdict.node_id})" if verdict.node_id is not None else ""
    return EXIT_NEGATIVE, f"Invalid: {verdict.reason}{where}", verdict.model_dump(mode="json")


def cmd_cut(args) -> Outcome:
    proof_psi = read_proof_file(args.psi_file)
    proof_impl = read_proof_file(args.impl_file)
    basis = named_basis(args.basis) if args.basis else None
    result = cut_combine(proof_psi, proof_impl, basis=basis, level=_level(args.level))
    _write(args.out, dumps_proof(result))
    text = (f"Combined proof: {proof_size(result)} nodes "
            f"(inputs {proof_size(proof_psi)} + {proof_size(proof_impl)}) at level {result.level}"
            f"\n{format_proof(result)}")
    return EXIT_OK, text, {"size": proof_size(result), "level": str(result.level)}


def cmd_encode(args) -> Outcome:
    if args.n < 0:
        raise LStarError(f"encode needs n >= 0, got {args.n}")
    term = encode_nat(args.n)
    text = print_term(term)
    return EXIT_OK, text, {"term": text, "function_symbols": function_symbol_count(term)}


def cmd_godel(args) -> Outcome:
    if args.decode:
        try:
            code = int(parse_bignat(args.text))
        except ValueError:
            raise LStarError(f"Not a Gödel number: {args.text}") from None
        decoded = godel_decode(code)
        if hasattr(decoded, "model_dump"):
            return EXIT_OK, repr(decoded), decoded.model_dump(mode="json")
        if hasattr(decoded, "nodes"):
            return EXIT_OK, format_proof(decoded), {"proof_goal": print_formula(decoded.goal)}
        text = print_formula(decoded)
        return EXIT_OK, text, {"formula": text}
    number = godel_number(_sentence(args.text))
    return EXIT_OK, format_bignat(number), {"godel_number": hex(number)}


def cmd_system(args) -> Outcome:
    g = GeneralizedArithmetic(named_basis(args.basis), _level(args.level) or NONE)

    if args.action == "classify":
        result = classify_type(g, args.budget)
        parts = []
        for e in result.evidence:
            if e.proved:
                parts.append(f"{e.which.value}: proved ({e.proof_size} nodes)")
            else:
                parts.append(f"{e.which.value}: unproven within budget {e.budget}")
        return EXIT_OK, f"{result.kind.value}  " + "; ".join(parts), result.model_dump(mode="json")

    if args.action == "selfref":
        extended = self_ref_extend(g)
        record = self_ref_record(extended)
        identity = diagonalize(extended.basis.record.template) == godel_number(
            extended.basis.record
        )
        text = (f"{record.display}\nsystem: {extended.name}\nstand-in axiom: {record.sentence}\n"
                f"diagonal identity: {'holds' if identity else 'FAILS'}")
        return (EXIT_OK if identity else EXIT_NEGATIVE), text, record.model_dump(mode="json")

    if args.action == "consearch":
        mode = SearchMode(args.mode)
        outcome, record = run_consistency(g, mode, args.budget, args.n)
        _write(args.out, dumps_run_record(record))
        found = outcome.verdict == SearchVerdict.REFUTATION_FOUND
        text = f"{outcome.verdict.value} ({outcome.expansions} of {outcome.budget} expansions)"
        if outcome.sentence is not None and found:
            text += f"\nsentence: {print_formula(outcome.sentence)}"
        if outcome.witness is not None:
            text += f"\nPair witness certified: {witness_certified(g, outcome, args.n)}"
        return (EXIT_OK if found else EXIT_NEGATIVE), text, record.model_dump(mode="json")

    if args.action == "group2":
        if not args.sentence:
            raise _UsageError("system group2 needs --sentence")
        sentence = _sentence(args.sentence)
        result = prove(sentence, g.basis, g.level, args.budget)
        if not isinstance(result, Proof):
            return EXIT_NEGATIVE, "NotFoundWithinBudget: no proof to record", {"found": False}
        record = group2_record(sentence, result, g)
        return EXIT_OK, record.display, record.model_dump(mode="json")

    record = group3_record(g, args.budget)
    text = f"{record.display}\nviolated: {record.violated} (budget {record.budget})"
    return (EXIT_NEGATIVE if record.violated else EXIT_OK), text, record.model_dump(mode="json")


def cmd_bench(args) -> Outcome:
    report = ChainBenchmark(_level(args.level) or RANK_ZERO, args.budget, args.workers).run(
        args.n_max
    )
    _write(args.out, dumps_report(report))
    ok = report.all_valid and report.linear_bound_holds
    return (EXIT_OK if ok else EXIT_NEGATIVE), format_report(report), report.model_dump(mode="json")


def cmd_report(args) -> Outcome:
    try:
        data = Path(args.record).read_bytes()
    except OSError as e:
        raise LStarError(f"Cannot read run record {args.record}: {e.strerror}") from e
    record = loads_run_record(data)
    lines = [
        f"system:   {record.system}",
        f"mode:     {record.mode}",
        f"verdict:  {record.verdict.value}",
        f"budget:   {record.budget} ({record.expansions} expansions used)",
        f"time:     {record.wall_time_ms:.1f}ms",
    ]
    if record.witness is not None:
        lines.append(f"witness:  {record.witness.sentence}")
    for i, proof in enumerate(record.proofs):
        lines.append(f"proof {i}:  {proof.header.goal} ({len(proof.nodes)} nodes)")
    return EXIT_OK, "\n".join(lines), record.model_dump(mode="json")


def cmd_fuzz(args) -> Outcome:
    rng = make_rng(args.seed)
    failures: List[str] = []
    for _ in range(args.count):
        formula = random_formula(rng, args.depth, ("x", "y"))
        text = print_formula(formula)
        if parse_formula(text) != formula:
            failures.append(f"parse/print: {text}")
        elif godel_decode(godel_number(formula)) != formula:
            failures.append(f"godel: {text}")
    text = f"{args.count - len(failures)}/{args.count} round trips passed"
    if failures:
        text += "\n" + "\n".join(failures[:10])
    return (EXIT_NEGATIVE if failures else EXIT_OK), text, {
        "count": args.count, "failures": failures,
    }


COMMANDS: Dict[str, Callable[[Any], Outcome]] = {
    "eval": cmd_eval,
    "decide": cmd_decide,
    "classify": cmd_classify,
    "prenex": cmd_prenex,
    "prove": cmd_prove,
    "check": cmd_check,
    "cut": cmd_cut,
    "encode": cmd_encode,
    "godel": cmd_godel,
    "system": cmd_system,
    "bench": cmd_bench,
    "report": cmd_report,
    "fuzz": cmd_fuzz,
}

# ============================================================================
# Parser
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="lstar", description="L* arithmetic and proof toolkit")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument("--seed", type=int, default=None)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("eval", help="Evaluate a closed term")
    p.add_argument("term")

    p = sub.add_parser("decide", help="Decide a Delta0 sentence")
    p.add_argument("sentence")

    p = sub.add_parser("classify", help="Delta0 / Pi / Sigma class of a Prenex* sentence")
    p.add_argument("sentence")
    p.add_argument("--normalize", action="store_true", help="Apply to_prenex first")

    p = sub.add_parser("prenex", help="Prenex* normal form")
    p.add_argument("sentence")
    p.add_argument("--truncate", type=int, default=None, metavar="B")

    def basis_and_level(p, basis_default: Optional[str] = "empty"):
        p.add_argument("--basis", default=basis_default)
        p.add_argument("--level", default=None)

    p = sub.add_parser("prove", help="Search for a tableaux proof")
    p.add_argument("goal")
    basis_and_level(p)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--max-term-size", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("check", help="Check a proof file")
    p.add_argument("proof_file")
    basis_and_level(p, None)

    p = sub.add_parser("cut", help="Combine proofs of Psi and Psi -> Phi")
    p.add_argument("psi_file")
    p.add_argument("impl_file")
    basis_and_level(p, None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("encode", help="Numeral term for n")
    p.add_argument("n", type=int)

    p = sub.add_parser("godel", help="Gödel number of a sentence")
    p.add_argument("text")
    p.add_argument("--decode", action="store_true", help="Decode a number instead")

    p = sub.add_parser("system", help="Generalized-arithmetic experiments")
    p.add_argument("action", choices=["classify", "selfref", "consearch", "group2", "group3"])
    basis_and_level(p, "relational")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--mode", choices=["level0minus", "level"], default="level0minus")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--sentence", default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("bench", help="Proof-length benchmark")
    p.add_argument("family", choices=["chain"])
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--level", default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("report", help="Print a run record")
    p.add_argument("record")

    p = sub.add_parser("fuzz", help="Seeded parse/print and Gödel round-trip self-check")
    p.add_argument("count", type=int)
    p.add_argument("--depth", type=int, default=4)

    return parser

# ============================================================================
# Entry points
# ============================================================================


def _emit(response, output_format: str, text: str) -> None:
    if output_format == OutputFormat.STRUCTURED:
        sys.stdout.write(orjson.dumps(
            response.model_dump(mode="json", exclude_none=True),
            option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE,
        ).decode("utf-8"))
    elif text:
        print(text)


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run one command, print its result and return the exit code"""
    os.environ.setdefault("ENVIRONMENT", "development")

    start_time = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as e:
        print(e.message, file=sys.stderr)
        return EXIT_USAGE

    if args.verbose:
        set_verbose(True)
    output_format = args.format or get_config().get("output", "format", default="text")

    try:
        code, text, data = COMMANDS[args.command](args)
        error = None
    except _UsageError as e:
        code, text, data = EXIT_USAGE, "", None
        error = ErrorDetail(code="USAGE_ERROR", message=e.message)
        print(f"✗ {e.message}", file=sys.stderr)
    except LStarError as e:
        code, text, data = EXIT_USAGE, "", None
        error = ErrorDetail(code=e.code, message=e.message, details=e.details or None)
        print(f"✗ {e.message}", file=sys.stderr)
    except ValueError as e:
        code, text, data = EXIT_USAGE, "", None
        error = ErrorDetail(code="VALIDATION_ERROR", message=str(e))
        print(f"✗ Validation error: {e}", file=sys.stderr)

    execution_time_ms = (time.perf_counter() - start_time) * 1000
    response = CommandResponse(
        success=code == EXIT_OK,
        metadata=ResponseMetadata(command=CommandType(args.command),
                                  execution_time_ms=round(execution_time_ms, 2)),
        data=data,
        error=error,
    )
    log(f"{'✓' if code == EXIT_OK else '✗'} {args.command}: exit {code} "
        f"in {execution_time_ms:.2f}ms")
    _emit(response, output_format, text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
