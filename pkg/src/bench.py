"""
Proof-length benchmark over the implication-chain family.

For each n the basis is chain:n, that is A_0 plus A_i -> A_(i+1) for i < n,
and the goal is A_n. The plain column is whatever prove() finds at level
none. The enriched column assembles the proof of A_n by cutting the proof
of A_1 against the two-node proofs of each A_i -> A_(i+1) in turn, at the
requested level. Rows are independent and run on a thread pool.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import List, Optional, Tuple

import orjson
import polars as pl
from pydantic import ValidationError

from src.config import get_config, log
from src.cut import CUT_SLACK, cut_combine
from src.enrichment import RANK_ZERO, EnrichmentLevel
from src.errors import LStarError, ProofFormatError
from src.lang import Implies
from src.models import BenchReport, BenchRow
from src.systems import chain_atom, chain_basis
from src.tableaux import Proof, ProofSearch, check_proof, proof_size


class ChainBenchmark:
    """Runs bench_chain rows and assembles the report"""

    def __init__(
        self,
        level: EnrichmentLevel = RANK_ZERO,
        budget: Optional[int] = None,
        workers: Optional[int] = None,
    ):
        cfg = get_config()
        self.level = level
        self.budget = budget if budget is not None else int(cfg.get("bench", "default_budget"))
        self.workers = workers if workers is not None else int(cfg.get("bench", "workers"))

    def _search(self, goal, basis) -> Tuple[Optional[Proof], int]:
        search = ProofSearch(basis, budget=self.budget)
        result = search.run(goal)
        return (result if isinstance(result, Proof) else None), search.expansions

    def run_row(self, n: int) -> BenchRow:
        started = time.perf_counter()
        basis = chain_basis(n)

        plain, plain_expansions = self._search(chain_atom(n), basis)
        plain_valid = plain is None or check_proof(plain, basis).valid

        enriched, enriched_expansions = self._search(chain_atom(1), basis)
        if enriched is None:
            raise LStarError(f"No proof of A_1 from chain:{n} within {self.budget} expansions")
        cut_bound = None
        for i in range(1, n):
            step, used = self._search(Implies(chain_atom(i), chain_atom(i + 1)), basis)
            enriched_expansions += used
            if step is None:
                raise LStarError(f"No proof of step {i} of chain:{n} within {self.budget} expansions")
            cut_bound = proof_size(enriched) + proof_size(step) + CUT_SLACK
            enriched = cut_combine(enriched, step, level=self.level)
        enriched_valid = check_proof(enriched, basis, enriched.level).valid and plain_valid

        wall = (time.perf_counter() - started) * 1000
        log(f"{'✓' if enriched_valid else '✗'} chain:{n}: plain "
            f"{proof_size(plain) if plain else 'budget exhausted'}, enriched "
            f"{proof_size(enriched)} nodes, {wall:.1f}ms")
        return BenchRow(
            n=n,
            plain_size=proof_size(plain) if plain is not None else None,
            plain_expansions=plain_expansions,
            plain_budget_exhausted=plain is None,
            enriched_size=proof_size(enriched),
            enriched_valid=enriched_valid,
            cut_steps=n - 1,
            cut_bound=cut_bound,
            enriched_expansions=enriched_expansions,
            wall_time_ms=wall,
        )

    def run(self, n_max: int) -> BenchReport:
        if n_max < 1:
            raise LStarError(f"n-max must be at least 1, got {n_max}")

        log(f"📊 Benchmarking chain family up to n={n_max} at level {self.level}...")
        rows: List[BenchRow] = []
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            futures = [executor.submit(self.run_row, n) for n in range(1, n_max + 1)]
            for future in as_completed(futures):
                rows.append(future.result())
        rows.sort(key=lambda row: row.n)

        c1, c2 = fit_linear_bound(rows)
        holds = all(row.cut_bound is None or row.enriched_size <= row.cut_bound for row in rows)
        holds = holds and all(row.enriched_size <= c1 * row.n + c2 for row in rows)
        return BenchReport(
            family="chain",
            level=str(self.level),
            budget=self.budget,
            n_max=n_max,
            rows=rows,
            c1=c1,
            c2=c2,
            linear_bound_holds=holds,
            all_valid=all(row.enriched_valid for row in rows),
        )


def fit_linear_bound(rows: List[BenchRow]) -> Tuple[int, int]:
    """
    Smallest slope c1 covering every step between consecutive rows, and the
    least c2 with enriched_size <= c1 * n + c2 on every row.
    """
    df = pl.DataFrame({"n": [r.n for r in rows], "size": [r.enriched_size for r in rows]})
    steps = df.with_columns(
        (pl.col("size").diff() / pl.col("n").diff()).alias("slope")
    )["slope"].drop_nulls()
    c1 = max(0, math.ceil(steps.max())) if len(steps) else 0
    c2 = int(df.select((pl.col("size") - c1 * pl.col("n")).max()).item())
    return c1, c2


def bench_chain(
    n_max: int,
    level: EnrichmentLevel = RANK_ZERO,
    budget: Optional[int] = None,
) -> BenchReport:
    return ChainBenchmark(level, budget).run(n_max)


def report_table(report: BenchReport) -> pl.DataFrame:
    return pl.DataFrame(
        [row.model_dump() for row in report.rows]
    ).select(
        "n",
        "plain_size",
        "plain_expansions",
        "enriched_size",
        "cut_bound",
        "enriched_valid",
        pl.col("wall_time_ms").round(1),
    )


def format_report(report: BenchReport) -> str:
    """Human-readable table plus the fitted constants"""
    with pl.Config(tbl_rows=-1, tbl_hide_dataframe_shape=True):
        table = str(report_table(report))
    verdict = "holds" if report.linear_bound_holds else "FAILS"
    validity = "all proofs valid" if report.all_valid else "some proofs rejected by the checker"
    return (
        f"chain family, level {report.level}, budget {report.budget}\n"
        f"{table}\n"
        f"enriched size <= {report.c1}·n + {report.c2}: {verdict}; {validity}"
    )


def dumps_report(report: BenchReport) -> bytes:
    return orjson.dumps(report.model_dump(mode="json"), option=orjson.OPT_APPEND_NEWLINE)


def loads_report(data: bytes) -> BenchReport:
    """
    Raises:
        ProofFormatError: malformed bench report
    """
    try:
        return BenchReport.model_validate(orjson.loads(data))
    except (orjson.JSONDecodeError, ValidationError) as e:
        raise ProofFormatError(f"Invalid bench report: {e}") from e
