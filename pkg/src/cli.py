"""
Command-line surface: expand, count, solve, verify, tables and samples.

Usage:
    python -m src.cli expand --series f4_6 --prec 10
    python -m src.cli count --form A:1,1,1,1,1,1 --n 1
    python -m src.cli solve --form B:1,1,2 --format records
    python -m src.cli verify --all --nmax 40 --workers 4
    python -m src.cli tables --table chi12
    python -m src.cli samples --nmax 100

Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
3 internal inconsistency.
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from src.catalog import named_series
from src.eta_search import RemediationFailed
from src.refdata import TABLE_KEYS, TABLE_NUMBERS, load_sample_formulas
from src.repcount import QuadraticForm, count_representations, enumerate_forms
from src.solver import (VerificationReport, basis_for_space, check_sample_formula, default_precision, diff_tables,
                        solve_coefficients, verify_form)
from src.utils import format_fraction, load_config, set_config_path, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_INTERNAL = 3

Record = Dict[str, Any]


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_USAGE."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"Error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _table_key(text: str) -> str:
    key = TABLE_NUMBERS.get(text, text)
    if key not in TABLE_KEYS:
        choices = ", ".join(list(TABLE_NUMBERS) + list(TABLE_KEYS))
        raise argparse.ArgumentTypeError(f"unknown table {text!r} (choose from {choices})")
    return key


def _record(kind: str, **payload: Any) -> Record:
    return {"kind": kind, **payload}


def emit(records: Sequence[Record], fmt: str, stream=None) -> None:
    """Write records as JSON lines or as an aligned table."""
    stream = stream or sys.stdout
    if fmt == "records":
        for record in records:
            stream.write(json.dumps(record) + "\n")
        return
    if not records:
        stream.write("(no rows)\n")
        return
    frame = pd.DataFrame.from_records(list(records))
    stream.write(frame.to_string(index=False) + "\n")


def cmd_expand(series_name: str, prec: int) -> List[Record]:
    series = named_series(series_name, prec)
    return [_record("expand", series=series_name, n=n, coefficient=format_fraction(c)) for n, c in enumerate(series.coeffs)]


def cmd_count(form_label: str, n: Optional[int], n_max: Optional[int]) -> List[Record]:
    form = QuadraticForm.parse(form_label)
    if n is None and n_max is None:
        raise ValueError("count needs --n or --nmax")
    values = [n] if n is not None else range(n_max + 1)
    return [_record("count", form=form.label, n=m, count=count_representations(form, m)) for m in values]


def cmd_solve(form_label: str, prec: int) -> List[Record]:
    form = QuadraticForm.parse(form_label)
    vector = solve_coefficients(form, prec)
    basis, _ = basis_for_space(vector.space.label, prec)
    return [
        _record("solve", form=form.label, space=vector.space.label, index=element.index, element=element.label,
                coefficient=format_fraction(c))
        for element, c in zip(basis, vector.entries)
    ]


def _verify_record(report: VerificationReport) -> Record:
    first = report.violations[0] if report.violations else None
    return _record(
        "verify",
        form=report.form.label,
        space=report.form.character_label,
        n_max=report.n_max,
        violations=len(report.violations),
        first_violation=first[0] if first else None,
        verdict="ok" if report.ok else "fail",
    )


def _verify_worker(task: Tuple[str, int, int, Optional[str]]) -> Record:
    label, n_max, prec, config_path = task
    set_config_path(config_path)
    return _verify_record(verify_form(QuadraticForm.parse(label), n_max, prec))


def cmd_verify(form_labels: Sequence[str], n_max: int, prec: int, workers: int,
               config_path: Optional[str] = None) -> Tuple[List[Record], bool]:
    """
    Verify forms against brute force, in parallel when workers > 1.

    Returns:
        (records in the order of form_labels, True if every form passed)
    """
    forms = [QuadraticForm.parse(label) for label in form_labels]
    tasks = [(form.label, n_max, prec, config_path) for form in forms]
    results: Dict[str, Record] = {}
    if workers <= 1 or len(tasks) == 1:
        for task in tqdm(tasks, desc="Verifying", disable=len(tasks) == 1, file=sys.stderr):
            results[task[0]] = _verify_worker(task)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_verify_worker, task): task[0] for task in tasks}
            for future in tqdm(as_completed(futures), total=len(futures), desc="Verifying", file=sys.stderr):
                results[futures[future]] = future.result()
    records = [results[form.label] for form in forms]
    return records, all(r["verdict"] == "ok" for r in records)


def cmd_tables(table_keys: Sequence[str], prec: int, n_max: int) -> Tuple[List[Record], bool]:
    """
    Column-by-column comparison of the printed tables with solved vectors.

    Returns:
        (records, True if every solved vector reproduces brute-force counts)
    """
    diffs = diff_tables(prec, table_keys, n_max)
    records = [
        _record("diff", table=d.table, row=d.row_label, form=d.form.label, column=d.column,
                printed=format_fraction(d.printed_value), computed=format_fraction(d.computed_value), verdict=d.verdict,
                printed_reproduces_counts=d.printed_reproduces_counts,
                computed_reproduces_counts=d.computed_reproduces_counts, first_failing_n=d.first_failing_n)
        for d in diffs
    ]
    return records, all(d.computed_reproduces_counts for d in diffs)


def cmd_samples(n_max: int, prec: int) -> List[Record]:
    records = []
    for formula in load_sample_formulas():
        report = check_sample_formula(formula, n_max, prec)
        records.append(_record(
            "sample", form=formula.form.label, space=formula.space, n_max=n_max,
            agrees_with_pipeline=report.agrees_with_pipeline, agrees_with_counts=report.agrees_with_counts,
            first_count_mismatch=report.count_mismatches[0] if report.count_mismatches else None,
        ))
    return records


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(
        description="Exact bases of M_4(Gamma_0(24), chi) and representation numbers of octonary quadratic forms.",
        formatter_class=argparse.RawTextHelpFormatter,
    )
    parser.add_argument("--config", type=str, default=None, help="Alternative config.yaml.")
    parser.add_argument("--log-level", type=str, default=None, help="DEBUG, INFO, WARNING or ERROR.")
    parser.add_argument("--log-file", type=str, default=None, help="Also write log records to this file.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliArgumentParser)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--prec", type=_positive_int, default=None,
                       help="Number of q-coefficients (default from config).")
        p.add_argument("--format", choices=["table", "records"], default="table", help="Output format.")

    p = sub.add_parser("expand", help="Print the q-expansion of a named series.")
    p.add_argument("--series", type=str, required=True, help="theta, F, E4, a catalog form, or '1^2 2^2 3^2 6^2'.")
    common(p)

    p = sub.add_parser("count", help="Brute-force representation numbers.")
    p.add_argument("--form", type=str, required=True, help="A:a1,a2,a3,a4,b1,b2 or B:c1,c2,c3.")
    p.add_argument("--n", type=int, default=None, help="Single n.")
    p.add_argument("--nmax", type=_positive_int, default=None, help="All n from 0 to nmax.")
    common(p)

    p = sub.add_parser("solve", help="Coefficient vector of a theta product in its basis.")
    p.add_argument("--form", type=str, required=True)
    common(p)

    p = sub.add_parser("verify", help="Compare solved formulas with brute-force counts.")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--form", type=str)
    target.add_argument("--all", action="store_true", help="All 109 forms.")
    p.add_argument("--nmax", type=_positive_int, default=None)
    p.add_argument("--workers", type=_positive_int, default=None)
    common(p)

    p = sub.add_parser("tables", help="Audit the printed coefficient tables.")
    p.add_argument("--table", type=_table_key, default=None,
                   help="Table key or printed number (3-7); all tables when omitted.")
    p.add_argument("--nmax", type=_positive_int, default=None)
    common(p)

    p = sub.add_parser("samples", help="Check the printed closed formulas.")
    p.add_argument("--nmax", type=_positive_int, default=100)
    common(p)
    return parser


def run(args: argparse.Namespace) -> int:
    config = load_config()
    prec = default_precision() if args.prec is None else args.prec
    n_max = getattr(args, "nmax", None)
    if args.command == "expand":
        emit(cmd_expand(args.series, prec), args.format)
    elif args.command == "count":
        emit(cmd_count(args.form, args.n, n_max), args.format)
    elif args.command == "solve":
        emit(cmd_solve(args.form, prec), args.format)
    elif args.command == "verify":
        labels = [f.label for f in enumerate_forms()] if args.all else [args.form]
        n_max = config["verification"]["n_max"] if n_max is None else n_max
        workers = args.workers or int(config["verification"]["workers"])
        records, ok = cmd_verify(labels, n_max, max(prec, n_max + 1), workers, args.config)
        emit(records, args.format)
        if not ok:
            return EXIT_VERIFICATION
    elif args.command == "tables":
        keys = [args.table] if args.table else list(TABLE_KEYS)
        n_max = config["verification"]["n_max"] if n_max is None else n_max
        records, ok = cmd_tables(keys, prec, n_max)
        emit(records, args.format)
        if not ok:
            return EXIT_VERIFICATION
    elif args.command == "samples":
        emit(cmd_samples(n_max, max(prec, n_max + 1)), args.format)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        set_config_path(args.config)
        config = load_config()
        setup_logging(args.log_level or config["logging"]["level"], args.log_file)
        return run(args)
    except (ArithmeticError, RemediationFailed) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, KeyError, FileNotFoundError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"Error: {message}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
