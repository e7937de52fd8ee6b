import argparse
import json
import logging
import time
from collections import defaultdict
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd
from tqdm import tqdm

# Add src to path for imports
import sys
sys.path.append(str(Path(__file__).parent.parent))

from src.eta_search import remediate_basis
from src.refdata import TABLE_KEYS, load_sample_formulas
from src.solver import check_sample_formula, default_precision, diff_tables, explain_errata
from src.utils import (calculate_sha256, ensure_dir_exists, format_fraction, load_config, resolve_data_path,
                       setup_logging)


def collect_errata(prec: int, n_max: int) -> List[Dict[str, Any]]:
    """
    Run the table comparison for every space and keep the mismatching cells.

    Args:
        prec: Precision of the solves
        n_max: Range of the brute-force comparison

    Returns:
        List[Dict[str, Any]]: One erratum per mismatching cell
    """
    errata = []
    for key in tqdm(TABLE_KEYS, desc="Auditing tables", file=sys.stderr):
        for diff in diff_tables(prec, [key], n_max):
            if diff.verdict == "match":
                continue
            errata.append({
                "table": diff.table,
                "row": diff.row_label,
                "form": diff.form.label,
                "column": diff.column,
                "printed": format_fraction(diff.printed_value),
                "computed": format_fraction(diff.computed_value),
                "printed_reproduces_counts": diff.printed_reproduces_counts,
                "computed_reproduces_counts": diff.computed_reproduces_counts,
                "first_failing_n": diff.first_failing_n,
            })
    return errata


def summarize(errata: List[Dict[str, Any]]) -> Dict[str, Any]:
    """Per-table counts of mismatching rows and cells."""
    if not errata:
        return {}
    frame = pd.DataFrame.from_records(errata)
    summary = {}
    for table, group in frame.groupby("table"):
        summary[table] = {
            "mismatching_cells": int(len(group)),
            "mismatching_rows": int(group["row"].nunique()),
            "rows_failing_brute_force": int(group.loc[~group["printed_reproduces_counts"], "row"].nunique()),
        }
    return summary


def audit(output_dir: str, prec: int, n_max: int, sample_n_max: int) -> None:
    logger = logging.getLogger(__name__)
    output_path = ensure_dir_exists(output_dir)
    run_timestamp = time.strftime("%Y%m%d_%H%M%S")
    config = load_config()

    run_params = {"precision": prec, "n_max": n_max, "sample_n_max": sample_n_max, "run_timestamp": run_timestamp}
    logger.info(f"Starting table audit with parameters: {json.dumps(run_params, indent=2)}")

    manifest: Dict[str, Any] = {"run_parameters": run_params, "inputs": [], "outputs": []}
    for key in ("catalog_path", "reference_tables_path"):
        path = resolve_data_path(config["data"][key])
        manifest["inputs"].append({"path": str(path), "sha256": calculate_sha256(path)})

    remediations = []
    for space in ("trivial", "chi8", "chi12", "chi24"):
        _, remediation = remediate_basis(space, prec)
        if remediation is not None:
            remediations.append({
                "space": remediation.space,
                "column": remediation.column,
                "replaced": remediation.replaced,
                "replaced_spec": str(remediation.replaced_spec),
                "substitute": str(remediation.substitute),
                "rank_before": remediation.rank_before,
                "rank_after": remediation.rank_after,
            })

    errata = collect_errata(prec, n_max)
    explanations = {}
    for key in sorted({e["table"] for e in errata if not e["printed_reproduces_counts"]}):
        explanation = explain_errata(key, n_max)
        explanations[key] = None if explanation is None else {
            "form": explanation.form_name,
            "printed_spec": str(explanation.printed_spec),
            "substitute": str(explanation.substitute),
            "rows_explained": explanation.rows_explained,
            "kind": explanation.kind,
            "position": explanation.position,
        }

    samples = []
    for formula in tqdm(load_sample_formulas(), desc="Checking sample formulas", file=sys.stderr):
        report = check_sample_formula(formula, sample_n_max, prec)
        samples.append({
            "form": formula.form.label,
            "space": formula.space,
            "agrees_with_pipeline": report.agrees_with_pipeline,
            "agrees_with_counts": report.agrees_with_counts,
            "first_count_mismatch": report.count_mismatches[0] if report.count_mismatches else None,
        })

    errata_file = output_path / "errata.json"
    with open(errata_file, 'w') as f:
        json.dump({"remediations": remediations, "errata": errata, "explanations": explanations}, f, indent=2)
    logger.info(f"Saved {len(errata)} errata to {errata_file}")

    stats_file = output_path / "audit_stats.json"
    sample_counts = defaultdict(int)
    for sample in samples:
        sample_counts["agree_with_counts" if sample["agrees_with_counts"] else "disagree_with_counts"] += 1
    stats = {
        "tables": summarize(errata),
        "sample_formulas": samples,
        "sample_summary": dict(sample_counts),
        "remediated_spaces": [r["space"] for r in remediations],
    }
    with open(stats_file, 'w') as f:
        json.dump(stats, f, indent=2)
    logger.info(f"Statistics saved to {stats_file}")

    for path in (errata_file, stats_file):
        manifest["outputs"].append({"path": str(path), "sha256": calculate_sha256(path)})
    manifest_path = output_path / "_manifest.json"
    with open(manifest_path, 'w') as f:
        json.dump(manifest, f, indent=4)
    logger.info(f"Run manifest saved to {manifest_path}")


def main():
    """Main function"""
    parser = argparse.ArgumentParser(description="Audit the printed coefficient tables against exact solves")
    parser.add_argument("--output_dir", type=str, required=True,
                        help="Directory to save errata, statistics and the manifest")
    parser.add_argument("--prec", type=int, default=None,
                        help="Precision of the solves (default from config)")
    parser.add_argument("--n_max", type=int, default=None,
                        help="Brute-force comparison range (default from config)")
    parser.add_argument("--sample_n_max", type=int, default=100,
                        help="Range for the sample formula checks")

    args = parser.parse_args()

    output_path = ensure_dir_exists(args.output_dir)
    config = load_config()
    setup_logging(config["logging"]["level"], output_path / "_log.txt")

    n_max = args.n_max if args.n_max is not None else config["verification"]["n_max"]
    audit(args.output_dir, args.prec or default_precision(), n_max, args.sample_n_max)


if __name__ == "__main__":
    main()
