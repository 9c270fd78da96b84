"""
Tabular and JSON output for correlation reports.
"""
import os
from typing import Any, Dict, List, Optional

from womac.constants import OPTIMAL_K_CSV, REPORT_CSV, REPORT_JSON
from womac.experiments.harness import CORRELATIONS, SCORE_KINDS, CorrelationReport
from womac.utils.output import write_csv, write_json

SUMMARY_COLUMNS = ["label", "m_train", "correlation", "score", "mean", "sd", "se", "n_valid", "n_missing"]
OPTIMAL_K_COLUMNS = ["label", "m_train", "median", "q25", "q75", "q05", "q95"]


def summary_rows(report: CorrelationReport, label: str = "") -> List[Dict[str, Any]]:
    """One row per m_train x correlation kind x score kind."""
    rows = []
    for result in report.results:
        for correlation in CORRELATIONS:
            for score in SCORE_KINDS:
                stats = result.stats(correlation, score)
                rows.append({"label": label, "m_train": result.m_train, "correlation": correlation,
                             "score": score, **stats.to_dict()})
    return rows


def optimal_k_rows(report: CorrelationReport, label: str = "") -> List[Dict[str, Any]]:
    return [
        {"label": label, "m_train": r.m_train, **r.optimal_k_distribution()}
        for r in report.results
    ]


def write_reports(
    reports: Dict[str, CorrelationReport], out_dir: str, extra: Optional[Dict[str, Any]] = None
) -> List[str]:
    """
    Write every labelled report into one JSON document and two CSV tables.

    Returns:
        Paths written
    """
    rows: List[Dict[str, Any]] = []
    k_rows: List[Dict[str, Any]] = []
    for label, report in reports.items():
        rows.extend(summary_rows(report, label))
        k_rows.extend(optimal_k_rows(report, label))

    payload: Dict[str, Any] = dict(extra or {})
    payload["reports"] = {label: report.to_dict() for label, report in reports.items()}

    paths = [
        os.path.join(out_dir, REPORT_JSON),
        os.path.join(out_dir, REPORT_CSV),
        os.path.join(out_dir, OPTIMAL_K_CSV),
    ]
    write_json(paths[0], payload)
    write_csv(paths[1], rows, SUMMARY_COLUMNS)
    write_csv(paths[2], k_rows, OPTIMAL_K_COLUMNS)
    return paths
