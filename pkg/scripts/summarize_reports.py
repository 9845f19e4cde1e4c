"""
Summarize every benchmark report in a directory as one table.
"""

import sys
from pathlib import Path
from datetime import datetime

import pandas as pd

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.core import BenchmarkError
from src.core.experiment import load_report


def report_rows(path: Path):
    """One row per benchmark, plus the spread of per-trial minima."""
    report = load_report(path)
    for record in report["benchmarks"]:
        est = record["estimates"]
        trial_mins = [t["min_ns"] for t in record["trials"]]
        yield {
            "report": path.name,
            "kind": report["kind"],
            "benchmark": record["id"],
            "n": est["n_execs"],
            "measurements": est["sample_count"],
            "min_ns": est["min_ns"],
            "median_ns": est["median_ns"],
            "mean_ns": est["mean_ns"],
            "trial_min_spread_ns": max(trial_mins) - min(trial_mins),
        }


def summarize_reports(directory: str = "reports"):
    """Print the summary table for all *.json reports under `directory`."""
    
    print("\n" + "="*60)
    print("BENCHMARK REPORT SUMMARY")
    print("="*60)
    print(f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    print("="*60)
    
    reports_dir = Path(directory)
    if not reports_dir.exists():
        print(f"\n❌ Error: {directory}/ directory not found")
        return None
    
    rows = []
    for path in sorted(reports_dir.glob("*.json")):
        try:
            rows.extend(report_rows(path))
        except (BenchmarkError, ValueError, KeyError) as e:
            print(f"⚠️  Skipping {path.name}: {e}")
    
    if not rows:
        print(f"\n❌ Error: No reports found in {directory}/")
        return None
    
    frame = pd.DataFrame(rows)
    with pd.option_context("display.width", 160, "display.max_columns", None):
        print(frame.to_string(index=False, float_format=lambda v: f"{v:.1f}"))
    print(f"\n{len(frame)} benchmarks across {frame['report'].nunique()} reports")
    print("="*60 + "\n")
    return frame


if __name__ == "__main__":
    summarize_reports(sys.argv[1] if len(sys.argv) > 1 else "reports")
