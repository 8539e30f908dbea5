"""``symrh`` command line: coeffs | lvalues | polys | verify-rh | verify-lemmas | report."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

from ..formsrc.newform import atomic_write_text
from .config import ConfigError, ExperimentConfig
from .runner import COMMANDS, load_config_doc, run_instance, toolchain

log = logging.getLogger("symrh")

REPORT_SCHEMA = "symrh.report/1"
STATUSES = ("ok", "skipped", "failed")
EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 2, 3

CSV_COLUMNS = [
    "command", "instance", "status", "label", "m", "k", "N", "epsilon", "polynomial", "degree",
    "circle_verdict", "sign_changes", "max_circle_deviation", "disk_verdict", "disk_method",
]
ROOT_COLUMNS = ["command", "instance", "polynomial", "index", "re", "im", "modulus"]


class ReportSchemaError(ValueError):
    pass


def validate_report(doc: dict) -> dict:
    """Check a report against the documented layout; returns it unchanged."""
    for key in ("schema", "command", "toolchain", "config", "instances", "summary"):
        if key not in doc:
            raise ReportSchemaError(f"missing key {key!r}")
    if doc["schema"] != REPORT_SCHEMA:
        raise ReportSchemaError(f"unknown schema {doc['schema']!r}")
    if doc["command"] not in COMMANDS:
        raise ReportSchemaError(f"unknown command {doc['command']!r}")
    seen = set()
    for rec in doc["instances"]:
        for key in ("id", "kind", "status", "params"):
            if key not in rec:
                raise ReportSchemaError(f"instance record without {key!r}")
        if rec["id"] in seen:
            raise ReportSchemaError(f"instance {rec['id']} appears twice")
        seen.add(rec["id"])
        if rec["status"] not in STATUSES:
            raise ReportSchemaError(f"bad status {rec['status']!r}")
        if rec["status"] == "skipped" and "reason" not in rec:
            raise ReportSchemaError(f"{rec['id']}: skipped without reason")
        if rec["status"] == "failed" and "diagnostic" not in rec:
            raise ReportSchemaError(f"{rec['id']}: failed without diagnostic")
        for name, cert in rec.get("certificates", {}).items():
            if len(cert["roots"]) not in (0, cert["degree"]):
                raise ReportSchemaError(f"{rec['id']}/{name}: root count differs from degree")
    counts = {s: sum(1 for r in doc["instances"] if r["status"] == s) for s in STATUSES}
    if counts != doc["summary"]:
        raise ReportSchemaError("summary counts do not match the records")
    return doc


def run_grid(command: str, cfg: ExperimentConfig, jobs: int = 1) -> tuple[dict, list]:
    insts = cfg.instances()
    doc = load_config_doc(cfg)
    if jobs > 1 and len(insts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_instance, [command] * len(insts), [doc] * len(insts), insts))
    else:
        results = [run_instance(command, doc, inst) for inst in insts]
    records = [r for r, _ in results]
    timings = [t for _, t in results]
    report = {
        "schema": REPORT_SCHEMA,
        "command": command,
        "toolchain": toolchain(),
        "config": cfg.echo(),
        "instances": records,
        "summary": {s: sum(1 for r in records if r["status"] == s) for s in STATUSES},
    }
    return validate_report(report), timings


def write_report(cfg: ExperimentConfig, report: dict, timings: list) -> Path:
    out = cfg.out_path
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"report_{report['command']}.json"
    atomic_write_text(path, json.dumps(report, indent=1, sort_keys=True))
    atomic_write_text(out / f"timings_{report['command']}.json", json.dumps(timings, indent=1, sort_keys=True))
    return path


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def report_rows(report: dict) -> tuple[list, list]:
    """One table row per (instance, polynomial certificate); one scatter row per root."""
    rows, roots = [], []
    for rec in report["instances"]:
        p = rec.get("params", {})
        base = {
            "command": report["command"], "instance": rec["id"], "status": rec["status"],
            "label": p.get("label", ""), "m": p.get("m", ""), "k": p.get("k", ""), "N": p.get("N", ""),
            "epsilon": rec.get("epsilon", ""),
        }
        certs = rec.get("certificates") or {}
        if not certs:
            rows.append({**base, "polynomial": "", "degree": ""})
            continue
        for name, cert in certs.items():
            v = cert.get("verdicts", {})
            rows.append({
                **base, "polynomial": name, "degree": cert["degree"],
                "circle_verdict": v.get("circle") or "", "sign_changes": cert.get("sign_changes") if cert.get("sign_changes") is not None else "",
                "max_circle_deviation": cert.get("max_circle_deviation") or "",
                "disk_verdict": v.get("disk") or "", "disk_method": v.get("disk_method") or "",
            })
            for i, (re_, im_) in enumerate(cert.get("roots", [])):
                mod = (float(re_) ** 2 + float(im_) ** 2) ** 0.5
                roots.append({"command": report["command"], "instance": rec["id"], "polynomial": name,
                              "index": i, "re": re_, "im": im_, "modulus": repr(mod)})
    return rows, roots


def cmd_report(cfg: ExperimentConfig, reports: Optional[list] = None) -> list[Path]:
    """JSON bundle, CSV table and root-scatter CSV from the per-command reports in the output directory."""
    out = cfg.out_path
    if reports is None:
        files = sorted(out.glob("report_*.json"))
        if not files:
            raise FileNotFoundError(f"no report_*.json in {out}")
        reports = [validate_report(json.loads(f.read_text())) for f in files]
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in cfg.formats:
        path = out / "report.json"
        atomic_write_text(path, json.dumps({"schema": "symrh.report-bundle/1", "reports": reports}, indent=1, sort_keys=True))
        written.append(path)
    if "csv" in cfg.formats:
        rows, roots = [], []
        for rep in reports:
            r, z = report_rows(rep)
            rows += r
            roots += z
        for name, cols, data in (("report.csv", CSV_COLUMNS, rows), ("roots.csv", ROOT_COLUMNS, roots)):
            path = out / name
            atomic_write_text(path, _csv_text(cols, data))
            written.append(path)
    return written


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symrh", description=__doc__)
    ap.add_argument("command", choices=COMMANDS + ("report",))
    ap.add_argument("--config", required=True, help="experiment config (JSON)")
    ap.add_argument("--precision", type=int, help="override precision bits")
    ap.add_argument("--out", help="override output directory")
    ap.add_argument("--cache", help="override cache directory")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = ExperimentConfig.load(args.config)
        if args.precision is not None:
            cfg.precision = args.precision
        if args.out is not None:
            cfg.out_dir = str(Path(args.out).resolve())
        if args.cache is not None:
            cfg.cache_dir = str(Path(args.cache).resolve())
        cfg.validate()
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
    except ConfigError as exc:
        print(f"symrh: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "report":
        try:
            paths = cmd_report(cfg)
        except (OSError, ReportSchemaError, json.JSONDecodeError) as exc:
            print(f"symrh: report failed: {exc}", file=sys.stderr)
            return EXIT_FAILED
        for p in paths:
            print(p)
        return EXIT_OK

    report, timings = run_grid(args.command, cfg, args.jobs)
    path = write_report(cfg, report, timings)
    for rec in report["instances"]:
        extra = rec.get("reason") or rec.get("diagnostic") or ""
        print(f"{rec['id']:<28} {rec['status']:<8} {extra}")
    s = report["summary"]
    print(f"{s['ok']} ok, {s['skipped']} skipped, {s['failed']} failed -> {path}")
    return EXIT_FAILED if s["failed"] else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
