"""Deterministic machine-readable reports for verification runs."""

import json


def make_report(scenario, checks, artifacts=None):
    """checks: iterable of (tag, verdict) or (tag, verdict, witness)."""
    out = []
    for item in checks:
        if len(item) == 2:
            tag, verdict = item
            witness = None
        else:
            tag, verdict, witness = item
        entry = {"tag": str(tag), "verdict": bool(verdict)}
        if witness is not None:
            entry["witness"] = str(witness)
        out.append(entry)
    return {"scenario": scenario,
            "checks": out,
            "artifacts": artifacts or {}}


def all_passed(report):
    return all(c["verdict"] for c in report["checks"])


def render(report):
    return json.dumps(report, indent=2, sort_keys=True)
