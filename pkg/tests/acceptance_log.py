"""Shared registry so the acceptance suite can print one line per criterion."""
from __future__ import annotations

RESULTS: dict[int, dict] = {}


def record(num: int, label: str, ok: bool, detail: str = "") -> None:
    entry = RESULTS.setdefault(num, {"label": label, "ok": True, "details": []})
    entry["ok"] = entry["ok"] and ok
    if detail and not ok:
        entry["details"].append(detail)


def summary_lines() -> list[str]:
    lines = []
    for num in sorted(RESULTS):
        entry = RESULTS[num]
        verdict = "PASS" if entry["ok"] else "FAIL"
        lines.append(f"criterion {num:2d} [{verdict}] {entry['label']}")
        for detail in entry["details"]:
            lines.append(f"              {detail}")
    return lines
