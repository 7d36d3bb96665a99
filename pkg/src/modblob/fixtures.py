"""
Named reference diagrams.

Each fixture ships as JSON (diagram plus expected invariant report) in the
``fixture_data`` directory of the package; ``MODBLOB_FIXTURE_DIR`` points the
loader somewhere else.  ``kidney+N`` / ``kidney-N`` are generated on demand.
"""

from __future__ import annotations

import json
import os
import re
from pathlib import Path

from .diagram import B, BlobDiagram, D, StrandDiagram, X, from_json, negate, to_json
from .invariants import invariant_report
from .rewriting import kidney

_KIDNEY = re.compile(r"^kidney([+-]\d+)$")


def _alpha1():
    return BlobDiagram.strip([B(0), B(0), X(1), X(0), D(1), D(0)])


def _alpha3():
    return BlobDiagram.strip([B(0), B(0), X(1), X(2), D(1), D(0)])


BUILDERS = {
    "disk": lambda: BlobDiagram.strip([B(0), D(0)]),
    "annulus": lambda: BlobDiagram.strip([B(0), B(1, False), D(1), D(0)]),
    "kidney+1": lambda: kidney(1),
    "kidney-1": lambda: kidney(-1),
    # two overlapping disks
    "alpha1": _alpha1,
    "alpha2": lambda: negate(_alpha1()),
    "alpha3": _alpha3,
    "alpha4": lambda: negate(_alpha3()),
    # immersed punctured torus: one boundary circle, turning number -1
    "torus": lambda: BlobDiagram.strip([B(0), B(1, False), B(1, False), X(1), X(0), X(2), X(1),
                                        D(1), D(1), D(0)]),
    "beta+": lambda: StrandDiagram.strip([B(0, True), X(0), D(0)]),
    "beta-": lambda: StrandDiagram.strip([B(0, False), X(0), D(0)]),
    "beta~": lambda: StrandDiagram.strip([B(0, True), B(1, True), X(0), D(1), D(0)]),
    "beta-bar": lambda: StrandDiagram.strip([B(0, False), B(1, False), X(0), D(1), D(0)]),
    "figure8": lambda: StrandDiagram.strip([B(0, True), X(0), D(0)]),
}

ALIASES = {"beta_plus": "beta+", "beta_minus": "beta-", "beta_tilde": "beta~",
           "beta_bar": "beta-bar", "figure-inf": "figure8", "kidney1": "kidney+1"}


def fixture_names() -> list[str]:
    return sorted(BUILDERS)


def fixture_dir() -> Path:
    env = os.environ.get("MODBLOB_FIXTURE_DIR")
    return Path(env) if env else Path(__file__).with_name("fixture_data")


def _file_name(name: str) -> str:
    return name.replace("+", "_plus").replace("~", "_tilde") + ".json"


def build(name: str):
    name = ALIASES.get(name, name)
    if name in BUILDERS:
        return BUILDERS[name]()
    m = _KIDNEY.match(name)
    if m and int(m.group(1)) != 0:
        return kidney(int(m.group(1)))
    raise KeyError(f"unknown fixture {name!r}")


def load(name: str):
    """The stored fixture if a file exists, otherwise the built one."""
    name = ALIASES.get(name, name)
    path = fixture_dir() / _file_name(name)
    if path.exists():
        return from_json(json.loads(path.read_text())["diagram"])
    return build(name)


def expected_report(name: str) -> dict | None:
    path = fixture_dir() / _file_name(ALIASES.get(name, name))
    if not path.exists():
        return None
    return json.loads(path.read_text())["report"]


def write_all(directory: Path | None = None) -> list[Path]:
    directory = Path(directory) if directory else fixture_dir()
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name in fixture_names():
        x = build(name)
        doc = {"name": name, "diagram": to_json(x), "report": invariant_report(x).to_json()}
        path = directory / _file_name(name)
        path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        out.append(path)
    return out


def selftest() -> list[tuple[str, bool, str]]:
    """Re-derive every fixture and compare with the stored copy."""
    results = []
    for name in fixture_names():
        path = fixture_dir() / _file_name(name)
        if not path.exists():
            results.append((name, False, "missing fixture file"))
            continue
        doc = json.loads(path.read_text())
        built = build(name)
        stored = from_json(doc["diagram"])
        if to_json(stored) != to_json(built):
            results.append((name, False, "stored diagram differs from builder"))
            continue
        got = invariant_report(stored).to_json()
        if got != doc["report"]:
            results.append((name, False, f"report mismatch: {got} != {doc['report']}"))
            continue
        results.append((name, True, "ok"))
    return results
