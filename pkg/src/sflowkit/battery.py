"""Fixture battery: run shipped problems and diff the reports against expectations.

Each fixture directory holds problem.json (a config) and expected.json:

    {"command": "report",
     "checks": [{"field": "spectral_flow.galerkin", "equals": -2,
                 "provenance": "DERIVED", "oracle": "..."},
                {"field": "crossings[*].lambda0", "equals": [0.2, 0.8], "tol": 1e-6, ...},
                {"field": "spectral_flow.galerkin", "equals_field": "spectral_flow.crossings", ...}]}

Besides the listed checks every fixture is also checked for cross-method
agreement, the Gamma lower bound, and (with crossings from shooting)
invariance of the crossing-form signature under random kernel-basis changes.
"""
from __future__ import annotations

import json
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import ode
from .report import build_report

PROVENANCE = ("DERIVED", "PAPER", "TRIVIAL")
_MISSING = object()


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class FixtureResult:
    name: str
    checks: list = field(default_factory=list)
    elapsed: float = 0.0
    report: dict | None = field(default=None, repr=False)

    @property
    def passed(self):
        return bool(self.checks) and all(c.passed for c in self.checks)

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def fixtures_root(fixtures_dir=None):
    if fixtures_dir:
        return Path(fixtures_dir)
    return Path(str(resources.files("sflowkit").joinpath("fixtures")))


def list_fixtures(name_filter=None, fixtures_dir=None):
    root = fixtures_root(fixtures_dir)
    names = sorted(p.name for p in root.iterdir() if (p / "problem.json").exists())
    if name_filter:
        names = [n for n in names if name_filter in n]
    return names


def load_fixture(name, fixtures_dir=None):
    d = fixtures_root(fixtures_dir) / name
    problem = json.loads((d / "problem.json").read_text())
    expected = json.loads((d / "expected.json").read_text())
    for chk in expected.get("checks", []):
        if chk.get("provenance") not in PROVENANCE:
            raise ValueError(f"{name}: check on {chk.get('field')} lacks a provenance tag")
        if chk["provenance"] == "DERIVED" and not chk.get("oracle"):
            raise ValueError(f"{name}: DERIVED check on {chk['field']} names no oracle")
    return problem, expected


_TOKEN = re.compile(r"([^.\[\]]+)|\[(\*|\d+)\]")


def get_field(doc, path):
    """Resolve 'a.b[0].c' or 'a[*].c' (mapping over a list)."""
    parts = [m.group(1) if m.group(1) is not None else ("*" if m.group(2) == "*" else int(m.group(2)))
             for m in _TOKEN.finditer(path)]
    return _walk(doc, parts)


def _walk(node, parts):
    if not parts:
        return node
    head, rest = parts[0], parts[1:]
    if head == "*":
        if not isinstance(node, list):
            return _MISSING
        return [_walk(item, rest) for item in node]
    if isinstance(head, int):
        if not isinstance(node, list) or head >= len(node):
            return _MISSING
        return _walk(node[head], rest)
    if not isinstance(node, dict) or head not in node:
        return _MISSING
    return _walk(node[head], rest)


def _close(got, want, tol):
    if isinstance(want, list):
        return isinstance(got, list) and len(got) == len(want) and all(_close(g, w, tol) for g, w in zip(got, want))
    if isinstance(want, bool) or want is None or isinstance(want, str):
        return got == want
    if isinstance(want, (int, float)):
        if not isinstance(got, (int, float)) or isinstance(got, bool):
            return False
        return got == want if tol is None else abs(got - want) <= tol
    if isinstance(want, dict):
        return isinstance(got, dict) and all(_close(got.get(k, _MISSING), v, tol) for k, v in want.items())
    return got == want


def run_check(report, chk):
    fld = chk["field"]
    got = get_field(report, fld)
    tol = chk.get("tol")
    if "equals_field" in chk:
        other = get_field(report, chk["equals_field"])
        ok = got is not _MISSING and other is not _MISSING and got is not None and _close(got, other, tol)
        return CheckResult(f"{fld} == {chk['equals_field']}", ok, f"{got!r} vs {other!r}")
    want = chk["equals"]
    ok = got is not _MISSING and _close(got, want, tol)
    shown = "<missing>" if got is _MISSING else repr(got)
    return CheckResult(f"{fld}", ok, f"got {shown}, want {want!r}" + (f" (tol {tol:g})" if tol else ""))


def _implicit_checks(report, cfg, seed):
    out = []
    sf = report.get("spectral_flow")
    if sf is not None:
        out.append(CheckResult("spectral_flow.agree", bool(sf["agree"]), repr(sf)))
    cb = report.get("count_bound")
    recs = report.get("crossings")
    if cb is not None and recs is not None:
        jumps = len({round(r["lambda0"], 9) for r in recs if r["local_sflow"] != 0})
        out.append(CheckResult("gamma_bound", jumps >= cb["min_bifurcations"],
                               f"{jumps} jump points vs ceil(Gamma/2) = {cb['min_bifurcations']}"))
    if recs and report.get("crossing_method") == "shooting":
        out.append(_form_invariance(cfg, recs, seed))
    return out


def _form_invariance(cfg, recs, seed, trials=20):
    rng = np.random.default_rng(seed)
    bad = []
    for r in recs:
        dim, basis = ode.kernel(cfg.path, r["lambda0"], numerics=cfg.numerics, length=cfg.domain.length)
        if dim == 0:
            continue
        ref, _ = ode.local_sflow(ode.crossing_form(cfg.path, r["lambda0"], basis))
        for _ in range(trials):
            P = rng.standard_normal((dim, dim))
            if abs(np.linalg.det(P)) < 1e-3:
                continue
            sig, _ = ode.local_sflow(ode.crossing_form(cfg.path, r["lambda0"], basis.transformed(P)))
            if sig != ref:
                bad.append(r["lambda0"])
                break
    return CheckResult("form_signature_invariance", not bad, f"mismatch at {bad}" if bad else "")


def run_fixture(name, seed=0, fixtures_dir=None):
    t0 = time.perf_counter()
    problem, expected = load_fixture(name, fixtures_dir)
    res = FixtureResult(name)
    try:
        cfg = cfgmod.from_dict(problem)
        rep = build_report(cfg, expected.get("command", "report"))
    except Exception as err:  # a fixture must report, not crash the battery
        res.checks.append(CheckResult("run", False, f"{type(err).__name__}: {err}"))
        res.elapsed = time.perf_counter() - t0
        return res
    res.report = rep
    res.checks.extend(run_check(rep, chk) for chk in expected.get("checks", []))
    res.checks.extend(_implicit_checks(rep, cfg, seed))
    res.elapsed = time.perf_counter() - t0
    return res


def _threads():
    try:
        return max(1, int(os.environ.get("SFLOWKIT_THREADS", "1")))
    except ValueError:
        return 1


def run_battery(name_filter=None, seed=0, fixtures_dir=None):
    names = list_fixtures(name_filter, fixtures_dir)
    threads = _threads()
    if threads == 1:
        return [run_fixture(n, seed, fixtures_dir) for n in names]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda n: run_fixture(n, seed, fixtures_dir), names))


def format_table(results):
    lines = []
    width = max((len(r.name) for r in results), default=4)
    for r in results:
        lines.append(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.elapsed:7.2f}s")
        for c in r.checks:
            if not c.passed:
                lines.append(f"    {c.name}: {c.detail}")
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} fixtures passed")
    return "\n".join(lines) + "\n"
