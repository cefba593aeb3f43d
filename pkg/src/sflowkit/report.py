"""Run the engines on a configured problem and assemble a JSON-ready report."""
from __future__ import annotations

import csv
import os
import time

import numpy as np

from . import comparison, galerkin, index, ode, probe
from .config import validate
from .errors import InvalidEndpoint, IrregularCrossing, SflowError

SECTIONS = {
    "index": ("bounds", "index"),
    "sflow": ("sflow",),
    "crossings": ("crossings",),
    "certify": ("bounds", "certificate", "count_bound"),
    "probe": ("crossings", "probe"),
    "report": ("bounds", "index", "sflow", "crossings", "certificate", "count_bound", "probe"),
}


def _halfint(h):
    return {"doubled": h.doubled, "value": float(h), "text": str(h)}


class _Run:
    def __init__(self, cfg, plots_dir=None, grid=None):
        self.cfg = cfg
        self.path = cfg.path
        self.domain = cfg.domain
        self.num = cfg.numerics
        self.plots_dir = plots_dir
        self.grid = grid
        self.report = {"errors": {}, "timing": {}}
        self._records = None

    @property
    def constant(self):
        return not self.path.x_dependent

    def timed(self, name, fn):
        t0 = time.perf_counter()
        try:
            return fn()
        except SflowError as err:
            self.report["errors"][name] = f"{type(err).__name__}: {err}"
            return None
        finally:
            self.report["timing"][name] = round(time.perf_counter() - t0, 6)

    # sections

    def bounds(self):
        self.report["endpoint_bounds"] = self.timed(
            "bounds", lambda: comparison.endpoint_bounds(self.path, self.domain, self.num))

    def index(self):
        if not self.constant:
            self.report["index"] = None
            return
        spec = self.domain.spectrum()
        lo, hi = self.path.lambda_range

        def run():
            return {"i_A0": _halfint(index.index(self.path, lo, spec)),
                    "i_A1": _halfint(index.index(self.path, hi, spec))}
        self.report["index"] = self.timed("index", run)

    def records(self):
        if self._records is None:
            if self.domain.is_interval:
                self.report["crossing_method"] = "shooting"
                self._records = self.timed(
                    "crossings", lambda: ode.crossing_records(self.path, self.num, length=self.domain.length))
            else:
                self.report["crossing_method"] = "block_scan"
                self._records = self.timed("crossings", self._block_records)
        return self._records

    def _block_records(self):
        self.path.require_constant()
        return index.enumerate_crossings_constant(self.path, self.domain.spectrum(), tol=self.num.lambda_tol)

    def crossings(self):
        recs = self.records()
        self.report["crossings"] = [] if recs is None else [r.to_dict() for r in recs]
        if recs and self.plots_dir and self.report.get("crossing_method") == "shooting":
            for i, r in enumerate(recs, start=1):
                r.basis.to_csv(os.path.join(self.plots_dir, f"kernel_{i}.csv"))

    def _sflow_crossings(self):
        recs = self.records()
        if recs is None:
            raise SflowError("crossing search failed")
        if self.report.get("crossing_method") == "shooting":
            return ode.total_sflow_crossings(self.path, self.num, self.domain.length, records=recs)
        lo, hi = self.path.lambda_range
        spec = self.domain.spectrum()
        for lam in (lo, hi):
            if index.singular_blocks(self.path, lam, spec):
                raise InvalidEndpoint(f"singular block at endpoint lambda = {lam}")
        bad = [r.lambda0 for r in recs if not r.regular]
        if bad:
            raise IrregularCrossing(bad)
        return int(sum(r.local_sflow for r in recs))

    def sflow(self):
        out = {"index_formula": None, "galerkin": None, "crossings": None}
        if self.constant:
            out["index_formula"] = self.timed(
                "index_formula", lambda: index.spectral_flow_constant(self.path, self.domain.spectrum()))
        gres = self.timed("galerkin", lambda: galerkin.sflow_galerkin(self.path, self.domain, self.num.galerkin()))
        if gres is not None:
            out["galerkin"] = gres.value
            self.report["galerkin"] = gres.to_dict()
        out["crossings"] = self.timed("crossings_sflow", self._sflow_crossings)
        vals = [v for v in out.values() if v is not None]
        out["agree"] = bool(vals) and all(v == vals[0] for v in vals)
        self.report["spectral_flow"] = out
        if self.plots_dir and gres is not None:
            self.timed("eigen_track", lambda: self._eigen_csv(gres.n_used))

    def _eigen_csv(self, n):
        lo, hi = self.path.lambda_range
        lams = np.linspace(lo, hi, self.grid or 101)
        n = min(n, self.num.n_start)
        lams, evs = galerkin.eigen_track(self.path, self.domain, n, lams, self.num.galerkin())
        galerkin.write_eigen_csv(os.path.join(self.plots_dir, "eigen_track.csv"), lams, evs)

    def certificate(self):
        cert = self.timed("certificate", lambda: comparison.certify_bifurcation(self.path, self.domain, self.num))
        self.report["certificate"] = None if cert is None else cert.to_dict()

    def count_bound(self):
        cb = self.timed("count_bound", lambda: comparison.min_bifurcation_count(self.path, self.domain, self.num))
        self.report["count_bound"] = None if cb is None else cb.to_dict()

    def probe(self):
        if not self.cfg.G:
            self.report["probe"] = {"skipped": "no nonlinearity configured", "runs": []}
            return
        if not self.domain.is_interval:
            self.report["probe"] = {"skipped": "nonlinear probe runs on intervals only", "runs": []}
            return
        recs = self.records() or []
        self.report["probe"] = self.timed("probe", lambda: self._probe(recs))

    def _probe(self, recs):
        prob = probe.discretize(self.path, self.cfg.G, self.num.probe_mesh, self.domain.length)
        runs = []
        for i, r in enumerate(recs, start=1):
            if r.local_sflow == 0:
                continue
            sides = probe.probe_both_sides(prob, r.lambda0, numerics=self.num)
            entry = {"lambda0": r.lambda0}
            for side, res in sides.items():
                entry[side] = None if res is None else res.to_dict()
                if res is not None and self.plots_dir:
                    _probe_csv(os.path.join(self.plots_dir, f"probe_{i}_{side}.csv"), res)
            entry["confirmed"] = any(res is not None and res.success for res in sides.values())
            runs.append(entry)
        return {"runs": runs}


def _probe_csv(path_out, res):
    with open(path_out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lambda", "amplitude", "iters"])
        for s in res.samples:
            w.writerow([f"{s.lam:.17g}", f"{s.amplitude:.17g}", s.newton_iters])


def build_report(cfg, command="report", plots_dir=None, grid=None):
    if command not in SECTIONS:
        raise ValueError(f"unknown command {command!r}")
    if plots_dir:
        os.makedirs(plots_dir, exist_ok=True)
    run = _Run(cfg, plots_dir, grid)
    run.report.update({"schema_version": 1, "command": command, "problem": cfg.raw,
                       "x_dependent": bool(cfg.path.x_dependent)})
    for section in SECTIONS[command]:
        getattr(run, section)()
    rep = run.report
    # keep errors and timing last for readability
    rep["errors"] = rep.pop("errors")
    rep["timing"] = rep.pop("timing")
    validate(rep, "report")
    return rep


def strip_timing(rep):
    return {k: v for k, v in rep.items() if k != "timing"}
