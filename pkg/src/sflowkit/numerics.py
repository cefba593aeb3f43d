"""Numerical knobs shared by the engines, with their defaults."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class Numerics:
    # galerkin
    n_start: int = 8
    n_max: int = 256
    delta: float | None = None
    delta_floor: float = 1e-8
    quad_panels: int = 4  # Gauss-Legendre panels per retained mode
    eigensolver: str = "jacobi"
    # bounds
    x_grid: int = 512
    lambda_grid: int = 256
    # crossings
    crossing_grid: int = 512
    rk_tol: float = 1e-10
    sv_tol: float = 1e-7
    lambda_tol: float = 1e-12
    kernel_mesh: int = 1024
    # nonlinear probe
    probe_mesh: int = 200
    newton_tol: float = 1e-10
    newton_max_iter: int = 50
    probe_h: float = 0.02
    probe_steps: int = 8
    probe_seed: float = 0.1
    amplitude_floor: float = 1e-6
    probe_target: float = 1e-3

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in (d or {}).items() if k in known})

    def replace(self, **kw):
        d = asdict(self)
        d.update({k: v for k, v in kw.items() if v is not None})
        return Numerics(**d)

    def to_dict(self):
        return asdict(self)

    def galerkin(self):
        from .galerkin import GalerkinConfig
        return GalerkinConfig(n_start=self.n_start, n_max=self.n_max, delta=self.delta,
                              delta_floor=self.delta_floor, panels_per_mode=self.quad_panels,
                              eigensolver=self.eigensolver)
