"""Grid representations of phase-space and space-time functions.

Space and velocity axes are sampled at cell centers and integrated by
cell sums (piecewise-constant measure), so box indicators are exact up
to boundary cells.  The time axis is sampled at nodes including both
endpoints and integrated by the trapezoid rule, which the propagator
operators share.  Infinite exponents always mean an exact max, never a
large-p limit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from ktlab.rational import ExtRational

__all__ = [
    "GridSpec",
    "PhaseField",
    "SpaceTimeField",
    "MixedNormSpec",
    "mixed_norm",
    "lorentz_time_norm",
    "trapezoid_weights",
    "save_field",
    "load_field",
    "export_csv",
]


def _as_tuple(v, n: int) -> tuple[float, ...]:
    if np.isscalar(v):
        return tuple(float(v) for _ in range(n))
    t = tuple(float(x) for x in v)
    if len(t) != n:
        raise ValueError(f"expected {n} per-axis values, got {len(t)}")
    return t


def _as_counts(v, n: int) -> tuple[int, ...]:
    if np.isscalar(v):
        return tuple(int(v) for _ in range(n))
    t = tuple(int(x) for x in v)
    if len(t) != n:
        raise ValueError(f"expected {n} per-axis counts, got {len(t)}")
    return t


@dataclass(frozen=True)
class GridSpec:
    """Rectangular phase-space grid, optionally with a time window.

    Cell centers carry the (x, v) samples; ``nt`` time nodes span
    [t_lo, t_hi] inclusively.
    """

    n: int
    x_lo: tuple[float, ...]
    x_hi: tuple[float, ...]
    v_lo: tuple[float, ...]
    v_hi: tuple[float, ...]
    nx: tuple[int, ...]
    nv: tuple[int, ...]
    t_lo: float | None = None
    t_hi: float | None = None
    nt: int | None = None

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ValueError("dimension must be positive")
        for name in ("x_lo", "x_hi", "v_lo", "v_hi"):
            object.__setattr__(self, name, _as_tuple(getattr(self, name), n))
        for name in ("nx", "nv"):
            object.__setattr__(self, name, _as_counts(getattr(self, name), n))
        for lo, hi in zip(self.x_lo + self.v_lo, self.x_hi + self.v_hi):
            if not lo < hi:
                raise ValueError("grid bounds must be strictly ordered")
        if any(c < 2 for c in self.nx + self.nv):
            raise ValueError("need at least 2 samples per axis")
        if (self.t_lo is None) != (self.t_hi is None) or (self.t_lo is None) != (
            self.nt is None
        ):
            raise ValueError("time axis needs t_lo, t_hi and nt together")
        if self.nt is not None:
            if not self.t_lo < self.t_hi:
                raise ValueError("time bounds must be strictly ordered")
            if self.nt < 2:
                raise ValueError("need at least 2 time nodes")

    @classmethod
    def box(cls, n, x, v, nx, nv, t=None, nt=None) -> "GridSpec":
        """Symmetric helper: x and v are (lo, hi) applied to every axis."""
        tlo, thi = (None, None) if t is None else (float(t[0]), float(t[1]))
        return cls(
            n=n,
            x_lo=_as_tuple(x[0], n),
            x_hi=_as_tuple(x[1], n),
            v_lo=_as_tuple(v[0], n),
            v_hi=_as_tuple(v[1], n),
            nx=_as_counts(nx, n),
            nv=_as_counts(nv, n),
            t_lo=tlo,
            t_hi=thi,
            nt=nt,
        )

    # -- derived geometry --------------------------------------------------

    @property
    def dx(self) -> np.ndarray:
        return np.array(
            [(hi - lo) / c for lo, hi, c in zip(self.x_lo, self.x_hi, self.nx)]
        )

    @property
    def dv(self) -> np.ndarray:
        return np.array(
            [(hi - lo) / c for lo, hi, c in zip(self.v_lo, self.v_hi, self.nv)]
        )

    def x_axis(self, ax: int) -> np.ndarray:
        d = self.dx[ax]
        return self.x_lo[ax] + d * (np.arange(self.nx[ax]) + 0.5)

    def v_axis(self, ax: int) -> np.ndarray:
        d = self.dv[ax]
        return self.v_lo[ax] + d * (np.arange(self.nv[ax]) + 0.5)

    @property
    def t_nodes(self) -> np.ndarray:
        if self.nt is None:
            raise ValueError("grid has no time axis")
        return np.linspace(self.t_lo, self.t_hi, self.nt)

    @property
    def dt(self) -> float:
        if self.nt is None:
            raise ValueError("grid has no time axis")
        return (self.t_hi - self.t_lo) / (self.nt - 1)

    @property
    def cell_volume_x(self) -> float:
        return float(np.prod(self.dx))

    @property
    def cell_volume_v(self) -> float:
        return float(np.prod(self.dv))

    @property
    def cell_volume(self) -> float:
        return self.cell_volume_x * self.cell_volume_v

    def phase_shape(self) -> tuple[int, ...]:
        return (*self.nx, *self.nv)

    def without_time(self) -> "GridSpec":
        return GridSpec(
            self.n, self.x_lo, self.x_hi, self.v_lo, self.v_hi, self.nx, self.nv
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "x_lo": list(self.x_lo),
            "x_hi": list(self.x_hi),
            "v_lo": list(self.v_lo),
            "v_hi": list(self.v_hi),
            "nx": list(self.nx),
            "nv": list(self.nv),
            "t_lo": self.t_lo,
            "t_hi": self.t_hi,
            "nt": self.nt,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GridSpec":
        return cls(**d)


def _check_finite(data: np.ndarray) -> None:
    if not np.all(np.isfinite(data)):
        raise ValueError("field samples must be finite")


@dataclass(frozen=True)
class PhaseField:
    """Sampled f(x, v) on a GridSpec; immutable after construction."""

    grid: GridSpec
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.shape != self.grid.phase_shape():
            raise ValueError(
                f"data shape {data.shape} does not match grid {self.grid.phase_shape()}"
            )
        _check_finite(data)
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_function(cls, grid: GridSpec, fn: Callable) -> "PhaseField":
        """Sample fn(x1, .., xn, v1, .., vn) (numpy-broadcastable) at cell centers."""
        axes = [grid.x_axis(i) for i in range(grid.n)] + [
            grid.v_axis(i) for i in range(grid.n)
        ]
        mesh = np.meshgrid(*axes, indexing="ij", sparse=True)
        return cls(grid, np.broadcast_to(fn(*mesh), grid.phase_shape()))

    @classmethod
    def indicator_box(
        cls, grid: GridSpec, x_box: Sequence[tuple[float, float]],
        v_box: Sequence[tuple[float, float]],
    ) -> "PhaseField":
        def fn(*coords):
            ind = np.ones(1)
            for c, (lo, hi) in zip(coords, list(x_box) + list(v_box)):
                ind = ind * ((c >= lo) & (c <= hi))
            return ind.astype(float)

        return cls.from_function(grid, fn)

    def l2_inner(self, other: "PhaseField") -> float:
        if self.grid != other.grid:
            raise ValueError("fields live on different grids")
        return float(np.sum(self.data * other.data)) * self.grid.cell_volume

    def scaled(self, factor: float) -> "PhaseField":
        return PhaseField(self.grid, self.data * factor)


@dataclass(frozen=True)
class SpaceTimeField:
    """Sampled F(t, x, v); leading axis runs over the grid's time nodes."""

    grid: GridSpec
    data: np.ndarray

    def __post_init__(self):
        if self.grid.nt is None:
            raise ValueError("SpaceTimeField needs a grid with a time axis")
        data = np.asarray(self.data, dtype=np.float64)
        if data.shape != (self.grid.nt, *self.grid.phase_shape()):
            raise ValueError("data shape does not match grid")
        _check_finite(data)
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_function(cls, grid: GridSpec, fn: Callable) -> "SpaceTimeField":
        """Sample fn(t, x.., v..) slice by slice at the time nodes."""
        axes = [grid.x_axis(i) for i in range(grid.n)] + [
            grid.v_axis(i) for i in range(grid.n)
        ]
        mesh = np.meshgrid(*axes, indexing="ij", sparse=True)
        slices = [
            np.broadcast_to(fn(t, *mesh), grid.phase_shape()) for t in grid.t_nodes
        ]
        return cls(grid, np.stack(slices))

    def slice_field(self, i: int) -> PhaseField:
        return PhaseField(self.grid.without_time(), self.data[i])


def _norm_exponent(e) -> float:
    if isinstance(e, ExtRational):
        return float(e)
    v = float(e)
    return v


@dataclass(frozen=True)
class MixedNormSpec:
    """Exponents (q, r, p) of a nested norm, innermost over velocity.

    ``q`` may be None for fields without a time axis.  ``lorentz_c``
    switches the time axis to the Lorentz norm L^{q, c}.
    """

    q: object = None
    r: object = math.inf
    p: object = math.inf
    lorentz_c: object = None

    def exponents(self) -> tuple[float | None, float, float]:
        q = None if self.q is None else _norm_exponent(self.q)
        r, p = _norm_exponent(self.r), _norm_exponent(self.p)
        for name, e in (("q", q), ("r", r), ("p", p)):
            if e is not None and not e > 0:
                raise ValueError(f"exponent {name} must be positive, got {e}")
        return q, r, p


def _reduce_axes(block: np.ndarray, e: float, axes: tuple[int, ...], cellvol: float):
    """Inner L^e reduction over the given trailing axes with cell weights."""
    if math.isinf(e):
        return np.max(np.abs(block), axis=axes)
    return (np.sum(np.abs(block) ** e, axis=axes) * cellvol) ** (1.0 / e)


def trapezoid_weights(nt: int, dt: float) -> np.ndarray:
    w = np.full(nt, dt)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def mixed_norm(u: PhaseField | SpaceTimeField, spec: MixedNormSpec) -> float:
    """Nested quadrature norm: L^p over v, L^r over x, then L^q over t.

    Velocity and space reductions are cell sums at cell centers; the
    time reduction uses trapezoid weights on the node grid (or the
    Lorentz rearrangement norm when ``spec.lorentz_c`` is set).
    """
    q, r, p = spec.exponents()
    grid = u.grid
    n = grid.n
    if isinstance(u, PhaseField):
        x_axes = tuple(range(n))
        v_axes = tuple(range(n, 2 * n))
        inner = _reduce_axes(u.data, p, v_axes, grid.cell_volume_v)
        val = _reduce_axes(inner, r, x_axes, grid.cell_volume_x)
        return float(val)
    # space-time: reduce each slice, then the time axis
    v_axes = tuple(range(1 + n, 1 + 2 * n))
    x_axes = tuple(range(1, 1 + n))
    inner = _reduce_axes(u.data, p, v_axes, grid.cell_volume_v)
    per_slice = _reduce_axes(inner, r, x_axes, grid.cell_volume_x)
    if q is None:
        raise ValueError("space-time field needs a time exponent q")
    if spec.lorentz_c is not None:
        c = _norm_exponent(spec.lorentz_c)
        w = trapezoid_weights(grid.nt, grid.dt)
        return lorentz_time_norm(list(zip(per_slice.tolist(), w.tolist())), q, c)
    w = trapezoid_weights(grid.nt, grid.dt)
    if math.isinf(q):
        return float(np.max(per_slice))
    return float(math.fsum(w * np.abs(per_slice) ** q) ** (1.0 / q))


def lorentz_time_norm(
    slices: Sequence[tuple[float, float]], q, c
) -> float:
    """Lorentz L^{q,c} norm of the step function with given (value, weight).

    Computed from the decreasing rearrangement f*:
    ( (q/c) * sum_i v_i^c (T_i^{c/q} - T_{i-1}^{c/q}) )^{1/c} with T_i
    the cumulative weights, and sup_t t^{1/q} f*(t) at c = inf.
    """
    q = _norm_exponent(q)
    c = _norm_exponent(c)
    if math.isinf(q) or q <= 0:
        raise ValueError("Lorentz time norm needs q in (0, inf)")
    if c <= 0:
        raise ValueError("Lorentz second index must be positive")
    if len(slices) == 0:
        raise ValueError("empty slice sequence")
    vals = np.array([abs(v) for v, _ in slices], dtype=float)
    wts = np.array([w for _, w in slices], dtype=float)
    if np.any(wts < 0):
        raise ValueError("weights must be nonnegative")
    order = np.argsort(-vals)
    vals, wts = vals[order], wts[order]
    keep = vals > 0
    vals, wts = vals[keep], wts[keep]
    if vals.size == 0:
        return 0.0
    T = np.cumsum(wts)
    if math.isinf(c):
        return float(np.max(vals * T ** (1.0 / q)))
    Tprev = np.concatenate(([0.0], T[:-1]))
    s = math.fsum(vals**c * (T ** (c / q) - Tprev ** (c / q)))
    return float(((q / c) * s) ** (1.0 / c))


# ---------------------------------------------------------------------------
# serialization: flat binary payload plus a JSON header


_HEADER_SCHEMA = "ktlab-field/1"


def save_field(path: str | Path, u: PhaseField | SpaceTimeField) -> None:
    """Write <path>.json (grid header) and <path>.bin (raw float64, C order)."""
    path = Path(path)
    kind = "spacetime" if isinstance(u, SpaceTimeField) else "phase"
    axis_order = (["t"] if kind == "spacetime" else []) + [
        f"x{i}" for i in range(u.grid.n)
    ] + [f"v{i}" for i in range(u.grid.n)]
    header = {
        "schema": _HEADER_SCHEMA,
        "kind": kind,
        "grid": u.grid.to_dict(),
        "axis_order": axis_order,
        "dtype": "float64",
        "units": "dimensionless",
        "shape": list(u.data.shape),
    }
    path.with_suffix(".json").write_text(json.dumps(header, indent=2))
    u.data.astype("<f8").tofile(path.with_suffix(".bin"))


def load_field(path: str | Path) -> PhaseField | SpaceTimeField:
    path = Path(path)
    header = json.loads(path.with_suffix(".json").read_text())
    if header.get("schema") != _HEADER_SCHEMA:
        raise ValueError(f"unknown field schema {header.get('schema')!r}")
    grid = GridSpec.from_dict(header["grid"])
    data = np.fromfile(path.with_suffix(".bin"), dtype="<f8").reshape(
        tuple(header["shape"])
    )
    if header["kind"] == "spacetime":
        return SpaceTimeField(grid, data)
    return PhaseField(grid, data)


def export_csv(path: str | Path, u: PhaseField) -> None:
    """Flatten a 1-D phase field (n = 1) to CSV columns x, v, value."""
    if u.grid.n != 1:
        raise ValueError("CSV export supports n = 1 slices")
    xs, vs = u.grid.x_axis(0), u.grid.v_axis(0)
    with open(path, "w") as fh:
        fh.write("x,v,value\n")
        for i, x in enumerate(xs):
            for j, v in enumerate(vs):
                fh.write(f"{x:.12g},{v:.12g},{u.data[i, j]:.12g}\n")
