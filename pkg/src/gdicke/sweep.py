"""Parameter sweeps, critical-point location and power-law exponent fits.

A sweep walks a 1D or 2D grid of couplings, evaluates the requested pipeline
at every point independently, and emits one flat record per point in a fixed
column order.  Output is deterministic: the grid is generated in ascending
axis order, floats are formatted with 12 significant digits, and per-point
failures land in an `error` column instead of aborting the run.
"""

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import GdickeError, InsufficientPoints, NoBoundaryInBracket, NonPositiveValue
from .fluctuations import build_quadratic, covariance_observables, energy_gap, mode_entropies, williamson
from .meanfield import MinimizeOptions, energy_derivatives_chi, minimize
from .model import ModelParams, Phase, analytic_branches, classify_phase, mean_field_energy, order_parameters

AXIS_FIELDS = {"chi": "chi", "lambda": "lam", "Omega": "Omega"}

QUANTITIES = (
    "energy",
    "dE_dchi",
    "d2E_dchi2",
    "jx",
    "b",
    "nb",
    "deltas",
    "dx2",
    "dp2",
    "entropy",
    "phase",
)

_COLUMNS = {
    "energy": ("energy",),
    "dE_dchi": ("dE_dchi",),
    "d2E_dchi2": ("d2E_dchi2",),
    "jx": ("jx1", "jx2"),
    "b": ("b",),
    "nb": ("nb",),
    "deltas": ("delta1", "delta2", "delta3"),
    "dx2": ("dx2_1", "dx2_2", "dx2_3"),
    "dp2": ("dp2_1", "dp2_2", "dp2_3"),
    "entropy": ("entropy1", "entropy2", "entropy3"),
    "phase": ("phase",),
}


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_FIELDS:
            raise ValueError(f"axis name must be one of {sorted(AXIS_FIELDS)}, got {self.name!r}")
        if self.count < 2:
            raise ValueError("axis count must be >= 2")
        if not self.start < self.stop:
            raise ValueError("axis start must be < stop")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    params_base: ModelParams
    axis1: Axis
    axis2: Axis | None = None
    quantities: tuple[str, ...] = ("energy", "phase")

    def __post_init__(self):
        unknown = set(self.quantities) - set(QUANTITIES)
        if unknown:
            raise ValueError(f"unknown quantities: {sorted(unknown)}")
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise ValueError("axis1 and axis2 must sweep different couplings")

    def columns(self) -> list[str]:
        cols = [self.axis1.name]
        if self.axis2 is not None:
            cols.append(self.axis2.name)
        for q in self.quantities:
            cols.extend(_COLUMNS[q])
        cols.append("error")
        return cols


def _with(params: ModelParams, axis_name: str, value: float) -> ModelParams:
    return replace(params, **{AXIS_FIELDS[axis_name]: float(value)})


def evaluate_point(params: ModelParams, quantities: tuple[str, ...], options: MinimizeOptions) -> dict:
    """Evaluate the requested quantities at a single parameter point.

    Identical to calling the library directly; the sweep machinery adds
    nothing but iteration and formatting.
    """
    row: dict[str, float | str] = {}
    solution = None
    spectrum = None

    def sol():
        nonlocal solution
        if solution is None:
            solution = minimize(params, options)
        return solution

    def spec():
        nonlocal spectrum
        if spectrum is None:
            spectrum = williamson(build_quadratic(params, sol()))
        return spectrum

    if "dE_dchi" in quantities or "d2E_dchi2" in quantities:
        der = energy_derivatives_chi(params, options=options)
        if "dE_dchi" in quantities:
            row["dE_dchi"] = der.dE_dchi
        if "d2E_dchi2" in quantities:
            row["d2E_dchi2"] = der.d2E_dchi2
    if "energy" in quantities:
        row["energy"] = sol().energy
    if "jx" in quantities or "b" in quantities or "nb" in quantities:
        op = order_parameters(params, sol().config)
        if "jx" in quantities:
            row["jx1"], row["jx2"] = op.jx1, op.jx2
        if "b" in quantities:
            row["b"] = op.b
        if "nb" in quantities:
            row["nb"] = op.nb
    if "deltas" in quantities:
        row["delta1"], row["delta2"], row["delta3"] = spec().deltas
    if "dx2" in quantities or "dp2" in quantities:
        fl = covariance_observables(spec())
        if "dx2" in quantities:
            row["dx2_1"], row["dx2_2"], row["dx2_3"] = fl.dx2
        if "dp2" in quantities:
            row["dp2_1"], row["dp2_2"], row["dp2_3"] = fl.dp2
    if "entropy" in quantities:
        row["entropy1"], row["entropy2"], row["entropy3"] = mode_entropies(spec())
    if "phase" in quantities:
        row["phase"] = classify_phase(params).variant.value
    return row


def _eval_task(task) -> dict:
    point, axis_names, base, quantities, options, columns = task
    row = dict(zip(axis_names, point))
    try:
        params = base
        for name, value in zip(axis_names, point):
            params = _with(params, name, value)
        row.update(evaluate_point(params, quantities, options))
        row["error"] = ""
    except (GdickeError, ValueError) as exc:
        for col in columns:
            if col not in row and col != "error":
                row[col] = "" if col == "phase" else math.nan
        row["error"] = type(exc).__name__
    return row


def run_sweep(
    spec: SweepSpec,
    options: MinimizeOptions = MinimizeOptions(),
    workers: int = 1,
) -> list[dict]:
    """All grid records in ascending (axis1, axis2) order.

    Points are independent; with workers > 1 they are farmed out to a process
    pool, and the output order is unchanged.
    """
    columns = spec.columns()
    tasks = []
    for v1 in spec.axis1.values():
        if spec.axis2 is None:
            tasks.append(((float(v1),), (spec.axis1.name,),
                          spec.params_base, spec.quantities, options, columns))
        else:
            for v2 in spec.axis2.values():
                tasks.append(((float(v1), float(v2)), (spec.axis1.name, spec.axis2.name),
                              spec.params_base, spec.quantities, options, columns))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_eval_task, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    else:
        rows = [_eval_task(t) for t in tasks]
    return rows


def format_value(v) -> str:
    """12-significant-digit rendering; infinities and NaN become bare tokens."""
    if isinstance(v, str):
        return v
    return format(float(v), ".12g")


def write_csv(rows: list[dict], columns: list[str], fh) -> None:
    fh.write(",".join(columns) + "\n")
    for row in rows:
        fh.write(",".join(format_value(row[c]) for c in columns) + "\n")


def write_jsonl(rows: list[dict], columns: list[str], fh) -> None:
    # values are rounded to the same 12 significant digits as the CSV output;
    # non-finite floats use the json module's Infinity/NaN extension tokens
    for row in rows:
        out = {}
        for c in columns:
            v = row[c]
            out[c] = v if isinstance(v, str) else float(format_value(v))
        fh.write(json.dumps(out, allow_nan=True) + "\n")


_GAP_CLOSURE_TOL = 1e-3
_ENERGY_CROSSING_TOL = 1e-8


def locate_critical(
    params_base: ModelParams,
    axis: str,
    bracket: tuple[float, float],
    scan: int = 64,
    options: MinimizeOptions = MinimizeOptions(),
) -> float:
    """Critical coupling inside the bracket, to an interval below 1e-10.

    Bisects the analytic phase assignment along the axis, requiring exactly
    one boundary in the bracket, then cross-checks the result numerically:
    a continuous transition must close the energy gap there, a first-order
    one must cross the energies of the two competing branches.
    """
    if axis not in AXIS_FIELDS:
        raise ValueError(f"axis must be one of {sorted(AXIS_FIELDS)}, got {axis!r}")
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")

    def phase_at(v: float) -> Phase:
        return classify_phase(_with(params_base, axis, v)).variant

    grid = np.linspace(lo, hi, scan + 1)
    labels = [phase_at(v) for v in grid]
    changes = [i for i in range(scan) if labels[i] != labels[i + 1]]
    if len(changes) != 1:
        raise NoBoundaryInBracket(
            f"bracket [{lo}, {hi}] on {axis} contains {len(changes)} phase changes, need exactly 1"
        )
    i = changes[0]
    a, b = float(grid[i]), float(grid[i + 1])
    label_a, label_b = labels[i], labels[i + 1]
    while b - a > 1e-10:
        mid = 0.5 * (a + b)
        if phase_at(mid) == label_a:
            a = mid
        else:
            b = mid
    crit = 0.5 * (a + b)

    pair = {label_a, label_b}
    params_c = _with(params_base, axis, crit)
    if pair == {Phase.FERROMAGNETIC_SUPERRADIANT, Phase.ANTIFERROMAGNETIC_NORMAL}:
        # first-order line: the two symmetry-broken branches swap stability
        energies = sorted(
            mean_field_energy(params_c, c)
            for c in analytic_branches(params_c)
            if abs(c.theta1) > 1e-9
        )
        if len(energies) < 2 or energies[1] - energies[0] > _ENERGY_CROSSING_TOL:
            raise NoBoundaryInBracket(
                f"branch energies do not cross at {axis} = {crit}: no first-order boundary"
            )
    else:
        gap = energy_gap(params_c, options)
        if not gap < _GAP_CLOSURE_TOL:
            raise NoBoundaryInBracket(
                f"energy gap {gap:.3e} does not close at {axis} = {crit}: no continuous boundary"
            )
    return crit


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    stderr: float


def fit_exponent(
    series: list[tuple[float, float]],
    window: tuple[float, float] = (1e-4, 1e-2),
) -> ExponentFit:
    """Least-squares power-law exponent of value vs distance on a log-log scale.

    Only points with distance inside [window[0], window[1]] enter the fit;
    at least 5 are required, and every (distance, value) pair must be
    strictly positive.
    """
    dmin, dmax = window
    if any(d <= 0 or v <= 0 for d, v in series):
        raise NonPositiveValue("all distances and values must be strictly positive")
    pts = [(d, v) for d, v in series if dmin <= d <= dmax]
    if len(pts) < 5:
        raise InsufficientPoints(f"{len(pts)} points inside window [{dmin}, {dmax}], need >= 5")
    x = np.log([d for d, _ in pts])
    y = np.log([v for _, v in pts])
    xbar, ybar = x.mean(), y.mean()
    sxx = float(np.sum((x - xbar) ** 2))
    slope = float(np.sum((x - xbar) * (y - ybar)) / sxx)
    intercept = float(ybar - slope * xbar)
    resid = y - (slope * x + intercept)
    stderr = float(math.sqrt(float(np.sum(resid**2)) / (len(pts) - 2) / sxx))
    return ExponentFit(slope=slope, intercept=intercept, stderr=stderr)
