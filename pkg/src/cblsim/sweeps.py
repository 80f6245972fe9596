"""Parameter sweeps, figure presets and the single-point evaluator.

Sweeps render to CSV with a fixed layout so that a given spec always
produces the same bytes: 12 significant digits, '.' decimal separator,
snake_case headers, empty cells for observables that do not exist at an
operating point (above threshold).  Threshold crossings therefore yield
complete, plottable files instead of process failures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .analytic import steady_observables
from .errors import ThresholdError
from .model import SystemParams, drift_diffusion

PARAM_NAMES = ("A", "kappa", "eta", "omega", "N")

OBSERVABLES = (
    "var_minus_cav",
    "var_minus_out",
    "var_plus_cav",
    "var_plus_out",
    "n_cav",
    "n_out",
    "squeeze_pct_cav",
    "squeeze_pct_out",
    "lambda_minus",
    "below_threshold",
)

# lambda_minus and below_threshold stay defined above threshold
_ALWAYS_DEFINED = ("lambda_minus", "below_threshold")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return format(float(value), ".12g")


def _grid_values(start: float, stop: float, step: float) -> List[float]:
    count = int(round((stop - start) / step)) + 1
    values = [start + i * step for i in range(count)]
    # guard against a final point drifting past stop by roundoff
    return [v for v in values if v <= stop + step * 1e-9]


@dataclass(frozen=True)
class SweepSpec:
    """One-axis sweep: fixed parameters, an axis with a grid, and outputs."""

    fixed: Dict[str, float]
    axis: str
    grid: Tuple[float, float, float]  # start, stop, step
    outputs: Tuple[str, ...]

    def __post_init__(self):
        if self.axis not in PARAM_NAMES:
            raise ValueError(f"unknown axis {self.axis!r}; choose from {PARAM_NAMES}")
        if self.axis in self.fixed:
            raise ValueError(f"axis {self.axis!r} must not appear in fixed")
        unknown = set(self.fixed) - set(PARAM_NAMES)
        if unknown:
            raise ValueError(f"unknown fixed parameters: {sorted(unknown)}")
        missing = set(PARAM_NAMES) - set(self.fixed) - {self.axis}
        if missing:
            raise ValueError(f"parameters not covered by fixed or axis: {sorted(missing)}")
        start, stop, step = self.grid
        if step <= 0:
            raise ValueError(f"grid step must be positive, got {step}")
        if start > stop:
            raise ValueError(f"grid start {start} exceeds stop {stop}")
        bad = [name for name in self.outputs if name not in OBSERVABLES]
        if bad:
            raise ValueError(f"unknown outputs: {bad}; choose from {OBSERVABLES}")
        if not self.outputs:
            raise ValueError("outputs must not be empty")

    @staticmethod
    def from_json(text: str) -> "SweepSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise ValueError(f"spec is not valid JSON: {err}") from err
        if not isinstance(data, dict):
            raise ValueError("spec must be a JSON object")
        try:
            fixed = dict(data["fixed"])
            axis = data["axis"]
            grid = data["grid"]
            outputs = tuple(data["outputs"])
        except KeyError as err:
            raise ValueError(f"spec is missing key {err}") from err
        if isinstance(grid, dict):
            grid = (grid["start"], grid["stop"], grid["step"])
        else:
            grid = tuple(grid)
        if len(grid) != 3:
            raise ValueError("grid must be [start, stop, step]")
        return SweepSpec(
            fixed={k: float(v) for k, v in fixed.items()},
            axis=str(axis),
            grid=(float(grid[0]), float(grid[1]), float(grid[2])),
            outputs=outputs,
        )

    def grid_values(self) -> List[float]:
        return _grid_values(*self.grid)


def _observable_row(params: SystemParams) -> Dict[str, object]:
    rates = drift_diffusion(params)
    row: Dict[str, object] = {name: None for name in OBSERVABLES}
    row["lambda_minus"] = rates.lambda_minus
    row["below_threshold"] = rates.below_threshold
    if rates.below_threshold:
        obs = steady_observables(params)
        row["var_minus_cav"] = obs.var_minus_cav
        row["var_minus_out"] = obs.var_minus_out
        row["var_plus_cav"] = obs.var_plus_cav
        row["var_plus_out"] = obs.var_plus_out
        row["n_cav"] = obs.n_cav
        row["n_out"] = obs.n_out
        row["squeeze_pct_cav"] = obs.squeeze_pct_cav
        row["squeeze_pct_out"] = obs.squeeze_pct_out
    return row


def eval_point(params: SystemParams) -> Dict[str, object]:
    """All observables at one operating point, as a JSON-ready dict.

    Above threshold the observables are null and below_threshold is false;
    that is a data answer, not an error.
    """
    rates = drift_diffusion(params)
    result: Dict[str, object] = {
        "params": {name: getattr(params, name) for name in PARAM_NAMES},
        "below_threshold": rates.below_threshold,
        "near_threshold": False,
        "lambda_plus": rates.lambda_plus,
        "lambda_minus": rates.lambda_minus,
    }
    keys = (
        "var_plus_cav",
        "var_minus_cav",
        "var_plus_out",
        "var_minus_out",
        "n_cav",
        "n_out",
        "squeeze_pct_cav",
        "squeeze_pct_out",
    )
    if rates.below_threshold:
        obs = steady_observables(params)
        result["near_threshold"] = obs.near_threshold
        for key in keys:
            result[key] = getattr(obs, key)
    else:
        for key in keys:
            result[key] = None
    return result


def eval_point_json(params: SystemParams) -> str:
    return json.dumps(eval_point(params), indent=2)


def run_sweep(spec: SweepSpec) -> str:
    """Render a sweep as CSV text, one row per grid point in axis order."""
    outputs = list(spec.outputs)
    if "below_threshold" not in outputs:
        outputs.append("below_threshold")
    header = [spec.axis] + outputs
    lines = [",".join(header)]
    for value in spec.grid_values():
        kwargs = dict(spec.fixed)
        kwargs[spec.axis] = value
        params = SystemParams(**kwargs)
        row = _observable_row(params)
        cells = [_fmt(value)] + [_fmt(row[name]) for name in outputs]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FigurePreset:
    """A named sweep family: one axis, optional curve parameter."""

    name: str
    fixed: Dict[str, float]
    axis: str
    grid: Tuple[float, float, float]
    outputs: Tuple[str, ...]
    curve_param: Optional[str] = None
    curve_values: Tuple[float, ...] = field(default_factory=tuple)


# Axis grids are chosen to resolve the squeezing optima discussed alongside
# the named figures (near eta ~ 0.25 and omega ~ 0.14).  fig7 leaves the
# axis parameter unnamed in its caption; omega is used by analogy with fig6.
_PRESETS: Dict[str, FigurePreset] = {
    "fig2": FigurePreset(
        name="fig2",
        fixed={"kappa": 0.2, "omega": 0.0, "A": 10.0},
        axis="eta",
        grid=(0.0, 1.0, 0.01),
        outputs=("var_minus_out",),
        curve_param="N",
        curve_values=(0.0, 0.1, 0.4),
    ),
    "fig3": FigurePreset(
        name="fig3",
        fixed={"kappa": 0.2, "eta": 0.0, "A": 10.0},
        axis="omega",
        grid=(0.0, 2.0, 0.01),
        outputs=("var_minus_out",),
        curve_param="N",
        curve_values=(0.0, 0.1, 0.4),
    ),
    "fig4": FigurePreset(
        name="fig4",
        fixed={"kappa": 0.2, "omega": 0.0, "A": 1000.0, "N": 0.4},
        axis="eta",
        grid=(0.0, 1.0, 0.01),
        outputs=("var_minus_cav", "var_minus_out"),
    ),
    "fig5": FigurePreset(
        name="fig5",
        fixed={"kappa": 0.2, "eta": 0.0, "A": 1000.0, "N": 0.4},
        axis="omega",
        grid=(0.0, 2.0, 0.01),
        outputs=("var_minus_cav", "var_minus_out"),
    ),
    "fig6": FigurePreset(
        name="fig6",
        fixed={"kappa": 0.2, "A": 1.0, "eta": 0.0},
        axis="omega",
        grid=(0.0, 2.0, 0.01),
        outputs=("n_out",),
        curve_param="N",
        curve_values=(0.0, 0.1, 0.4),
    ),
    "fig7": FigurePreset(
        name="fig7",
        fixed={"kappa": 0.2, "N": 0.4, "A": 1.0, "eta": 0.0},
        axis="omega",
        grid=(0.0, 2.0, 0.01),
        outputs=("n_cav", "n_out"),
    ),
}

FIGURE_NAMES = tuple(sorted(_PRESETS))


def figure_preset(name: str) -> FigurePreset:
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown figure {name!r}; choose from {FIGURE_NAMES}") from None


def run_figure(name: str) -> str:
    """Render a figure preset as CSV, one long-format block per curve."""
    preset = figure_preset(name)
    outputs = list(preset.outputs)
    if "below_threshold" not in outputs:
        outputs.append("below_threshold")
    header = [preset.axis]
    if preset.curve_param:
        header.append(preset.curve_param)
    header += outputs
    lines = [",".join(header)]
    curves = preset.curve_values if preset.curve_param else (None,)
    axis_values = _grid_values(*preset.grid)
    for curve in curves:
        for value in axis_values:
            kwargs = dict(preset.fixed)
            if preset.curve_param:
                kwargs[preset.curve_param] = curve
            kwargs[preset.axis] = value
            params = SystemParams(**kwargs)
            row = _observable_row(params)
            cells = [_fmt(value)]
            if preset.curve_param:
                cells.append(_fmt(curve))
            cells += [_fmt(row[name]) for name in outputs]
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
