import json
import math

import pytest

from cblsim import SweepSpec, SystemParams, eval_point, run_figure, run_sweep
from cblsim.sweeps import FIGURE_NAMES, eval_point_json, figure_preset


def parse_csv(text):
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        row = {}
        for name, cell in zip(header, cells):
            if cell == "":
                row[name] = None
            elif cell in ("true", "false"):
                row[name] = cell == "true"
            else:
                row[name] = float(cell)
        rows.append(row)
    return header, rows


class TestSweepSpec:
    def test_axis_cannot_be_fixed(self):
        with pytest.raises(ValueError):
            SweepSpec(
                fixed={"A": 1.0, "kappa": 0.2, "eta": 0.0, "omega": 0.0, "N": 0.0},
                axis="eta",
                grid=(0.0, 1.0, 0.1),
                outputs=("var_minus_out",),
            )

    def test_all_parameters_must_be_covered(self):
        with pytest.raises(ValueError):
            SweepSpec(
                fixed={"A": 1.0, "kappa": 0.2},
                axis="eta",
                grid=(0.0, 1.0, 0.1),
                outputs=("var_minus_out",),
            )

    def test_unknown_output_rejected(self):
        with pytest.raises(ValueError):
            SweepSpec(
                fixed={"A": 1.0, "kappa": 0.2, "omega": 0.0, "N": 0.0},
                axis="eta",
                grid=(0.0, 1.0, 0.1),
                outputs=("wigner_negativity",),
            )

    def test_bad_grid_rejected(self):
        base = dict(
            fixed={"A": 1.0, "kappa": 0.2, "omega": 0.0, "N": 0.0},
            axis="eta",
            outputs=("var_minus_out",),
        )
        with pytest.raises(ValueError):
            SweepSpec(grid=(0.0, 1.0, -0.1), **base)
        with pytest.raises(ValueError):
            SweepSpec(grid=(1.0, 0.0, 0.1), **base)

    def test_from_json(self):
        spec = SweepSpec.from_json(
            json.dumps(
                {
                    "fixed": {"A": 10, "kappa": 0.2, "omega": 0, "N": 0.4},
                    "axis": "eta",
                    "grid": {"start": 0, "stop": 1, "step": 0.25},
                    "outputs": ["var_minus_out", "n_out"],
                }
            )
        )
        assert spec.axis == "eta"
        assert spec.grid_values() == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])

    def test_from_json_errors(self):
        with pytest.raises(ValueError):
            SweepSpec.from_json("not json")
        with pytest.raises(ValueError):
            SweepSpec.from_json(json.dumps({"fixed": {}}))

    def test_grid_point_count(self):
        spec = SweepSpec(
            fixed={"A": 10.0, "kappa": 0.2, "omega": 0.0, "N": 0.4},
            axis="eta",
            grid=(0.0, 1.0, 0.01),
            outputs=("var_minus_out",),
        )
        values = spec.grid_values()
        assert len(values) == 101
        assert values[0] == 0.0
        assert values[-1] == pytest.approx(1.0)


class TestRunSweep:
    def test_single_point_grid(self):
        spec = SweepSpec(
            fixed={"A": 0.0, "kappa": 0.2, "omega": 0.0, "N": 0.0},
            axis="eta",
            grid=(0.0, 0.0, 1.0),
            outputs=("var_minus_out",),
        )
        text = run_sweep(spec)
        lines = text.strip().split("\n")
        assert len(lines) == 2
        assert lines[0] == "eta,var_minus_out,below_threshold"
        assert lines[1] == "0,1,true"

    def test_deterministic_bytes(self):
        spec = SweepSpec(
            fixed={"A": 10.0, "kappa": 0.2, "omega": 0.0, "N": 0.4},
            axis="eta",
            grid=(0.0, 1.0, 0.05),
            outputs=("var_minus_out", "n_out"),
        )
        assert run_sweep(spec) == run_sweep(spec)

    def test_above_threshold_rows_have_empty_cells(self):
        spec = SweepSpec(
            fixed={"A": 10.0, "kappa": 0.2, "omega": 0.0, "N": 0.0},
            axis="eta",
            grid=(-0.5, 0.5, 0.5),
            outputs=("var_minus_out", "lambda_minus"),
        )
        header, rows = parse_csv(run_sweep(spec))
        below = {row["eta"]: row["below_threshold"] for row in rows}
        assert below[-0.5] is False and below[0.5] is True
        dead = [row for row in rows if not row["below_threshold"]]
        assert all(row["var_minus_out"] is None for row in dead)
        # rates stay defined on both sides of threshold
        assert all(row["lambda_minus"] is not None for row in rows)


class TestFigurePresets:
    def test_all_presets_render(self):
        for name in FIGURE_NAMES:
            text = run_figure(name)
            assert text.count("\n") > 100

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            figure_preset("fig9")

    def test_fig2_layout_and_content(self):
        header, rows = parse_csv(run_figure("fig2"))
        assert header == ["eta", "N", "var_minus_out", "below_threshold"]
        assert len(rows) == 3 * 101
        strong = [row for row in rows if row["N"] == 0.4]
        values = {row["eta"]: row["var_minus_out"] for row in strong}
        best = min(v for v in values.values() if v is not None)
        assert 0.26 <= best <= 0.32
        # prose point: 71 percent squeezing at eta = 0.25
        assert abs((1 - values[0.25]) * 100 - 71.0) < 3.0

    def test_fig3_optimum(self):
        header, rows = parse_csv(run_figure("fig3"))
        strong = [row for row in rows if row["N"] == 0.4 and row["below_threshold"]]
        best = min(strong, key=lambda row: row["var_minus_out"])
        assert 0.25 <= best["var_minus_out"] <= 0.33
        assert 0.05 <= best["omega"] <= 0.30

    def test_fig7_cavity_exceeds_output(self):
        header, rows = parse_csv(run_figure("fig7"))
        live = [row for row in rows if row["below_threshold"]]
        assert live
        wins = sum(1 for row in live if row["n_cav"] > row["n_out"])
        assert wins >= 0.9 * len(live)
        # the identity n_out = kappa n_cav + N (1 - kappa) holds exactly
        for row in live[:50]:
            assert row["n_out"] == pytest.approx(0.2 * row["n_cav"] + 0.4 * 0.8, rel=1e-9)


class TestEvalPoint:
    def test_below_threshold_payload(self):
        result = eval_point(SystemParams(A=0.0, kappa=0.2, eta=0.0, omega=0.0, N=0.0))
        assert result["below_threshold"] is True
        assert result["var_minus_out"] == 1.0
        assert result["n_out"] == 0.0

    def test_above_threshold_payload(self):
        result = eval_point(SystemParams(A=10.0, kappa=0.2, eta=-0.1, omega=0.0, N=0.0))
        assert result["below_threshold"] is False
        assert result["var_minus_out"] is None
        assert result["n_cav"] is None

    def test_json_round_trip(self):
        text = eval_point_json(SystemParams(A=10.0, kappa=0.2, eta=0.25, omega=0.0, N=0.4))
        data = json.loads(text)
        assert abs(data["squeeze_pct_out"] - 72.93148790610283) < 1e-9
