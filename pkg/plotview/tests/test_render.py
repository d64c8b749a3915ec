import json
import subprocess
import sys

import pytest

from plotview import MissingColumnError, PlotSpec, load_table, render_figure


@pytest.fixture()
def outputs(tmp_path):
    csv_path = tmp_path / "reconstruction.csv"
    csv_path.write_text(
        "t,x_true,y,Alpha,Beta\n"
        "0.0,1.0,1.1,0.9,1.05\n"
        "0.25,0.5,,0.45,0.52\n"
        "0.5,-0.5,-0.4,-0.55,-0.48\n"
        "0.75,-1.0,,-0.95,-1.02\n"
        "1.0,0.0,0.2,0.05,-0.01\n")
    report_path = tmp_path / "report.json"
    report_path.write_text(json.dumps({
        "estimators": [
            {"name": "Alpha", "error": 0.5045, "rmse": 0.02},
            {"name": "Beta", "error": 12.151567, "rmse": 0.08},
        ]}))
    return csv_path, report_path


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "plotview.cli", *args],
                          capture_output=True, text=True)


class TestLoadTable:
    def test_columns_and_sample_mask(self, outputs):
        table = load_table(outputs[0])
        assert list(table.estimators) == ["Alpha", "Beta"]
        assert table.sample_times.tolist() == [0.0, 0.5, 1.0]
        assert table.sample_values.tolist() == [1.1, -0.4, 0.2]

    def test_missing_required_column(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("t,y\n0.0,1.0\n")
        with pytest.raises(MissingColumnError, match="x_true"):
            load_table(bad)


class TestRenderFigure:
    def test_one_panel_per_estimator_plus_overview(self, outputs, tmp_path):
        spec = PlotSpec(str(outputs[0]), str(outputs[1]), str(tmp_path / "fig.png"))
        fig = render_figure(spec)
        assert len(fig.axes) == 3
        titles = [ax.get_title() for ax in fig.axes]
        assert "0.5045" in titles[1]
        assert "12.1516" in titles[2]  # report value rounded to 4 decimals

    def test_empty_selection_gives_overview_only(self, outputs, tmp_path):
        spec = PlotSpec(str(outputs[0]), str(outputs[1]), str(tmp_path / "fig.png"),
                        estimators=())
        fig = render_figure(spec)
        assert len(fig.axes) == 1

    def test_unknown_estimator_column_named(self, outputs, tmp_path):
        spec = PlotSpec(str(outputs[0]), str(outputs[1]), str(tmp_path / "fig.png"),
                        estimators=("Gamma",))
        with pytest.raises(MissingColumnError, match="Gamma"):
            render_figure(spec)

    def test_bad_format_rejected(self, outputs, tmp_path):
        spec = PlotSpec(str(outputs[0]), str(outputs[1]), str(tmp_path / "fig.bmp"))
        with pytest.raises(ValueError, match="png or svg"):
            spec.resolved_format()


class TestCli:
    def test_renders_and_exits_zero(self, outputs, tmp_path):
        out = tmp_path / "fig.png"
        proc = run_cli(str(outputs[0]), str(outputs[1]), "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        assert out.stat().st_size > 0

    def test_missing_column_exit_code_and_message(self, outputs, tmp_path):
        proc = run_cli(str(outputs[0]), str(outputs[1]),
                       "--out", str(tmp_path / "fig.png"), "--estimators", "Nope")
        assert proc.returncode == 2
        assert "Nope" in proc.stderr

    def test_missing_input_file(self, tmp_path):
        proc = run_cli(str(tmp_path / "none.csv"), str(tmp_path / "none.json"),
                       "--out", str(tmp_path / "fig.png"))
        assert proc.returncode == 2

    @pytest.mark.parametrize("fmt", ["png", "svg"])
    def test_rerun_is_byte_identical(self, outputs, tmp_path, fmt):
        a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
        for path in (a, b):
            proc = run_cli(str(outputs[0]), str(outputs[1]), "--out", str(path))
            assert proc.returncode == 0, proc.stderr
        assert a.read_bytes() == b.read_bytes()
