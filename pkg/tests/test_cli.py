"""CLI, report documents and PPM output."""

import json

import numpy as np
import pytest

import runner
from chebdyn.dynamics import render_basins
from chebdyn.fixed import fixed_points
from chebdyn.maps import build_cn, cn_function
from chebdyn.types import Z_POLY, BasinGrid, ClaimReport, Viewport
from utils.report_codec import (
    SchemaError,
    analysis_document,
    check_schema,
    claim_report_from_dict,
    claim_report_to_dict,
    decode_complex,
    dumps_document,
    encode_complex,
    fixed_points_from_document,
    loads_document,
)
from visualizer import COOL_SLOW, WARM_FAST, WARM_SLOW, basin_to_rgb, create_visualization, ppm_header


def run_cli(capsys, *argv):
    code = runner.main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestParseComplex:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("2", 2 + 0j),
            ("-0.5", -0.5 + 0j),
            ("3i", 3j),
            ("-i", -1j),
            ("i", 1j),
            ("2+i", 2 + 1j),
            ("-1.5+2i", -1.5 + 2j),
            ("1e-3-2e-1i", 0.001 - 0.2j),
        ],
    )
    def test_valid(self, text, expected):
        assert runner.parse_complex(text) == expected

    @pytest.mark.parametrize("text", ["", "abc", "1+2", "nan", "inf", "1 + 2i"])
    def test_invalid(self, text):
        with pytest.raises(ValueError):
            runner.parse_complex(text)

    def test_coefficient_list(self):
        assert runner.coefficient_list("0,1,-2i").coeffs == (0, 1, -2j)

    def test_size(self):
        assert runner.size_arg("640x480") == (640, 480)

    def test_join_value_options(self):
        argv = ["analyze", "--p", "-1,2", "--q", "0,1"]
        assert runner.join_value_options(argv) == ["analyze", "--p=-1,2", "--q=0,1"]
        assert runner.join_value_options(["render", "--center"]) == ["render", "--center"]
        assert runner.join_value_options(["render", "--center=2i", "--n", "2"]) == ["render", "--center=2i", "--n", "2"]


class TestAnalyze:
    def test_cn_shortcut_matches_explicit_coefficients(self, capsys):
        code_a, shortcut = run_cli(capsys, "analyze", "--n", "1")
        code_b, explicit = run_cli(capsys, "analyze", "--p=0,1", "--q=0,1")
        assert code_a == code_b == runner.EXIT_OK
        assert shortcut == explicit

        document = json.loads(shortcut)
        assert document["map"]["degree"] == 4
        assert sum(e["multiplicity"] for e in document["fixed_points"]) == 5
        assert sum(e["multiplicity"] for e in document["critical_points"]) == 6
        assert document["infinity_series"]["multiplicity"] == 2

    def test_newton(self, capsys):
        code, out = run_cli(capsys, "analyze", "--n", "2", "--method", "newton")
        assert code == runner.EXIT_OK
        assert json.loads(out)["input"]["method"] == "newton"

    def test_negative_leading_coefficient(self, capsys):
        code_a, spaced = run_cli(capsys, "analyze", "--p", "-1,2", "--q", "0,1")
        code_b, joined = run_cli(capsys, "analyze", "--p=-1,2", "--q=0,1")
        assert code_a == code_b == runner.EXIT_OK
        assert spaced == joined
        assert json.loads(spaced)["input"]["p"] == [{"re": -1.0, "im": 0.0}, {"re": 2.0, "im": 0.0}]

    def test_zero_p_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            runner.main(["analyze", "--p", "0"])
        assert excinfo.value.code == runner.EXIT_USAGE

    def test_constant_f_is_degenerate(self, capsys):
        code, out = run_cli(capsys, "analyze", "--p", "1")
        assert code == runner.EXIT_DEGENERATE
        assert out == ""

    def test_n_and_p_are_exclusive(self):
        with pytest.raises(SystemExit):
            runner.main(["analyze", "--n", "1", "--p", "1"])


class TestRender:
    ARGS = ("render", "--n", "2", "--size", "24x16", "--budget", "300")

    def test_writes_ppm(self, capsys, tmp_path):
        out = tmp_path / "c2.ppm"
        code, stdout = run_cli(capsys, *self.ARGS, "--out", str(out))
        assert code == runner.EXIT_OK and stdout == ""
        data = out.read_bytes()
        header = ppm_header(24, 16)
        assert data.startswith(header)
        assert len(data) == len(header) + 24 * 16 * 3

    def test_thread_count_does_not_change_image(self, capsys, tmp_path, monkeypatch):
        images = []
        for threads in ("1", "3"):
            monkeypatch.setenv("CHEBDYN_THREADS", threads)
            out = tmp_path / f"t{threads}.ppm"
            assert run_cli(capsys, *self.ARGS, "--out", str(out))[0] == runner.EXIT_OK
            images.append(out.read_bytes())
        assert images[0] == images[1]

    def test_unwritable_path(self, capsys, tmp_path):
        out = tmp_path / "missing" / "c2.ppm"
        code, _ = run_cli(capsys, *self.ARGS, "--out", str(out))
        assert code == runner.EXIT_IO

    def test_negative_center(self, capsys, tmp_path):
        spaced, joined = tmp_path / "spaced.ppm", tmp_path / "joined.ppm"
        assert run_cli(capsys, *self.ARGS, "--center", "-1.5+2i", "--out", str(spaced))[0] == runner.EXIT_OK
        assert run_cli(capsys, *self.ARGS, "--center=-1.5+2i", "--out", str(joined))[0] == runner.EXIT_OK
        assert spaced.read_bytes() == joined.read_bytes()

    def test_repeated_render_is_byte_identical(self, capsys, tmp_path):
        images = []
        for name in ("first", "second"):
            out = tmp_path / f"{name}.ppm"
            assert run_cli(capsys, "render", "--n", "4", "--size", "256x256", "--out", str(out))[0] == runner.EXIT_OK
            images.append(out.read_bytes())
        assert images[0] == images[1]
        assert len(images[0]) == len(ppm_header(256, 256)) + 256 * 256 * 3

    @pytest.mark.parametrize("size", ["24", "0x5", "axb"])
    def test_bad_size(self, size, tmp_path):
        with pytest.raises(SystemExit):
            runner.main(["render", "--n", "2", "--size", size, "--out", str(tmp_path / "x.ppm")])


class TestVerify:
    def test_unknown_claim(self):
        with pytest.raises(SystemExit) as excinfo:
            runner.main(["verify", "--claim", "collatz"])
        assert excinfo.value.code == runner.EXIT_USAGE

    def test_n_max_range(self):
        with pytest.raises(SystemExit):
            runner.main(["verify", "--n-max", "19"])

    @pytest.mark.parametrize("claim,n_max,count", [("odd-hypothesis", 7, 3), ("even-hypothesis", 4, 2)])
    def test_single_claim(self, capsys, claim, n_max, count):
        code, out = run_cli(capsys, "verify", "--n-max", str(n_max), "--claim", claim)
        assert code == runner.EXIT_OK
        reports = json.loads(out)
        assert len(reports) == count
        assert {r["claim_id"] for r in reports} == {claim}
        assert all(r["verdict"] == "pass" for r in reports)

    def test_default_range_passes(self, capsys):
        code, out = run_cli(capsys, "verify", "--n-max", "16")
        reports = json.loads(out)
        assert code == runner.EXIT_OK
        assert reports and all(r["verdict"] != "fail" for r in reports)

    def test_failed_claim_sets_exit_code(self, capsys, monkeypatch):
        failing = ClaimReport("census", {"n": 1}, "fail", {}, 0.0)
        monkeypatch.setattr(runner, "run_all", lambda n_max, workers=1: [failing])
        code, out = run_cli(capsys, "verify", "--n-max", "1")
        assert code == runner.EXIT_CLAIM_FAILED
        assert json.loads(out)[0]["verdict"] == "fail"


class TestProfile:
    def test_even(self, capsys):
        code, out = run_cli(capsys, "profile", "--n", "4")
        document = json.loads(out)
        assert code == runner.EXIT_OK
        assert document["ordered"] and document["even_displacement_ok"]
        assert [b["label"] for b in document["breakpoints"]] == ["-z0", "-c_r", "0", "c_r", "z0"]

    def test_step_log_written(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("CHEBDYN_STEP_LOGGING", "true")
        assert run_cli(capsys, "profile", "--n", "3")[0] == runner.EXIT_OK
        finals = list((tmp_path / "Logs" / "profile_n3").glob("*/final_output/final.json"))
        assert len(finals) == 1
        assert json.loads(finals[0].read_text())["n"] == 3


class TestReportCodec:
    def test_complex_values(self):
        assert encode_complex(complex(float("inf"), 0)) == "infinity"
        assert decode_complex({"re": 1.5, "im": -2.0}) == 1.5 - 2j
        with pytest.raises(SchemaError):
            decode_complex([1, 2])

    def test_fixed_points_survive_text_form(self, cn_maps):
        records = fixed_points(cn_maps[2], Z_POLY)
        document = analysis_document(cn_function(2), cn_maps[2], records, [], None)
        restored = fixed_points_from_document(loads_document(dumps_document(document)))
        assert restored == records

    def test_claim_report(self):
        report = ClaimReport(
            "extraneous", {"n": 1}, "pass", {"point": -0.5 + 0.25j, "roots": [1j, 2.0 + 0j], "count": 2}, 1e-9
        )
        restored = claim_report_from_dict(loads_document(dumps_document(claim_report_to_dict(report))))
        assert restored == report

    def test_schema_version(self):
        with pytest.raises(SchemaError):
            check_schema({"schema_version": 99})
        with pytest.raises(SchemaError):
            check_schema([])

    def test_text_form(self):
        assert dumps_document({"a": 1}) == '{\n  "a": 1\n}\n'


class TestVisualizer:
    def _grid(self):
        viewport = Viewport(0j, 1.0, 2, 2)
        codes = np.array([[1, 1], [2, 0]], dtype=np.int8)
        iterations = np.array([[0, 9], [9, 100]], dtype=np.int32)
        return BasinGrid(viewport, codes, iterations)

    def test_palette(self):
        rgb = basin_to_rgb(self._grid())
        assert rgb.shape == (2, 2, 3) and rgb.dtype == np.uint8
        assert rgb[0, 0].tolist() == WARM_FAST.astype(int).tolist()
        assert rgb[0, 1].tolist() == WARM_SLOW.astype(int).tolist()
        assert rgb[1, 0].tolist() == COOL_SLOW.astype(int).tolist()
        assert rgb[1, 1].tolist() == [0, 0, 0]

    def test_bytes_without_path(self):
        data = create_visualization(self._grid())
        assert data == ppm_header(2, 2) + basin_to_rgb(self._grid()).tobytes()

    def test_all_unresolved_is_black(self):
        grid = BasinGrid(Viewport(0j, 1.0, 3, 1), np.zeros((1, 3), dtype=np.int8), np.ones((1, 3), dtype=np.int32))
        assert not basin_to_rgb(grid).any()

    def test_render_grid_is_deterministic(self, cn_maps):
        viewport = Viewport(0j, 2.0, 20, 20)
        a = create_visualization(render_basins(cn_maps[3], viewport, 200, workers=1))
        b = create_visualization(render_basins(build_cn(3), viewport, 200, workers=4))
        assert a == b
