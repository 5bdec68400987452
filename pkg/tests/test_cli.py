"""
Command line: dispatch, output formats and exit codes
"""
import io
import json
import math

import pytest

from app.cli.models import parse_poly
from app.core.errors import InvalidInputError
from app.core.exact import PolyQ
from app.main import run


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestParsePoly:
    def test_examples(self):
        assert parse_poly("-2,1") == PolyQ.from_coefficients([-2, 1])
        assert parse_poly("-1,-1,1") == PolyQ.from_coefficients([-1, -1, 1])
        assert parse_poly("1/2, 3") == PolyQ.from_coefficients(["1/2", 3])

    @pytest.mark.parametrize("text", ["0,0", "1,x", ""])
    def test_rejected(self, text):
        with pytest.raises(InvalidInputError):
            parse_poly(text)


class TestRun:
    def test_mahler(self, maps_dir):
        code, out, _ = invoke(["mahler", "--map", str(maps_dir / "squaring.json"), "--poly", "-2,1", "--place", "inf"])
        assert code == 0
        record = json.loads(out)
        assert abs(float(record["value"]) - math.log(2)) < 1e-9
        assert record["place"] == "inf"
        assert record["approximate"] is False

    def test_exceptional_target_exit_code(self, maps_dir):
        code, out, err = invoke(
            ["preimage-avg", "--map", str(maps_dir / "squaring.json"), "--poly", "-2,1", "--alpha", "0", "--k", "3"]
        )
        assert code == 1
        assert out == ""
        assert "exceptional target" in err

    def test_degenerate_map_exit_code(self, maps_dir):
        code, _, err = invoke(["height", "--map", str(maps_dir / "degenerate.json"), "--point", "2"])
        assert code == 2
        assert "degenerate map" in err

    def test_malformed_map(self, maps_dir):
        code, _, err = invoke(["height", "--map", str(maps_dir / "malformed.json"), "--point", "2"])
        assert code == 2
        assert "malformed rational" in err

    def test_missing_map_file(self, maps_dir):
        code, _, err = invoke(["height", "--map", str(maps_dir / "absent.json"), "--point", "2"])
        assert code == 2
        assert "cannot read map file" in err

    def test_unknown_flag(self, maps_dir):
        code, _, _ = invoke(["height", "--map", str(maps_dir / "squaring.json"), "--bogus", "1"])
        assert code == 2

    def test_unknown_command(self):
        code, _, _ = invoke(["plot"])
        assert code == 2

    def test_precision_floor(self, maps_dir):
        code, _, _ = invoke(
            ["height", "--map", str(maps_dir / "squaring.json"), "--point", "2", "--precision", "32"]
        )
        assert code == 2

    def test_zero_polynomial(self, maps_dir):
        code, _, err = invoke(["mahler", "--map", str(maps_dir / "squaring.json"), "--poly", "0,0"])
        assert code == 2
        assert "zero polynomial" in err

    def test_height_per_place_order(self, maps_dir):
        code, out, _ = invoke(["height", "--map", str(maps_dir / "half_squaring.json"), "--point", "3/2"])
        assert code == 0
        record = json.loads(out)
        assert list(record["per_place"]) == ["inf", "2", "3"]

    def test_periodic_series_streams_csv(self, maps_dir):
        code, out, _ = invoke(
            ["periodic-avg", "--map", str(maps_dir / "squaring.json"), "--poly", "-2,1",
             "--kmin", "1", "--kmax", "4", "--output", "csv"]
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "k,value,delta"
        assert len(lines) == 5
        assert lines[1].startswith("1,")
        assert lines[1].endswith(",")

    def test_periodic_series_json(self, maps_dir):
        code, out, _ = invoke(
            ["periodic-avg", "--map", str(maps_dir / "squaring.json"), "--poly", "-2,1", "--place", "2", "--k", "3"]
        )
        assert code == 0
        record = json.loads(out)
        assert [row["k"] for row in record["rows"]] == [3]
        assert record["rows"][0]["exact"] == "-1/8*log(2)"

    def test_counterexample(self):
        code, out, _ = invoke(["counterexample", "--nmax", "3"])
        assert code == 0
        rows = json.loads(out)
        assert [r["n"] for r in rows] == [1, 2, 3]
        assert rows[2]["log2_psi"] == "48"

    def test_classify_csv(self, maps_dir):
        code, out, _ = invoke(
            ["classify", "--map", str(maps_dir / "squaring.json"), "--point", "-1", "--output", "csv"]
        )
        assert code == 0
        header, row = out.strip().split("\n")
        assert header.split(",")[:3] == ["point", "kind", "tail"]
        assert row.split(",")[1] == "preperiodic"

    def test_output_is_deterministic(self, maps_dir):
        argv = ["global-identity", "--map", str(maps_dir / "squaring.json"), "--poly", "-1,-1,1", "--k", "5"]
        first = invoke(argv)
        assert first[0] == 0
        assert invoke(argv)[1] == first[1]

    @pytest.mark.parametrize(
        "argv",
        [
            ["mahler", "--poly", "-1/2,1"],
            ["mahler", "--poly", "-1,-1,1"],
            ["height", "--point", "-3/2"],
            ["classify", "--point", "-1"],
        ],
    )
    def test_negative_values_are_not_flags(self, maps_dir, argv):
        code, out, err = invoke(argv[:1] + ["--map", str(maps_dir / "squaring.json")] + argv[1:])
        assert code == 0, err
        assert out

    def test_local_height_of_poly_at_infinity(self, maps_dir):
        code, out, err = invoke(
            ["local-height", "--map", str(maps_dir / "squaring.json"), "--poly", "-1,-1,1", "--place", "inf"]
        )
        assert code == 0, err
        record = json.loads(out)
        assert abs(float(record["value"]) - math.log((1 + math.sqrt(5)) / 2)) < 1e-9
        assert record["aggregated"] is True
        assert record["place"] == "inf"

    def test_local_height_without_point_or_poly(self, maps_dir):
        code, _, err = invoke(["local-height", "--map", str(maps_dir / "squaring.json")])
        assert code == 2
        assert "--point" in err
