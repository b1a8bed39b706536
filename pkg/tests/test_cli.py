import io
import json

import pytest

from src.agents.structure_agent import StructureAgent
from src.cli import main
from src.models.errors import CertificateFailure


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class TestDiagram:
    def test_ascii_marks(self):
        code, out, err = run("diagram", "--blocks", "2,1,3,2")
        assert code == 0
        assert err == ""
        assert out.count("O") == 5
        assert out.count("x") == 2
        assert out.count("#") == 1
        assert out.endswith("\n")

    def test_base_only(self):
        code, out, _ = run("diagram", "--blocks", "2,1,3,2", "--which", "base")
        assert code == 0
        assert out.count("O") == 5
        assert "x" not in out and "#" not in out

    def test_extended_draws_psi_as_admissible(self):
        _, out, _ = run("diagram", "--blocks", "2,1,3,2", "--which", "extended")
        assert out.count("x") == 3
        assert "#" not in out

    def test_unicode(self):
        _, out, _ = run("diagram", "--blocks", "2,1,3,2", "--format", "unicode")
        assert out.count("⊗") == 5
        assert out.count("⊠") == 1

    def test_json(self):
        code, out, _ = run("diagram", "--blocks", "2,1,3,2", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["n"] == 8
        assert doc["blocks"] == [2, 1, 3, 2]
        marks = {(c["row"], c["col"]): c["mark"] for c in doc["cells"]}
        assert marks[(4, 8)] == "Psi1"
        assert marks[(1, 5)] == "S"
        assert marks[(4, 7)] == "Phi"
        assert len(marks) == 8

    def test_deterministic(self):
        assert run("diagram", "--blocks", "2,2,3,3,2") == run("diagram", "--blocks", "2,2,3,3,2")


class TestInvariants:
    def test_text(self):
        code, out, _ = run("invariants", "--blocks", "1,2,2,1")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "M(1,2) = x(1,2)"
        assert "L(2,4) = x(1,2)*x(2,4) + x(1,3)*x(3,4)" in lines
        assert lines[-1] == "B(4,6) = L(2,4)*L(4,6) / (M(1,2)*M(5,6)*M(2,5))"

    def test_balanced_invariant_is_flagged(self):
        _, out, _ = run("invariants", "--blocks", "2,1,3,1,4,2", "--which", "B")
        flagged = [line for line in out.splitlines() if line.endswith("[torus-balanced]")]
        assert len(flagged) == 1
        assert flagged[0].startswith("B(8,12) = ")

    def test_json(self):
        _, out, _ = run("invariants", "--blocks", "1,2,2,1", "--which", "B", "--format", "json")
        docs = json.loads(out)
        assert len(docs) == 1
        assert docs[0]["kind"] == "B"
        assert docs[0]["root"] == {"row": 4, "col": 6}
        assert docs[0]["correction"] == "none"
        assert [f["exp"] for f in docs[0]["factors"]] == [1, 1, -1, -1, -1]


class TestCheck:
    def test_summary(self):
        code, out, _ = run("check", "--blocks", "2,2,3,3,2", "--trials", "30", "--seed", "7")
        assert code == 0
        assert out == "all invariance checks passed: 9 M, 7 L, 2 A, 3 B\n"

    def test_json_reports(self):
        code, out, _ = run("check", "--blocks", "1,2,2,1", "--trials", "10", "--format", "json")
        assert code == 0
        assert all(report["passed"] for report in json.loads(out))

    def test_zero_trials_rejected(self):
        code, _, err = run("check", "--blocks", "1,2,2,1", "--trials", "0")
        assert code == 2
        assert err.startswith("pinv: error:")


class TestCanonicalize:
    def _write(self, tmp_path, doc):
        path = tmp_path / "point.json"
        path.write_text(json.dumps(doc))
        return str(path)

    def test_worked_point(self, tmp_path):
        entries = [{"row": r, "col": c, "value": v} for (r, c), v in {
            (1, 2): "2", (2, 4): "3", (3, 4): "5", (5, 6): "7", (2, 5): "11", (4, 6): "13"}.items()]
        path = self._write(tmp_path, {"n": 6, "entries": entries})
        code, out, err = run("canonicalize", "--blocks", "1,2,2,1", "--input-file", path)
        assert code == 0, err
        doc = json.loads(out)
        assert doc["coefficients"] == [{"row": 4, "col": 6, "value": "39/77"}]
        assert {"row": 2, "col": 5, "value": "1/1"} in doc["entries"]
        assert [step["i"] for step in doc["transcript"]] == [2, 3, 1, 5, 6]

    def test_missing_input(self):
        code, _, err = run("canonicalize", "--blocks", "1,2,2,1")
        assert code == 2
        assert "needs a point" in err

    def test_coordinate_outside_nilradical(self, tmp_path):
        path = self._write(tmp_path, {"n": 6, "entries": [{"row": 2, "col": 3, "value": "1"}]})
        code, _, err = run("canonicalize", "--blocks", "1,2,2,1", "--input-file", path)
        assert code == 2
        assert "(at root (2,3))" in err

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "point.json"
        path.write_text("{not json")
        code, _, err = run("canonicalize", "--blocks", "1,2,2,1", "--input-file", str(path))
        assert code == 2
        assert "not valid JSON" in err

    def test_unreadable_file(self, tmp_path):
        code, _, _ = run("canonicalize", "--blocks", "1,2,2,1", "--input-file", str(tmp_path / "absent.json"))
        assert code == 2


class TestOrbitDimension:
    def test_text(self):
        code, out, _ = run("orbit-dim", "--blocks", "2,2,3,3,2")
        assert code == 0
        assert out == "dim m = 57, |Psi| = 5, orbit dimension = 52\n"

    def test_json(self):
        _, out, _ = run("orbit-dim", "--blocks", "1,2,2,1", "--format", "json")
        assert json.loads(out) == {"dim_m": 13, "psi": 1, "orbit_dimension": 12}

    def test_batch_file(self, tmp_path):
        path = tmp_path / "blocks.txt"
        path.write_text("# generic orbits\n1,2,2,1\n\n2,1,3,2\n")
        code, out, _ = run("orbit-dim", "--batch-file", str(path))
        assert code == 0
        assert out.splitlines() == [
            "dim m = 13, |Psi| = 1, orbit dimension = 12",
            "dim m = 23, |Psi| = 1, orbit dimension = 22",
        ]


class TestUsageErrors:
    @pytest.mark.parametrize("blocks", ["2,0", "a,b", ",", "-1"])
    def test_bad_blocks(self, blocks):
        code, out, err = run("diagram", "--blocks", blocks)
        assert code == 2
        assert out == ""
        assert err.startswith("pinv: error:")

    def test_missing_blocks(self):
        code, _, err = run("diagram")
        assert code == 2
        assert "--blocks" in err

    def test_negative_seed(self):
        code, _, _ = run("check", "--blocks", "1,2,2,1", "--seed", "-1")
        assert code == 2

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as excinfo:
            run("transmogrify", "--blocks", "1,2")
        assert excinfo.value.code == 2

    def test_consistency_errors_exit_like_input_errors(self, monkeypatch):
        def broken(self, sizes):
            raise CertificateFailure("no base root in the column of gamma4", (4, 6))

        monkeypatch.setattr(StructureAgent, "analyze", broken)
        code, out, err = run("diagram", "--blocks", "1,2,2,1")
        assert code == 2
        assert out == ""
        assert err == "pinv: error: no base root in the column of gamma4 (at root (4,6))\n"
