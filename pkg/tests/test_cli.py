import json

import pytest

from qcrystals.cli import UsageError, main, parse_tableau, parser, settings
from qcrystals.config import MAX_NODES_ENV
from qcrystals.lowest_weight import XiDefect
from qcrystals.tableaux import ShiftedTableau

EXAMPLE = "[3,3,3,3,2],[2,2,1],[1]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestInput:
    def test_row_list(self):
        T = parse_tableau(EXAMPLE, 3)
        assert T.rows == ((3, 3, 3, 3, 2), (2, 2, 1), (1,))

    def test_json_and_file(self, tmp_path):
        data = {"n": 3, "rows": [[3, 2], [1]]}
        assert parse_tableau(json.dumps(data), None) == ShiftedTableau.from_json(data)
        path = tmp_path / "t.json"
        path.write_text(json.dumps(data))
        assert parse_tableau(f"@{path}", None).rows == ((3, 2), (1,))

    def test_errors(self):
        with pytest.raises(UsageError):
            parse_tableau("[3,2]", None)
        with pytest.raises(UsageError):
            parse_tableau("[3,2", 3)


class TestSettings:
    def test_precedence(self, monkeypatch):
        monkeypatch.setenv(MAX_NODES_ENV, "77")
        args = parser().parse_args(["validate", "--tableau", "[1]", "--n", "2"])
        assert settings(args)["max_nodes"] == 77
        args = parser().parse_args(["--max-nodes", "5", "-vv", "validate", "--tableau", "[1]", "--n", "2"])
        conf = settings(args)
        assert conf["max_nodes"] == 5
        assert conf["log_level"] == 10

    def test_bad_cap(self, capsys):
        code, _, err = run(capsys, "--max-nodes", "0", "validate", "--tableau", "[1]", "--n", "2")
        assert code == 2
        assert "max-nodes" in err


class TestCommands:
    def test_validate(self, capsys):
        code, out, _ = run(capsys, "validate", "--tableau", EXAMPLE, "--n", "3")
        assert code == 0
        assert json.loads(out)["valid"] is True
        code, out, _ = run(capsys, "validate", "--tableau", "[2,3],[1]", "--n", "3")
        assert code == 1
        assert json.loads(out)["violations"][0]["kind"] == "type-U"

    def test_validate_largeness(self, capsys):
        code, out, _ = run(capsys, "validate", "--tableau", EXAMPLE, "--n", "3")
        assert json.loads(out)["largeness"] == "dual_marginally_large"
        code, out, _ = run(capsys, "validate", "--tableau", "[3,3,3,3,3,2],[2,2,1],[1]", "--n", "3",
                           "--format", "text")
        assert code == 0
        assert out.splitlines() == ["valid: yes", "largeness: dual_large"]
        code, out, _ = run(capsys, "validate", "--tableau", "[2,3],[1]", "--n", "3", "--format", "text")
        assert code == 1
        assert out.splitlines()[:2] == ["valid: no", "largeness: not_dual_large"]
        assert out.splitlines()[2].startswith("type-U:")

    def test_act_limit(self, capsys):
        code, out, _ = run(capsys, "act", "--tableau", EXAMPLE, "--n", "3", "--ops", "e1", "--mode", "limit")
        assert code == 0
        assert json.loads(out) == {"n": 3, "rows": [[3, 3, 3, 3, 3, 2], [2, 2, 1, 1], [1]]}

    def test_act_vanishes(self, capsys):
        code, out, _ = run(capsys, "act", "--tableau", EXAMPLE, "--n", "3", "--ops", "f1")
        assert code == 0
        assert json.loads(out) is None

    def test_orbit(self, capsys):
        code, out, _ = run(capsys, "orbit", "--tableau", EXAMPLE, "--n", "3", "--ops", "e2,f2,f1,e1")
        steps = json.loads(out)
        assert [s["op"] for s in steps] == [None, "e2", "f2", "f1"]
        assert steps[-1]["tableau"] is None

    def test_graph_json(self, capsys):
        code, out, _ = run(capsys, "graph", "--shape", "1", "--n", "3")
        assert code == 0
        data = json.loads(out)
        assert len(data["nodes"]) == 3
        assert data["kind"] == "finite"

    def test_graph_dot_file(self, capsys, tmp_path):
        path = tmp_path / "g.dot"
        code, out, _ = run(capsys, "graph", "--shape", "2,1", "--n", "3", "--format", "dot", "--out", str(path))
        assert code == 0 and out == ""
        assert "digraph" in path.read_text()

    def test_graph_limit(self, capsys):
        code, out, _ = run(capsys, "graph", "--mode", "limit", "--n", "2", "--depth", "2", "--dirs", "e")
        assert code == 0
        assert json.loads(out)["truncated"] is True

    def test_character(self, capsys):
        code, out, _ = run(capsys, "character", "--n", "2", "--depth", "3")
        lines = out.splitlines()
        assert lines[0] == "# (1+e^(a1))/(1-e^(a1))"
        assert lines[1:] == ["weight\tcoefficient", "0\t1", "1\t2", "2\t2", "3\t2"]
        code, out, _ = run(capsys, "character", "--formula", "sdt", "--n", "2", "--shape", "1")
        assert out.splitlines()[1:] == ["0,1\t1", "1,0\t1"]

    def test_xi(self, capsys):
        code, out, _ = run(capsys, "xi", "--n", "5", "--roots", "2-3,2-4,1-4,1-5", "--trace")
        data = json.loads(out)
        assert data["tableau"]["rows"][0] == [5] * 12 + [4, 5]
        assert len(data["trace"]) == 4
        tableau = json.dumps(data["tableau"])
        code, out, _ = run(capsys, "xi", "--n", "5", "--inverse", "--tableau", tableau)
        assert json.loads(out) == {"roots": "1-4,1-5,2-3,2-4"}

    def test_cut_verify(self, capsys, tmp_path):
        dot = tmp_path / "cut.dot"
        code, out, _ = run(capsys, "cut", "--n", "3", "--lam", "3,1,0", "--k", "3", "--verify", "--dot", str(dot))
        assert code == 0
        assert json.loads(out)["isomorphic"] is True
        assert dot.exists()
        code, out, _ = run(capsys, "cut", "--n", "3", "--lam", "1,0,0", "--k", "1", "--verify")
        assert code == 1

    def test_cut_mu(self, capsys):
        code, out, _ = run(capsys, "cut", "--n", "3", "--mu=-1,0,0")
        assert code == 0
        assert len(json.loads(out)["nodes"]) == 6

    def test_axioms(self, capsys, tmp_path):
        code, out, _ = run(capsys, "graph", "--shape", "3,1", "--n", "3")
        path = tmp_path / "g.json"
        path.write_text(out)
        code, out, _ = run(capsys, "axioms", "--graph", str(path), "--seminormal")
        assert code == 0
        assert json.loads(out)["ok"] is True


class TestUsageErrors:
    @pytest.mark.parametrize("argv", [
        ["graph", "--n", "3"],
        ["graph", "--mode", "limit", "--n", "3"],
        ["graph", "--mode", "limit", "--n", "3", "--depth", "2", "--dirs", "x"],
        ["character", "--formula", "sdt", "--n", "3"],
        ["xi", "--n", "3", "--inverse"],
        ["xi", "--n", "3", "--roots", "3-1"],
        ["cut", "--n", "3"],
        ["cut", "--n", "2", "--lam", "3,1,0", "--k", "3"],
        ["cut", "--n", "3", "--mu=-1,0,0", "--verify"],
        ["act", "--tableau", "[3,2]", "--n", "3", "--ops", "g1"],
    ])
    def test_exit_two(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2
        assert err.startswith("qcrystals: error:")

    def test_missing_graph_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "axioms", "--graph", str(tmp_path / "none.json"))
        assert code == 2

    def test_argparse_rejects(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["graph"])
        assert info.value.code == 2

    def test_guard(self, capsys):
        code, _, err = run(capsys, "--max-nodes", "5", "graph", "--shape", "3,1", "--n", "3")
        assert code == 1
        assert "max_nodes" in err


class TestInternalFailures:
    def test_xi_defect(self, capsys, monkeypatch):
        def broken(*args, **kwargs):
            raise XiDefect("weight gain (1, 0, -1) is not the root 1-2\nsecond line")

        monkeypatch.setattr("qcrystals.cli.xi_forward", broken)
        code, out, err = run(capsys, "xi", "--n", "3", "--roots", "1-2")
        assert code == 1
        assert out == ""
        assert err.strip().splitlines() == [
            "qcrystals: internal check failed: weight gain (1, 0, -1) is not the root 1-2"]

    def test_assertion(self, capsys, monkeypatch):
        def broken(*args, **kwargs):
            raise AssertionError()

        monkeypatch.setattr("qcrystals.cli.xi_inverse", broken)
        code, _, err = run(capsys, "xi", "--n", "3", "--inverse", "--tableau", "[3,3,3],[2,2],[1]")
        assert code == 1
        assert err.strip() == "qcrystals: internal check failed: AssertionError"
