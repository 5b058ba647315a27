"""Command-line interface, driven through main(argv)."""
from __future__ import annotations

import json

import pytest

from conftest import DIAMOND_TEXT
from rmcif import SearchParams, parse_instance, parse_solution
from rmcif.cli import _build_params, _seeds, _solver_list, _widths, main


@pytest.fixture()
def diamond_file(tmp_path):
    path = tmp_path / "diamond.rmcif"
    path.write_text(DIAMOND_TEXT)
    return path


class TestArgumentHelpers:
    def test_widths(self):
        assert _widths("3") == (3,)
        assert _widths("2,3,4") == (2, 3, 4)

    def test_seeds(self):
        assert _seeds("0:3") == (0, 1, 2, 3)
        assert _seeds("5,7") == (5, 7)
        assert _seeds("4") == (4,)

    def test_solver_list(self):
        assert len(_solver_list("all")) == 13
        assert _solver_list("ls1,ec9") == ("ls1", "ec9")
        with pytest.raises(Exception, match="unknown solver"):
            _solver_list("ls9")

    def test_build_params_overrides(self):
        params = _build_params(None, ["population_size=7", "generation_limit=none"])
        assert params.population_size == 7
        assert params.generation_limit is None

    def test_build_params_config_file(self, tmp_path):
        config = tmp_path / "params.json"
        config.write_text(json.dumps({"tournament_size": 5, "iteration_limit": 9}))
        params = _build_params(str(config), ["tournament_size=2"])
        assert params.tournament_size == 2
        assert params.iteration_limit == 9

    def test_build_params_rejects_unknown_names(self):
        from rmcif import RmcifError

        with pytest.raises(RmcifError, match="unknown parameter names: popsize"):
            _build_params(None, ["popsize=3"])

    def test_defaults_without_flags(self):
        assert _build_params(None, []) == SearchParams()


class TestGenerate:
    def test_writes_parseable_instance(self, tmp_path, capsys):
        out = tmp_path / "gen.rmcif"
        code = main(
            [
                "generate",
                "--width", "2,3",
                "--scenarios", "2",
                "--cap", "1:4",
                "--cost", "0:9",
                "--seed", "11",
                "-o", str(out),
            ]
        )
        assert code == 0
        instance = parse_instance(out.read_text())
        assert instance.network.vertex_count == 7
        assert instance.scenarios.scenario_count == 2

    def test_stdout_default(self, capsys):
        assert main(["generate", "--width", "2", "--layers", "2", "--scenarios", "1"]) == 0
        text = capsys.readouterr().out
        assert text.startswith("p rmcif ")
        parse_instance(text)

    def test_single_width_needs_layers(self, capsys):
        code = main(["generate", "--width", "2", "--scenarios", "1"])
        assert code == 1
        assert "needs --layers" in capsys.readouterr().err

    def test_layers_width_conflict(self, capsys):
        code = main(
            ["generate", "--width", "2,2", "--layers", "3", "--scenarios", "1"]
        )
        assert code == 1
        assert "disagrees" in capsys.readouterr().err

    def test_generation_failure_is_reported(self, capsys):
        code = main(
            [
                "generate",
                "--width", "2,2",
                "--scenarios", "1",
                "--cap", "0:1",
                "--flow", "50",
                "--retries", "2",
            ]
        )
        assert code == 1
        assert "error:" in capsys.readouterr().err


class TestSolve:
    @pytest.mark.parametrize("variant, expected", [("abs", 4), ("dev", 2)])
    def test_solves_to_stdout(self, diamond_file, capsys, variant, expected):
        code = main(
            [
                "solve",
                "--instance", str(diamond_file),
                "--variant", variant,
                "--solver", "ls2",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0].split()[2:4] == ["ls2", str(expected)]

    def test_exact_solver_with_output_file(self, diamond_file, tmp_path, capsys):
        out = tmp_path / "d.sol"
        code = main(
            [
                "solve",
                "--instance", str(diamond_file),
                "--variant", "abs",
                "--solver", "exact",
                "-o", str(out),
            ]
        )
        assert code == 0
        record = parse_solution(out.read_text(), parse_instance(DIAMOND_TEXT))
        assert record.robust_cost == 4
        assert "robust cost 4" in capsys.readouterr().out

    def test_param_flag_reaches_solver(self, diamond_file, capsys):
        code = main(
            [
                "solve",
                "--instance", str(diamond_file),
                "--variant", "dev",
                "--solver", "ec1",
                "--seed", "2",
                "--param", "generation_limit=4",
                "--param", "population_size=4",
            ]
        )
        assert code == 0
        assert capsys.readouterr().out.startswith("o deviation ec1 2 2\n")

    def test_bad_variant_exits_two(self, diamond_file, capsys):
        with pytest.raises(SystemExit) as err:
            main(
                [
                    "solve",
                    "--instance", str(diamond_file),
                    "--variant", "worst",
                    "--solver", "ls1",
                ]
            )
        assert err.value.code == 2
        assert "unknown variant" in capsys.readouterr().err

    def test_malformed_instance_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.rmcif"
        bad.write_text("p rmcif 2 1 1 1\na 1 2\n")
        code = main(
            ["solve", "--instance", str(bad), "--variant", "abs", "--solver", "ls1"]
        )
        assert code == 1
        assert "line 2" in capsys.readouterr().err


class TestExportLp:
    def test_stdout(self, diamond_file, capsys):
        assert main(
            ["export-lp", "--instance", str(diamond_file), "--variant", "dev"]
        ) == 0
        out = capsys.readouterr().out
        assert out.startswith("\\ robust minimum-cost flow model, deviation variant\n")
        assert out.endswith("End\n")

    def test_file_output(self, diamond_file, tmp_path):
        out = tmp_path / "model.lp"
        main(
            [
                "export-lp",
                "--instance", str(diamond_file),
                "--variant", "abs",
                "-o", str(out),
            ]
        )
        assert "Generals" in out.read_text()


class TestBench:
    def test_full_run(self, tmp_path, capsys):
        instances = tmp_path / "set"
        instances.mkdir()
        for seed in (0, 1):
            code = main(
                [
                    "generate",
                    "--width", "2,2",
                    "--scenarios", "2",
                    "--cap", "1:3",
                    "--seed", str(seed),
                    "-o", str(instances / f"i{seed}.rmcif"),
                ]
            )
            assert code == 0
        capsys.readouterr()

        out_csv = tmp_path / "r.csv"
        sols = tmp_path / "sols"
        code = main(
            [
                "bench",
                "--dir", str(instances),
                "--variants", "abs,dev",
                "--solvers", "ls1,ec2",
                "--seeds", "0:1",
                "--out", str(out_csv),
                "--sol-dir", str(sols),
                "--param", "generation_limit=6",
                "--param", "population_size=4",
            ]
        )
        assert code == 0
        table = capsys.readouterr().out
        assert table.splitlines()[0].split()[0] == "variant"
        assert len(out_csv.read_text().splitlines()) == 1 + 2 * 2 * 2 * 2
        assert len(list(sols.glob("*.sol"))) == 16

    def test_no_exact_flag(self, tmp_path, capsys):
        instances = tmp_path / "set"
        instances.mkdir()
        main(
            [
                "generate",
                "--width", "2,2",
                "--scenarios", "1",
                "--cap", "1:2",
                "-o", str(instances / "a.rmcif"),
            ]
        )
        out_csv = tmp_path / "r.csv"
        code = main(
            [
                "bench",
                "--dir", str(instances),
                "--variants", "abs",
                "--solvers", "ls1",
                "--seeds", "0",
                "--no-exact",
                "--out", str(out_csv),
            ]
        )
        assert code == 0
        header, row = out_csv.read_text().splitlines()
        assert row.split(",")[5] == ""
        capsys.readouterr()

    def test_missing_directory_reports_error(self, tmp_path, capsys):
        code = main(
            [
                "bench",
                "--dir", str(tmp_path / "nowhere"),
                "--out", str(tmp_path / "r.csv"),
            ]
        )
        assert code == 1
        assert "error:" in capsys.readouterr().err


def test_repeated_solve_runs_write_identical_files(diamond_file, tmp_path, capsys):
    outputs = []
    for name in ("first.sol", "second.sol"):
        path = tmp_path / name
        main(
            [
                "solve",
                "--instance", str(diamond_file),
                "--variant", "abs",
                "--solver", "ec5",
                "--seed", "42",
                "-o", str(path),
            ]
        )
        outputs.append(path.read_bytes())
    capsys.readouterr()
    assert outputs[0] == outputs[1]
