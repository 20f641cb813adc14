"""CLI: parsing, exit codes, report formats, determinism."""

import json

import pytest

from capkit import cli
from capkit.cli import (EXIT_CAP, EXIT_OK, EXIT_PARSE, EXIT_UNDETERMINED,
                        main, parse_command, run)
from capkit.errors import GroupSpecError


class TestParsing:
    def test_capability_defaults(self):
        cmd = parse_command(["capability", "cyclic:6"])
        assert cmd.verb == "capability"
        assert cmd.variety == "abelian"
        assert cmd.engine == "auto"

    def test_pair_subgroup(self):
        cmd = parse_command(["pair", "cyclic:6 x cyclic:6",
                             "--subgroup", "gens:(2,0);(0,2)"])
        assert cmd.subgroup == "gens:(2,0);(0,2)"

    def test_variety_flag(self):
        cmd = parse_command(["capability", "abelian:[4,4,4]",
                             "--variety", "PN:1,2"])
        assert cmd.variety == "PN:1,2"

    def test_bad_specs_raise(self):
        with pytest.raises(GroupSpecError):
            parse_command(["capability", "nonsense"])
        with pytest.raises(GroupSpecError):
            parse_command(["capability", "cyclic:6", "--variety", "Q:9"])
        with pytest.raises(GroupSpecError):
            parse_command(["pair", "cyclic:6", "--subgroup", "(2)"])
        with pytest.raises(SystemExit):
            parse_command(["unknownverb", "cyclic:6"])


class TestExitCodes:
    def test_ok(self, capsys):
        assert main(["capability", "cyclic:6"]) == EXIT_OK
        assert "not_capable" in capsys.readouterr().out

    def test_parse_error(self, capsys):
        assert main(["capability", "bogus"]) == EXIT_PARSE

    def test_undetermined(self, capsys):
        assert main(["capability", "dihedral:4", "--variety", "N:2"]) \
            == EXIT_UNDETERMINED

    def test_cap_exceeded(self, capsys):
        assert main(["epicenter", "dihedral:4 x dihedral:4",
                     "--engine", "bar"]) == EXIT_CAP

    def test_pair_verdicts(self, capsys):
        assert main(["pair", "cyclic:6 x cyclic:6",
                     "--subgroup", "gens:(2,0);(0,2)"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "capable" in out
        assert main(["pair", "cyclic:6", "--subgroup", "gens:(2)"]) == EXIT_OK
        assert "not_capable" in capsys.readouterr().out


class TestReports:
    def test_json_schema(self, capsys):
        assert main(["capability", "cyclic:6", "--format", "json"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["schema"] == "capkit/1"
        assert doc["failures"] == 0
        subj = doc["subjects"][0]
        for key in ("spec", "order", "engine", "variety", "epicenter",
                    "verdict", "criterion", "ms"):
            assert key in subj
        assert subj["verdict"] == "not_capable"
        assert subj["epicenter"]["invariant_factors"] == [6]

    def test_json_deterministic(self, capsys):
        main(["analyze", "dihedral:4", "--format", "json"])
        first = capsys.readouterr().out
        main(["analyze", "dihedral:4", "--format", "json"])
        second = capsys.readouterr().out
        assert first == second

    def test_output_file(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert main(["multiplier", "dihedral:4", "--format", "json",
                     "--output", str(out)]) == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["subjects"][0]["multiplier"]["invariant_factors"] == [2]

    def test_text_table_aligned(self, capsys):
        main(["capability", "cyclic:6"])
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("subject")
        assert len(lines) == 2

    def test_analyze_includes_multiplier(self, capsys):
        main(["analyze", "quaternion:8", "--format", "json"])
        doc = json.loads(capsys.readouterr().out)
        assert doc["subjects"][0]["multiplier"]["invariant_factors"] == []

    def test_round_trip_specs(self, capsys):
        from capkit.groups import abelian_structure, center, construct_group
        for spec in ["cyclic:6", "dihedral:4", "cyclic:2 x cyclic:3"]:
            main(["capability", spec, "--format", "json"])
            doc = json.loads(capsys.readouterr().out)
            echoed = doc["subjects"][0]["spec"]
            g1, g2 = construct_group(spec), construct_group(echoed)
            assert g1.order == g2.order
            assert center(g1).order == center(g2).order


class TestVerify:
    def test_classifier_suite(self, capsys):
        assert main(["verify", "classifier"]) == EXIT_OK
        assert "pass" in capsys.readouterr().out

    def test_pairs_suite_small(self, capsys):
        assert main(["verify", "pairs", "--max-order", "20"]) == EXIT_OK

    def test_engines_suite_small(self, capsys):
        assert main(["verify", "engines", "--max-order", "8"]) == EXIT_OK

    def test_products_suite_small(self, capsys):
        # restricted to order <= 8 products; still finds the (C2, C2) witness
        assert main(["verify", "products", "--max-order", "8"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "strict=True" in out
