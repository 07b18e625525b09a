#!/usr/bin/env python3
"""
Tests for the command line through click's runner
"""

import json
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner

# Add package root to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from hypeval.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


class TestEval:
    """eval subcommands"""

    def test_terminating_kummer_point(self, runner):
        """Test 2F1(1, -1; 3; -1) prints 4/3"""
        result = runner.invoke(cli, ["eval", "2f1-neg1", "--upper", "1,-1", "--lower", "3"])
        assert result.exit_code == 0
        assert "4/3" in result.output
        assert "1.333333333" in result.output

    def test_json_report(self, runner):
        """Test the JSON report carries the schema and the exact value"""
        result = runner.invoke(cli, ["--json", "eval", "2f1-neg1", "--upper", "1,-1",
                                     "--lower", "3"])
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["schema"] == 1
        assert data["status"] == "pass"
        assert data["records"][0]["values"]["exact"] == "4/3"

    def test_pfaff_path(self, runner):
        """Test an explicit path choice"""
        result = runner.invoke(cli, ["eval", "2f1-neg1", "--upper", "1/2,2", "--lower", "5/2",
                                     "--path", "pfaff"])
        assert result.exit_code == 0
        assert "0.75" in result.output
        assert "pfaff" in result.output

    def test_gamma_product(self, runner):
        """Test Gamma(1/2)"""
        result = runner.invoke(cli, ["eval", "gamma-product", "--spec", "G(1/2)"])
        assert result.exit_code == 0
        assert "1.7724538509" in result.output

    def test_series_with_point(self, runner):
        """Test a symbolic series evaluated at a point"""
        result = runner.invoke(cli, ["eval", "series", "--upper", "a,-1", "--lower", "b",
                                     "--z", "-1", "--point", "a=1,b=3"])
        assert result.exit_code == 0
        assert "4/3" in result.output

    def test_series_needs_point(self, runner):
        """Test symbols without a point are a usage error"""
        result = runner.invoke(cli, ["eval", "series", "--upper", "a", "--z", "1/2"])
        assert result.exit_code == 2

    def test_parse_error_exit_code(self, runner):
        """Test malformed rationals exit with 2"""
        result = runner.invoke(cli, ["eval", "2f1-neg1", "--upper", "1,x", "--lower", "3"])
        assert result.exit_code == 2
        assert "ParseError" in result.output

    def test_domain_error_exit_code(self, runner):
        """Test a non-positive integer lower parameter exits with 3"""
        result = runner.invoke(cli, ["eval", "2f1-neg1", "--upper", "1/2,1/2", "--lower", "0"])
        assert result.exit_code == 3
        assert "InvalidLowerParameter" in result.output

    def test_low_precision_rejected(self, runner):
        """Test --precision below 53 bits"""
        result = runner.invoke(cli, ["--precision", "20", "eval", "gamma-product",
                                     "--spec", "G(1/2)"])
        assert result.exit_code == 2


class TestPQTable:
    """pq-table"""

    def test_table(self, runner):
        """Test n = -3..1 with the default variants"""
        result = runner.invoke(cli, ["--json", "pq-table", "--n-range", "-3..1"])
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert len(data["records"]) == 5
        row = {r["parameters"]["n"]: r["values"] for r in data["records"]}
        assert row["0"] == {"P": "1/2", "Q": "1/2"}
        assert row["-1"] == {"P": "1", "Q": "0"}

    def test_human_output(self, runner):
        """Test the printed table"""
        result = runner.invoke(cli, ["pq-table", "--n-range", "0..0"])
        assert result.exit_code == 0
        assert "P = 1/2" in result.output

    def test_variant_out_of_range(self, runner):
        """Test THM2 at negative n"""
        result = runner.invoke(cli, ["pq-table", "--n-range", "-2..0", "--variant", "THM2"])
        assert result.exit_code == 2
        assert "VariantOutOfRange" in result.output

    def test_empty_range(self, runner):
        """Test an empty n-range"""
        result = runner.invoke(cli, ["pq-table", "--n-range", "2..1"])
        assert result.exit_code == 2


class TestOrbit:
    """orbit"""

    def test_trivial_label(self, runner):
        """Test m = 0 lists 18 forms and the consistency record"""
        result = runner.invoke(cli, ["--json", "orbit", "--m", "0", "--y", "1,0,0,1,0,0"])
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert len(data["records"]) == 19
        assert data["records"][-1]["name"] == "orbit-consistent"

    def test_label_violation(self, runner):
        """Test the label constraint is a usage error"""
        result = runner.invoke(cli, ["orbit", "--m", "1", "--y", "1,0,0,1,0,0"])
        assert result.exit_code == 2
        assert "LabelConstraintError" in result.output


class TestVerify:
    """verify"""

    def test_certificates(self, runner):
        """Test a short certificate run"""
        result = runner.invoke(cli, ["verify", "certificates", "--n-range", "1..3"])
        assert result.exit_code == 0
        assert "6 passed" in result.output

    def test_special_kind(self, runner):
        """Test one special evaluation with its parameter"""
        result = runner.invoke(cli, ["--json", "verify", "special", "--kind", "specfo1",
                                     "--param", "5/2"])
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["status"] == "pass"
        assert data["records"][0]["residual"] < 1e-10

    def test_deterministic_json(self, runner):
        """Test --deterministic output is identical across runs"""
        args = ["--json", "--deterministic", "verify", "orbit", "--points", "1", "--seed", "3"]
        first = runner.invoke(cli, args)
        second = runner.invoke(cli, args)
        assert first.exit_code == 0
        assert first.output == second.output

    def test_unknown_suite(self, runner):
        """Test click rejects unknown suite names"""
        result = runner.invoke(cli, ["verify", "nothing"])
        assert result.exit_code == 2


class TestConfig:
    """config show/save"""

    def test_show(self, runner):
        """Test the active settings are printed"""
        result = runner.invoke(cli, ["--seed", "11", "config", "show"])
        assert result.exit_code == 0
        assert "seed = 11" in result.output

    def test_save(self, runner):
        """Test saving writes a loadable JSON file"""
        with runner.isolated_filesystem():
            result = runner.invoke(cli, ["--tol", "1e-7", "config", "save", "--path", "cfg.json"])
            assert result.exit_code == 0
            assert json.loads(Path("cfg.json").read_text())["tol"] == 1e-7
