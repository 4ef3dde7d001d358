import pytest

from percoplane.cli import main
from percoplane.gallery import square, theta
from percoplane.graphspec import graph_to_text

SQUARE_SPEC = graph_to_text(square())

BAD_P_SPEC = """
vertices:
  - {id: 0, x: 0, y: 0}
  - {id: 1, x: 1, y: 0}
edges:
  - {id: 0, tail: 0, head: 1, oriented: false, p: 1.5}
"""


@pytest.fixture
def square_file(tmp_path):
    path = tmp_path / "square.graph"
    path.write_text(SQUARE_SPEC, encoding="utf-8")
    return str(path)


def test_enumerate_reports_connection_probabilities(square_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["enumerate", "--spec", square_file, "--out", str(out)]) == 0
    text = (out / "report.txt").read_text()
    assert "P(U->W): 7/16" in text  # two independent 2-edge arcs: 1 - (3/4)^2
    assert (out / "connection.csv").exists()


def test_square_connection_probability_value():
    # independent check of the value asserted in the CLI report above
    from fractions import Fraction
    from percoplane.verify import enumerate_measure
    g = square()
    dist = enumerate_measure(
        g, None, [("uw", lambda ctx: int(2 in ctx.reach(frozenset({0}))))])
    assert dist.probability((1,)) == Fraction(7, 16)


def test_enumerate_rejects_bad_probability(tmp_path, capsys):
    path = tmp_path / "bad.graph"
    path.write_text(BAD_P_SPEC, encoding="utf-8")
    assert main(["enumerate", "--spec", str(path)]) == 2
    assert "probability" in capsys.readouterr().err


def test_unknown_subcommand_exits_2(capsys):
    assert main(["frobnicate"]) == 2


def test_dual_subcommand(square_file, tmp_path):
    out = tmp_path / "dualout"
    assert main(["dual", "--spec", square_file, "--out", str(out)]) == 0
    assert (out / "dual.graph").exists()
    assert (out / "normalized.graph").exists()
    assert "boundary_vertices: 4" in (out / "report.txt").read_text()


def test_verify_duality_square(square_file, capsys):
    assert main(["verify", "duality", "--spec", square_file]) == 0
    out = capsys.readouterr().out
    assert "verdict: holds-complemented" in out
    assert "count.holds_as_stated: 0" in out


def test_verify_theorem4_square(square_file, capsys):
    assert main(["verify", "theorem4", "--spec", square_file]) == 0
    assert "verdict: pass" in capsys.readouterr().out


def test_verify_theorem3_cli(tmp_path, capsys):
    path = tmp_path / "theta.graph"
    path.write_text(graph_to_text(theta()), encoding="utf-8")
    code = main(["verify", "theorem3", "--spec", str(path),
                 "--S", "0", "--T", "2", "--kmax", "2"])
    assert code == 0
    assert "verdict: pass" in capsys.readouterr().out


def test_sample_mcmc_reproducible(square_file, tmp_path):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    for out in (out1, out2):
        assert main(["sample-mcmc", "--spec", square_file, "--steps", "60",
                     "--seed", "7", "--out", str(out)]) == 0
    assert (out1 / "report.txt").read_bytes() == (out2 / "report.txt").read_bytes()
    assert (out1 / "samples.csv").read_bytes() == (out2 / "samples.csv").read_bytes()


def test_simulate_contact_cli(tmp_path):
    out = tmp_path / "sim"
    assert main(["simulate-contact", "--lambda", "2", "--delta", "1",
                 "--t", "1", "--window", "3", "--reps", "2000",
                 "--seed", "5", "--targets", "0", "--out", str(out)]) == 0
    rows = (out / "joint.csv").read_text().strip().splitlines()
    assert rows[0] == "outcome,count,probability,stderr"
    assert len(rows) == 3  # header + two outcomes


def test_verify_conjecture1_exact_cli(capsys):
    code = main(["verify", "conjecture1", "--lambda", "1", "--delta", "1",
                 "--t", "1", "--n", "1", "--m", "1",
                 "--mode", "exact-discrete", "--N", "2"])
    assert code == 0
    out = capsys.readouterr().out
    assert "lhs: 1/16" in out
    assert "verdict: pass" in out


def test_verify_conjecture1_montecarlo_cli(capsys):
    code = main(["verify", "conjecture1", "--lambda", "2", "--delta", "1",
                 "--t", "2", "--n", "1", "--m", "1", "--reps", "20000",
                 "--seed", "11", "--window", "8"])
    assert code == 0
    assert "verdict: pass" in capsys.readouterr().out
