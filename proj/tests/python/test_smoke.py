"""Smoke tests for the nilprop python bindings and the CLI."""

import json
import math
import os
import subprocess

import pytest

import nilprop


def test_arith_basics():
    assert nilprop.factorize(12) == [(2, 2), (3, 1)]
    assert nilprop.factorize(1) == []
    assert nilprop.tau(12) == 6
    assert nilprop.sigma(6) == 12
    assert nilprop.s2(12) == 21
    assert nilprop.nth_prime(25) == 97
    assert nilprop.is_prime(97)
    with pytest.raises(ValueError):
        nilprop.tau(0)


def test_rational_type():
    r = nilprop.j_dihedral(6)
    assert str(r) == "13/16"
    assert r.num == 13
    assert r.den == 16
    assert float(r) == pytest.approx(0.8125)
    assert r == nilprop.Rational(13, 16)


def test_family_formulas():
    assert str(nilprop.j_family("cpcqn:p=11,q=2,n=2")) == "15/16"
    assert str(nilprop.j_family("cpcqn:p=5,q=3,n=4")) == "13/14"
    assert str(nilprop.j_family("cqcpc4:q=3,p=7")) == "29/40"
    assert nilprop.l_dihedral(6) == 16
    assert nilprop.nil_dihedral(6) == 13
    assert str(nilprop.j_dihedral_by_order(12)) == "27/34"
    assert str(nilprop.limit_value("dihedral-3p")) == "3/4"
    rows = nilprop.limit_table("dihedral-p", [5, 7, 11])
    assert str(rows[0]["j"]) == "7/8"
    assert str(rows[0]["gap"]) == "1/8"
    with pytest.raises(nilprop.SpecParseError):
        nilprop.j_family("octahedral:n=3")
    with pytest.raises(ValueError):
        nilprop.j_family("dihedral:n=0")


def test_oracle_roundtrip():
    g = nilprop.build_dihedral(6)
    assert g.order == 12
    lattice = nilprop.enumerate_subgroups(g)
    assert lattice.count() == 16
    assert lattice.nilpotent_count() == 13
    assert str(nilprop.j_oracle(g)) == "13/16"
    assert str(nilprop.cyclicity_degree(g)) == "5/8"
    assert len(nilprop.center(g)) == 2
    data = json.loads(lattice.to_json())
    assert data["subgroup_count"] == 16

    dic = nilprop.build_dicyclic(5)
    assert nilprop.enumerate_subgroups(dic).count() == 10

    with pytest.raises(nilprop.ResourceLimitExceeded):
        nilprop.build_dihedral(500)


def test_density_greedy():
    r = nilprop.approximate_target(0.5, m=2, epsilon=1e-3)
    assert math.exp(-1e-3) * 0.5 <= r.product <= math.exp(1e-3) * 0.5
    assert r.chosen[0] >= 2

    assert str(nilprop.j_closed_form(2, 3)) == "27/34"
    exact = nilprop.approximate_target(27.0 / 34.0, m=2, epsilon=1e-9)
    assert list(exact.chosen) == [2]

    with pytest.raises(nilprop.BudgetExceeded):
        nilprop.approximate_target(0.01, m=2, epsilon=1e-3, max_terms=100)


def test_stats_pipeline():
    assert nilprop.normal_cdf(0.0) == 0.5
    assert nilprop.normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)
    assert nilprop.ks_p_value(0.014614, 1000) == pytest.approx(0.9832, abs=0.005)

    pop = nilprop.build_population(10_000)
    assert len(pop.values) == 5_000
    assert 0.0 < pop.mu <= 1.0

    report = nilprop.run_experiment(10_000, [30, 100], replications=100, seed=7)
    assert len(report.per_size) == 2
    assert all(0.0 <= sr.p_value <= 1.0 for sr in report.per_size)

    again = nilprop.run_experiment(10_000, [30, 100], replications=100, seed=7, threads=3)
    assert report.per_size[0].z_values == again.per_size[0].z_values


def test_simulation_outputs(tmp_path):
    report = nilprop.run_experiment(1_000, [30], replications=50, seed=1)
    files = nilprop.write_simulation_outputs(report, str(tmp_path), svg=True)
    names = {os.path.basename(f) for f in files}
    assert names == {"z_values_30.csv", "hist_30.csv", "qq_30.csv", "plots_30.svg",
                     "ks_summary.csv"}
    summary = (tmp_path / "ks_summary.csv").read_text().splitlines()
    assert summary[0] == "size,D,p"
    assert summary[1].startswith("30,")


# --- CLI surface (exit codes are part of the contract) -------------------------

CLI = os.environ.get("NILPROP_CLI")

requires_cli = pytest.mark.skipif(CLI is None, reason="NILPROP_CLI not set")


def run_cli(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


@requires_cli
def test_cli_family():
    done = run_cli("family", "dihedral:n=6")
    assert done.returncode == 0
    payload = json.loads(done.stdout)
    assert payload["command"] == "family"
    assert payload["results"]["J"] == {"num": "13", "den": "16", "decimal": "0.8125"}
    assert payload["results"]["L"] == 16

    assert run_cli("family", "dihedral:n=0").returncode == 3
    assert run_cli("family", "nonsense").returncode == 2
    assert run_cli("family", "cpcqn:p=11,q=2,n=2").returncode == 0


@requires_cli
def test_cli_oracle():
    done = run_cli("oracle", "dicyclic:n=5", "--verify")
    assert done.returncode == 0
    payload = json.loads(done.stdout)
    assert payload["results"]["L"] == 10
    assert payload["results"]["verify"]["match"] is True

    for spec in ("dihedral:n=6", "cpc4:p=5", "cp2c4:p=3", "cpq2n:p=3,n=3",
                 "cpcqn:p=7,q=3,n=2", "dihedral-order:N=12", "dicyclic:n=6"):
        assert run_cli("oracle", spec, "--verify").returncode == 0, spec

    assert run_cli("oracle", "dihedral:n=300").returncode == 5
    # no oracle construction exists for this family
    assert run_cli("oracle", "cqcpc4:q=3,p=7").returncode == 3


@requires_cli
def test_cli_density():
    done = run_cli("density", "--target", "1", "--m", "2", "--eps", "1e-6")
    assert done.returncode == 0
    payload = json.loads(done.stdout)
    assert payload["results"]["chosen"] == []
    assert payload["results"]["product"] == 1.0

    assert run_cli("density", "--target", "1.5").returncode == 2
    exhausted = run_cli("density", "--target", "0.01", "--eps", "1e-3",
                        "--max-terms", "100")
    assert exhausted.returncode == 6
    payload = json.loads(exhausted.stdout)
    assert payload["results"]["converged"] is False
    assert payload["results"]["terms_scanned"] == 100


@requires_cli
def test_cli_simulate(tmp_path):
    out = tmp_path / "sim"
    done = run_cli("simulate", "--max-order", "10000", "--sizes", "30,100",
                   "--reps", "100", "--seed", "9", "--out", str(out))
    assert done.returncode == 0
    assert (out / "ks_summary.csv").exists()
    assert (out / "z_values_30.csv").exists()
    assert (out / "plots_100.svg").exists()

    assert run_cli("simulate", "--max-order", "5", "--out", str(out)).returncode == 2
