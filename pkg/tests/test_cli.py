import json
import os
import subprocess
import sys

import pytest

from knotplumb.lattice import verify_embedding
from knotplumb.plumbing import WeightedTree, gram_matrix


def run_cli(*args, env_extra=None, cwd=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "knotplumb", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd,
    )


def write_chain(path, k):
    tree = WeightedTree(
        {i: -2 for i in range(k)}, [(i, i + 1) for i in range(k - 1)]
    )
    path.write_text(tree.to_json())


class TestContfrac:
    def test_expand(self):
        assert run_cli("contfrac", "7/2").stdout.strip() == "[4,2]"

    def test_dual(self):
        assert run_cli("contfrac", "7/2", "--dual").stdout.strip() == "[2,2,3]"

    def test_eval(self):
        assert run_cli("contfrac", "--eval", "2,2,2").stdout.strip() == "4/3"

    def test_json(self):
        out = json.loads(run_cli("contfrac", "7/2", "--json").stdout)
        assert out == {"value": "7/2", "coefficients": [4, 2]}

    def test_malformed_exits_one(self):
        res = run_cli("contfrac", "7/0")
        assert res.returncode == 1 and "error" in res.stderr
        assert run_cli("contfrac", "14/4").returncode == 1


class TestGraph:
    def test_reduced_json(self):
        res = run_cli("graph", "--pairs", "2,3,2,17", "--n", "36", "--reduced", "--json")
        obj = json.loads(res.stdout)
        assert obj["rank"] == 8 and obj["det"] == 36 and obj["negative_definite"]
        tree = WeightedTree.from_json(json.dumps(obj["tree"]))
        assert len(tree) == 8

    def test_non_algebraic_exit_1(self):
        assert run_cli("graph", "--pairs", "2,3,2,11", "--n", "30").returncode == 1

    def test_negative_n_exit_2(self):
        res = run_cli("graph", "--pairs", "2,3,2,17", "--n", "33", "--reduced")
        assert res.returncode == 2

    def test_dot_roles(self):
        res = run_cli("graph", "--pairs", "2,3,2,17", "--n", "36", "--closed-form", "--dot")
        assert 'role="node2"' in res.stdout and "--" in res.stdout

    def test_default_text(self):
        res = run_cli("graph", "--pairs", "2,3", "--n", "8")
        assert "rank 4" in res.stdout and "det 8" in res.stdout


class TestEmbed:
    def test_spec_found(self, tmp_path):
        res = run_cli(
            "embed", "--pairs", "2,3,2,17", "--n", "36", "--out", str(tmp_path)
        )
        assert res.returncode == 0
        path = tmp_path / "witness_2_3_2_17_36.json"
        obj = json.loads(path.read_text())
        assert obj["rank"] == 8
        from knotplumb.cabling import CableTower, SurgerySpec, closed_form_two_iter

        spec = SurgerySpec(CableTower(((2, 3), (2, 17))), 36)
        gram = gram_matrix(closed_form_two_iter(spec))
        assert verify_embedding(gram, [tuple(v) for v in obj["vectors"]])

    def test_chain4_rank4_exit_3(self, tmp_path):
        f = tmp_path / "chain4.json"
        write_chain(f, 4)
        assert run_cli("embed", str(f), "--rank", "4").returncode == 3

    def test_chain3_enumerate(self, tmp_path):
        f = tmp_path / "chain3.json"
        write_chain(f, 3)
        res = run_cli("embed", str(f), "--rank", "3", "--enumerate")
        assert res.returncode == 0
        assert "1 embedding class(es)" in res.stdout

    def test_not_negative_definite_exit_1(self, tmp_path):
        f = tmp_path / "bad.json"
        f.write_text(WeightedTree({0: 0}, []).to_json())
        assert run_cli("embed", str(f)).returncode == 1

    def test_budget_exit_4(self, tmp_path):
        res = run_cli(
            "embed", "--pairs", "2,3,2,17", "--n", "38", "--budget", "2",
            "--out", str(tmp_path),
        )
        assert res.returncode == 4

    def test_env_out_dir(self, tmp_path):
        res = run_cli(
            "embed", "--pairs", "2,3,2,17", "--n", "36",
            env_extra={"KNOTPLUMB_OUT": str(tmp_path)},
        )
        assert res.returncode == 0
        assert (tmp_path / "witness_2_3_2_17_36.json").exists()


SWEEP_ARGS = ["--p1", "2", "--k1", "1", "--p2", "2", "--k2-max", "9", "--N", "2,3"]


class TestSweepCli:
    def test_csv_deterministic_across_workers(self, tmp_path):
        outs = []
        for workers in ("1", "2"):
            res = run_cli(
                "sweep", *SWEEP_ARGS, "--workers", workers, "--out", str(tmp_path)
            )
            assert res.returncode == 0
            outs.append(res.stdout)
        assert outs[0] == outs[1]
        header = outs[0].split("\n", 1)[0]
        assert header == "p1,a1,p2,a2,n,N,rank,verdict,witness_file,nodes,ms"

    def test_csv_file_and_witnesses(self, tmp_path):
        res = run_cli(
            "sweep", "--p1", "2", "--k1", "1", "--p2", "2", "--k2-max", "8",
            "--N", "2", "--csv", str(tmp_path / "rows.csv"), "--out", str(tmp_path),
        )
        assert res.returncode == 0
        text = (tmp_path / "rows.csv").read_text()
        assert "ObstructionPasses" in text
        assert (tmp_path / "witness_2_3_2_17_36.json").exists()

    def test_invalid_ranges_exit_1(self):
        assert run_cli("sweep", "--p1", "1", "--k1", "1").returncode == 1
        assert run_cli("sweep", "--N", "x").returncode == 1


class TestAuditCli:
    def test_derived_perfect_exit_0(self, tmp_path):
        res = run_cli("audit", *SWEEP_ARGS, "--out", str(tmp_path))
        assert res.returncode == 0, res.stdout + res.stderr
        report = json.loads(res.stdout)
        assert report["perfect"] and report["family1_form"] == "derived"

    def test_printed_form_disagrees(self, tmp_path):
        res = run_cli(
            "audit", *SWEEP_ARGS, "--family-form", "printed", "--out", str(tmp_path)
        )
        assert res.returncode == 5
        report = json.loads(res.stdout)
        assert report["disagreements"]


class TestConfig:
    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("shenanigans=1\n")
        res = run_cli("--config", str(cfg), "contfrac", "7/2")
        assert res.returncode == 1 and "unknown config key" in res.stderr

    def test_config_supplies_out_dir(self, tmp_path):
        cfg = tmp_path / "ok.cfg"
        cfg.write_text(f"# comment line\nout={tmp_path}\nworkers=1\n")
        res = run_cli("--config", str(cfg), "embed", "--pairs", "2,3,2,17", "--n", "36")
        assert res.returncode == 0
        assert (tmp_path / "witness_2_3_2_17_36.json").exists()

    def test_flag_overrides_config(self, tmp_path):
        cfg = tmp_path / "ok.cfg"
        other = tmp_path / "elsewhere"
        cfg.write_text(f"out={tmp_path}\n")
        res = run_cli(
            "--config", str(cfg), "embed", "--pairs", "2,3,2,17", "--n", "36",
            "--out", str(other),
        )
        assert res.returncode == 0
        assert (other / "witness_2_3_2_17_36.json").exists()
        assert not (tmp_path / "witness_2_3_2_17_36.json").exists()
