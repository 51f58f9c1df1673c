"""Scenario engine, benchmark plumbing, and the command-line interface."""

import pytest

from poabe import cli, harness


# -- scenarios ------------------------------------------------------------

def test_happy_case_pays_solver_and_recovers_plaintext():
    r = harness.run_happy_case(n_attrs=3, seed=1)
    assert r.recovered is True
    assert r.payoffs["dcs"] == 10
    assert r.payoffs["du"] == -10
    assert set(r.task_states.values()) == {"finalized"}


def test_happy_case_single_attribute():
    r = harness.run_happy_case(n_attrs=1, seed=2)
    assert r.recovered is True


def test_happy_case_deterministic_log():
    a = harness.run_happy_case(seed=7)
    b = harness.run_happy_case(seed=7)
    assert a.log == b.log
    assert a.log_hash == b.log_hash
    c = harness.run_happy_case(seed=8)
    assert c.log_hash != a.log_hash


def test_challenge_honest_solver_wins():
    r = harness.run_challenge_case("honest", seed=3)
    assert r.recovered is True
    assert r.payoffs["challenger"] == -1
    assert r.payoffs["dcs"] == 11


def test_challenge_corrupt_solver_slashed():
    r = harness.run_challenge_case("corrupt_T", seed=4)
    assert r.recovered is False
    assert r.payoffs["dcs"] == -5
    assert r.payoffs["du"] == 5
    assert "slashed" in r.task_states.values()


def test_challenge_random_t_all_responds_rejected():
    r = harness.run_challenge_case("random_T", seed=5)
    assert r.payoffs["dcs"] == -5
    assert any("rejected 2 times" in note for note in r.notes)


def test_self_challenge_never_profits():
    r = harness.run_self_challenge_case(seed=6)
    assert r.payoffs["honest_vs_no_challenge"] == 0
    assert r.payoffs["corrupt_vs_no_challenge"] < 0


def test_unknown_strategy_rejected():
    with pytest.raises(harness.ScenarioFailure):
        harness.run_challenge_case("lazy", seed=1)


# -- benchmark plumbing ---------------------------------------------------

def test_bench_structure(tmp_path):
    report = harness.bench(grid=(1, 2), reps=2, seed=0, out_dir=tmp_path)
    for alg in ("keygen", "encapsulate", "tkgen", "transform", "retrieve"):
        for n in (1, 2):
            assert len(report.samples[alg][n]) == 2
            assert all(s > 0 for s in report.samples[alg][n])
    csv = (tmp_path / "bench.csv").read_text()
    assert csv.splitlines()[0] == "n_attrs,algorithm,rep,seconds"
    assert len(csv.splitlines()) == 1 + 5 * 2 * 2
    assert (tmp_path / "bench.txt").read_text().startswith("n_attrs")


# -- command line ---------------------------------------------------------

def run_cli(*argv):
    return cli.main([str(a) for a in argv])


def test_cli_full_pipeline(tmp_path, capsys):
    keys = tmp_path / "keys"
    plain = tmp_path / "plain.bin"
    plain.write_bytes(b"cli pipeline payload")
    assert run_cli("setup", "--seed", 1, "--out", keys) == 0
    assert run_cli("keygen", "--pk", keys / "pk.bin", "--msk", keys / "msk.bin",
                   "--attrs", "A,B", "--seed", 2, "--out", tmp_path / "sk.bin") == 0
    assert run_cli("encrypt", "--pk", keys / "pk.bin", "--policy", "A AND B",
                   "--in", plain, "--seed", 3, "--out", tmp_path / "pkg.bin") == 0
    assert run_cli("tkgen", "--sk", tmp_path / "sk.bin", "--seed", 4,
                   "--out-tk", tmp_path / "tk.bin",
                   "--out-rk", tmp_path / "rk.bin") == 0
    assert run_cli("transform", "--tk", tmp_path / "tk.bin",
                   "--package", tmp_path / "pkg.bin",
                   "--out", tmp_path / "t.bin") == 0
    assert run_cli("retrieve", "--rk", tmp_path / "rk.bin",
                   "--package", tmp_path / "pkg.bin",
                   "--transformed", tmp_path / "t.bin",
                   "--out", tmp_path / "out.bin") == 0
    assert (tmp_path / "out.bin").read_bytes() == b"cli pipeline payload"


def test_cli_transform_unsatisfied_exit_code(tmp_path):
    keys = tmp_path / "keys"
    plain = tmp_path / "plain.bin"
    plain.write_bytes(b"x")
    run_cli("setup", "--seed", 1, "--out", keys)
    run_cli("keygen", "--pk", keys / "pk.bin", "--msk", keys / "msk.bin",
            "--attrs", "C", "--seed", 2, "--out", tmp_path / "sk.bin")
    run_cli("encrypt", "--pk", keys / "pk.bin", "--policy", "A AND B",
            "--in", plain, "--seed", 3, "--out", tmp_path / "pkg.bin")
    run_cli("tkgen", "--sk", tmp_path / "sk.bin", "--seed", 4,
            "--out-tk", tmp_path / "tk.bin", "--out-rk", tmp_path / "rk.bin")
    assert run_cli("transform", "--tk", tmp_path / "tk.bin",
                   "--package", tmp_path / "pkg.bin",
                   "--out", tmp_path / "t.bin") == cli.EXIT_UNSATISFIED


def test_cli_bad_policy_exit_code(tmp_path):
    keys = tmp_path / "keys"
    run_cli("setup", "--seed", 1, "--out", keys)
    (tmp_path / "p").write_bytes(b"x")
    assert run_cli("encrypt", "--pk", keys / "pk.bin", "--policy", "A AND",
                   "--in", tmp_path / "p", "--seed", 1,
                   "--out", tmp_path / "c") == cli.EXIT_POLICY


def test_cli_missing_file_exit_code(tmp_path):
    assert run_cli("keygen", "--pk", tmp_path / "nope.bin",
                   "--msk", tmp_path / "nope2.bin", "--attrs", "A",
                   "--out", tmp_path / "sk.bin") == cli.EXIT_MISSING


def test_cli_store_roundtrip_and_errors(tmp_path, capsys):
    blob = tmp_path / "blob.bin"
    blob.write_bytes(b"store me")
    assert run_cli("store-put", "--root", tmp_path / "store", "--in", blob) == 0
    digest = capsys.readouterr().out.strip()
    assert run_cli("store-get", "--root", tmp_path / "store", "--hash", digest,
                   "--out", tmp_path / "back.bin") == 0
    assert (tmp_path / "back.bin").read_bytes() == b"store me"
    assert run_cli("store-get", "--root", tmp_path / "store", "--hash", "00" * 32,
                   "--out", tmp_path / "x.bin") == cli.EXIT_MISSING


def test_cli_ledger_flow(tmp_path, capsys):
    state = tmp_path / "ledger.bin"
    assert run_cli("ledger-init", "--state", state) == 0
    assert run_cli("ledger-mint", "--state", state,
                   "--account", "alice", "--amount", "20") == 0
    assert run_cli("ledger-register-dcs", "--state", state,
                   "--account", "alice", "--deposit", "5") == 0
    capsys.readouterr()
    assert run_cli("ledger-create-task", "--state", state, "--account", "alice",
                   "--hash", "00" * 32, "--reward", "3") == 0
    assert capsys.readouterr().out.strip() == "0"
    # rule violation maps to the ledger exit code
    assert run_cli("ledger-register-dcs", "--state", state,
                   "--account", "alice", "--deposit", "5") == cli.EXIT_LEDGER
    assert run_cli("ledger-advance", "--state", state, "--ticks", "10") == 0
    assert run_cli("ledger-show", "--state", state) == 0
    out = capsys.readouterr().out
    assert "now: 10" in out and "supply: 20" in out
    assert run_cli("ledger-log", "--state", state) == 0
    assert "create_task" in capsys.readouterr().out


def test_cli_ledger_params_file(tmp_path):
    cfg = tmp_path / "params.cfg"
    cfg.write_text("t_cw = 3\nt_rw = 2\n")
    state = tmp_path / "ledger.bin"
    assert run_cli("ledger-init", "--state", state, "--params", cfg) == 0
    assert cli._load_ledger(str(state)).params.t_cw == 3


def test_cli_scenario_deterministic(tmp_path, capsys):
    assert run_cli("scenario", "happy", "--seed", 7) == 0
    first = capsys.readouterr().out
    assert run_cli("scenario", "happy", "--seed", 7) == 0
    assert capsys.readouterr().out == first
    assert "plaintext recovered: True" in first


def test_cli_bench(tmp_path, capsys):
    assert run_cli("bench", "--attrs", "1,2", "--reps", "1",
                   "--out", tmp_path / "bench") == 0
    assert (tmp_path / "bench" / "bench.csv").exists()
    assert "transform" in capsys.readouterr().out
