import json

import pytest

from tzitzeica.cli import main

SAMPLES = "u0 ub0 u\n1+1i 1-1i 0\n2i -2i 0.1\n0.5+0.25i 0.5-0.25i -0.2\n-1+2i -1-2i 0.3\n"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_kernel_command(capsys):
    code, out, _ = run(capsys, "kernel", "--weight", "5")
    assert code == 0
    assert "dimension 1" in out
    assert "u4 + 5*u2*u1 - 5*u2*u0^2 - 5*u1^2*u0 + u0^5" in out


def test_kernel_dimension_zero(capsys):
    code, out, _ = run(capsys, "kernel", "--weight", "3")
    assert code == 0
    assert "dimension 0" in out


def test_kernel_even_weight_exit_2(capsys):
    code, _, err = run(capsys, "kernel", "--weight", "4")
    assert code == 2
    assert "odd" in err


def test_kernel_json_output(capsys):
    code, out, _ = run(capsys, "--json", "kernel", "--weight", "1")
    assert code == 0
    body = json.loads(out)
    assert body["basis"] == ["u0"]


def test_recur_steps_zero(capsys):
    code, out, _ = run(capsys, "recur", "--seed", "u0", "--steps", "0")
    assert code == 0
    assert out.strip() == "[weight   1  E_lin ok] u0"


def test_recur_prints_v7(capsys):
    code, out, _ = run(capsys, "recur", "--seed", "u0", "--steps", "1")
    assert code == 0
    assert "u6 + 7*u4*u1" in out


def test_recur_v5_seed(capsys):
    code, out, _ = run(capsys, "recur", "--seed", "v5", "--steps", "1")
    assert code == 0
    assert "weight  11" in out
    assert "E_lin ok" in out


def test_verify_flatness(capsys):
    code, out, _ = run(capsys, "verify", "--what", "flatness")
    assert code == 0
    assert out.count("PASS") == 6


def test_verify_killing(capsys):
    code, out, _ = run(capsys, "verify", "--what", "killing", "--seed", "u0")
    assert code == 0
    assert out.count("PASS") == 17  # 16 residuals + suite line


def test_verify_commutator_deterministic(capsys):
    code1, out1, _ = run(capsys, "verify", "--what", "commutator",
                         "--cases", "30", "--rng-seed", "7")
    code2, out2, _ = run(capsys, "verify", "--what", "commutator",
                         "--cases", "30", "--rng-seed", "7")
    assert code1 == code2 == 0
    assert out1 == out2


def test_kernel_deterministic(capsys):
    _, out1, _ = run(capsys, "kernel", "--weight", "7")
    _, out2, _ = run(capsys, "kernel", "--weight", "7")
    assert out1 == out2


def test_gauge_command(capsys):
    code, out, _ = run(capsys, "gauge", "--gen", "u0")
    assert code == 0
    assert "A = 1/2*u0^2" in out
    assert "B = ub0*u0 + E[1] + 1/2*E[-2]" in out
    assert "phi_hat = -1/2*u0^2*Z + (E[1] + 1/2*E[-2])*Zb" in out


def test_recur_trace_lists_stages(capsys):
    code, out, _ = run(capsys, "recur", "--seed", "u0", "--steps", "1", "--trace")
    assert code == 0
    for name in ("a ", "b ", "f ", "r ", "s ", "t ", "a_next"):
        assert f"  {name}" in out
    assert "1/2*i*s2*u1 + 1/2*i*s2*u0^2" in out


def test_rank_command(tmp_path, capsys):
    samples = tmp_path / "samples.txt"
    samples.write_text(SAMPLES)
    code, out, _ = run(capsys, "rank", "--samples", str(samples),
                       "--gen", "u0", "--gen", "2*u0")
    assert code == 0
    assert "rank 2" in out
    assert "finite-type order 1" in out
    assert "certificate exact" in out


def test_rank_missing_file(capsys):
    code, _, err = run(capsys, "rank", "--samples", "/nonexistent/x.txt",
                       "--gen", "u0")
    assert code == 2


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
