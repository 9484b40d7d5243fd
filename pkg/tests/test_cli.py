"""End-to-end CLI flows, exit codes, and byte-level determinism.

All invocations run in-process through main(argv).  Exit contract:
0 success/accept, 1 verify reject, 2 usage, 3 bad documents or IO.
"""

from __future__ import annotations

import json

import pytest

from qseal.cli import main
from qseal.documents import parse_document, KIND_SECRET


def run(*argv: str) -> int:
    return main(list(argv))


@pytest.fixture()
def binary_files(tmp_path):
    pkg = tmp_path / "package.json"
    sec = tmp_path / "secret.json"
    assert (
        run(
            "seal",
            "--mode",
            "binary",
            "--bits",
            "16",
            "--seed",
            "7",
            "--out-package",
            str(pkg),
            "--out-secret",
            str(sec),
        )
        == 0
    )
    return pkg, sec


@pytest.fixture()
def nary_files(tmp_path):
    pkg = tmp_path / "npackage.json"
    sec = tmp_path / "nsecret.json"
    assert (
        run(
            "seal",
            "--mode",
            "nary",
            "--bits",
            "16",
            "--k",
            "3",
            "--secret",
            "00112233",
            "--seed",
            "11",
            "--out-package",
            str(pkg),
            "--out-secret",
            str(sec),
        )
        == 0
    )
    return pkg, sec


# ---------------------------------------------------------------------------
# seal / open
# ---------------------------------------------------------------------------


class TestSealOpen:
    def test_binary_open_prints_the_recorded_secret(self, binary_files, capsys):
        pkg, sec = binary_files
        assert run("open", "--package", str(pkg), "--seed", "3") == 0
        printed = capsys.readouterr().out.strip()
        payload = parse_document(sec.read_text(), KIND_SECRET)
        assert printed == payload["secret"]

    def test_nary_open_prints_the_sealed_hex(self, nary_files, capsys):
        pkg, _ = nary_files
        assert run("open", "--package", str(pkg), "--seed", "3") == 0
        assert capsys.readouterr().out.strip() == "00112233"

    def test_open_is_seed_stable(self, nary_files, capsys):
        pkg, _ = nary_files
        run("open", "--package", str(pkg), "--seed", "5")
        first = capsys.readouterr().out
        run("open", "--package", str(pkg), "--seed", "5")
        assert capsys.readouterr().out == first

    def test_seal_is_byte_identical_across_reruns(self, tmp_path):
        outs = []
        for tag in ("a", "b"):
            pkg = tmp_path / f"p{tag}.json"
            sec = tmp_path / f"s{tag}.json"
            run(
                "seal", "--mode", "nary", "--bits", "12", "--k", "4",
                "--secret", "deadbeef", "--seed", "21",
                "--out-package", str(pkg), "--out-secret", str(sec),
            )
            outs.append((pkg.read_bytes(), sec.read_bytes()))
        assert outs[0] == outs[1]

    def test_binary_mode_rejects_nary_flags(self, tmp_path):
        args = [
            "seal", "--mode", "binary", "--bits", "16",
            "--out-package", str(tmp_path / "p.json"),
            "--out-secret", str(tmp_path / "s.json"),
        ]
        assert run(*args, "--secret", "aa") == 2
        assert run(*args, "--k", "2") == 2

    def test_nary_mode_requires_its_flags(self, tmp_path):
        base = [
            "seal", "--mode", "nary", "--bits", "16",
            "--out-package", str(tmp_path / "p.json"),
            "--out-secret", str(tmp_path / "s.json"),
        ]
        assert run(*base, "--k", "3") == 2  # missing --secret
        assert run(*base, "--secret", "aa") == 2  # missing --k
        assert run(*base, "--k", "3", "--secret", "zz") == 2  # not hex
        assert run(*base, "--k", "70", "--secret", "aa") == 2  # k out of range

    def test_width_validation_flows_to_exit_two(self, tmp_path):
        assert (
            run(
                "seal", "--mode", "binary", "--bits", "1",
                "--out-package", str(tmp_path / "p.json"),
                "--out-secret", str(tmp_path / "s.json"),
            )
            == 2
        )

    def test_open_missing_file_is_io_error(self, tmp_path):
        assert run("open", "--package", str(tmp_path / "nope.json")) == 3

    def test_open_corrupt_file_is_integrity_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{]")
        assert run("open", "--package", str(bad)) == 3

    def test_open_wrong_kind_is_integrity_error(self, binary_files):
        _, sec = binary_files
        assert run("open", "--package", str(sec)) == 3


# ---------------------------------------------------------------------------
# respond / verify
# ---------------------------------------------------------------------------


class TestRespondVerify:
    def test_honest_quantum_round_trip_accepts(self, binary_files, tmp_path, capsys):
        pkg, sec = binary_files
        ret = tmp_path / "ret.json"
        assert (
            run(
                "respond", "--package", str(pkg), "--strategy", "honest",
                "--kind", "quantum", "--seed", "1", "--out", str(ret),
            )
            == 0
        )
        for method in ("projective", "helstrom"):
            code = run(
                "verify", "--secret", str(sec), "--return", str(ret),
                "--method", method, "--seed", "2",
            )
            assert code == 0
            assert capsys.readouterr().out.strip() == "accept"

    def test_honest_classical_round_trip_accepts(self, binary_files, tmp_path, capsys):
        pkg, sec = binary_files
        ret = tmp_path / "ret.json"
        run(
            "respond", "--package", str(pkg), "--strategy", "honest",
            "--kind", "classical", "--seed", "1", "--out", str(ret),
        )
        assert run("verify", "--secret", str(sec), "--return", str(ret)) == 0
        assert capsys.readouterr().out.strip() == "accept"

    def test_measure_keep_is_caught_by_helstrom(self, binary_files, tmp_path, capsys):
        pkg, sec = binary_files
        ret = tmp_path / "ret.json"
        run(
            "respond", "--package", str(pkg), "--strategy", "measure-keep",
            "--kind", "quantum", "--seed", "0", "--out", str(ret),
        )
        code = run(
            "verify", "--secret", str(sec), "--return", str(ret),
            "--method", "helstrom", "--seed", "0",
        )
        assert code == 1
        assert capsys.readouterr().out.strip() == "reject"

    def test_measure_keep_sometimes_slips_past(self, binary_files, tmp_path):
        # The optimal test still errs at rate 1 - p_check; seed 1 shows it.
        pkg, sec = binary_files
        ret = tmp_path / "ret.json"
        run(
            "respond", "--package", str(pkg), "--strategy", "measure-keep",
            "--kind", "quantum", "--seed", "0", "--out", str(ret),
        )
        assert (
            run(
                "verify", "--secret", str(sec), "--return", str(ret),
                "--method", "helstrom", "--seed", "1",
            )
            == 0
        )

    def test_guess_mask_splits_by_respond_seed(self, binary_files, tmp_path):
        pkg, sec = binary_files
        ret = tmp_path / "ret.json"
        outcomes = {}
        for rseed in (0, 1):
            run(
                "respond", "--package", str(pkg), "--strategy", "measure-guess-d",
                "--kind", "classical", "--seed", str(rseed), "--out", str(ret),
            )
            outcomes[rseed] = run("verify", "--secret", str(sec), "--return", str(ret))
        assert outcomes == {0: 1, 1: 0}

    def test_incompatible_strategy_kind_is_usage_error(self, binary_files, tmp_path):
        pkg, _ = binary_files
        assert (
            run(
                "respond", "--package", str(pkg), "--strategy", "measure-guess-d",
                "--kind", "quantum", "--seed", "0",
                "--out", str(tmp_path / "r.json"),
            )
            == 2
        )

    def test_classical_verify_of_three_branch_secret_is_unsupported(
        self, nary_files, binary_files, tmp_path
    ):
        bpkg, _ = binary_files
        _, nsec = nary_files
        ret = tmp_path / "ret.json"
        run(
            "respond", "--package", str(bpkg), "--strategy", "honest",
            "--kind", "classical", "--seed", "1", "--out", str(ret),
        )
        assert run("verify", "--secret", str(nsec), "--return", str(ret)) == 2

    def test_width_mismatch_between_documents_is_usage_error(
        self, binary_files, tmp_path
    ):
        pkg8 = tmp_path / "p8.json"
        sec8 = tmp_path / "s8.json"
        run(
            "seal", "--mode", "binary", "--bits", "8", "--seed", "1",
            "--out-package", str(pkg8), "--out-secret", str(sec8),
        )
        ret = tmp_path / "ret.json"
        run(
            "respond", "--package", str(pkg8), "--strategy", "honest",
            "--kind", "quantum", "--seed", "1", "--out", str(ret),
        )
        _, sec16 = binary_files
        assert run("verify", "--secret", str(sec16), "--return", str(ret)) == 2

    def test_respond_is_byte_identical_across_reruns(self, binary_files, tmp_path):
        pkg, _ = binary_files
        blobs = []
        for tag in ("x", "y"):
            out = tmp_path / f"ret-{tag}.json"
            run(
                "respond", "--package", str(pkg), "--strategy", "measure-keep",
                "--kind", "quantum", "--seed", "9", "--out", str(out),
            )
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]

    def test_tampered_package_is_rejected_by_respond(self, binary_files, tmp_path):
        pkg, _ = binary_files
        doc = json.loads(pkg.read_text())
        doc["payload"]["register"]["terms"][0][0] = "0000"
        twisted = tmp_path / "twisted.json"
        twisted.write_text(json.dumps(doc))
        assert (
            run(
                "respond", "--package", str(twisted), "--strategy", "honest",
                "--kind", "quantum", "--seed", "0",
                "--out", str(tmp_path / "r.json"),
            )
            == 3
        )


# ---------------------------------------------------------------------------
# simulate / curve
# ---------------------------------------------------------------------------


class TestSimulate:
    def test_report_line_shape(self, capsys):
        assert (
            run(
                "simulate", "--mode", "binary", "--strategy", "measure-keep",
                "--kind", "quantum", "--method", "helstrom",
                "--trials", "400", "--seed", "3",
            )
            == 0
        )
        line = capsys.readouterr().out.strip()
        assert line.startswith("statistic=detection p_hat=0.")
        assert "p_theory=0.853553" in line

    def test_csv_row(self, tmp_path, capsys):
        csv = tmp_path / "row.csv"
        run(
            "simulate", "--mode", "nary", "--k", "3", "--strategy", "measure-keep",
            "--kind", "quantum", "--method", "helstrom",
            "--trials", "400", "--seed", "3", "--csv", str(csv),
        )
        capsys.readouterr()
        header, row = csv.read_text().strip().splitlines()
        assert header == "k,p_theory,p_hat,ci_low,ci_high,trials"
        fields = row.split(",")
        assert fields[0] == "3"
        assert fields[1] == "0.908248"
        assert fields[5] == "400"

    def test_report_document(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        run(
            "simulate", "--strategy", "honest", "--kind", "classical",
            "--trials", "200", "--seed", "4", "--out-report", str(out),
        )
        capsys.readouterr()
        payload = parse_document(out.read_text(), "report")
        assert payload["statistic"] == "acceptance"
        assert payload["p_hat"] == 1.0

    def test_mixture_flag(self, capsys):
        assert run("simulate", "--mixture", "--trials", "2000", "--seed", "5") == 0
        line = capsys.readouterr().out.strip()
        assert line.startswith("statistic=discrimination_success")
        assert "p_theory=0.750000" in line

    def test_usage_errors(self, capsys):
        assert run("simulate", "--mode", "nary", "--trials", "10") == 2  # no --k
        capsys.readouterr()

    def test_honest_helstrom_combination_rejected(self, capsys):
        assert (
            run(
                "simulate", "--strategy", "honest", "--kind", "quantum",
                "--method", "helstrom", "--trials", "10",
            )
            == 2
        )
        capsys.readouterr()


class TestCurve:
    def test_csv_file_and_determinism_across_workers(self, tmp_path, capsys):
        a = tmp_path / "curve-a.csv"
        b = tmp_path / "curve-b.csv"
        run(
            "curve", "--k-max", "4", "--trials", "300", "--seed", "6",
            "--workers", "1", "--out", str(a),
        )
        run(
            "curve", "--k-max", "4", "--trials", "300", "--seed", "6",
            "--workers", "3", "--out", str(b),
        )
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().strip().splitlines()
        assert lines[0] == "k,p_theory,p_hat,ci_low,ci_high,trials"
        assert [row.split(",")[0] for row in lines[1:]] == ["2", "3", "4"]

    def test_stdout_mode(self, capsys):
        assert run("curve", "--k-max", "2", "--trials", "100", "--seed", "1") == 0
        out = capsys.readouterr().out
        assert out.startswith("k,p_theory,p_hat")

    def test_k_max_bounds(self):
        assert run("curve", "--k-max", "1", "--trials", "10") == 2
        assert run("curve", "--k-max", "65", "--trials", "10") == 2


class TestParser:
    def test_help_exits_zero(self, capsys):
        assert run("--help") == 0
        capsys.readouterr()

    def test_unknown_command_is_usage_error(self, capsys):
        assert run("frobnicate") == 2
        capsys.readouterr()

    def test_no_command_is_usage_error(self, capsys):
        assert run() == 2
        capsys.readouterr()
