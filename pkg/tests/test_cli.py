"""Command line surface: outputs, exit codes, machine mode."""

import pytest

from cbound.cli import main

WERMER_BRAID = "BR[3,{1,2,1,1,2,1}]"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_homfly_literal(capsys):
    code, out, _ = run(capsys, "homfly", "BR[2,{1,1,1}]")
    assert code == 0
    assert "-v^4 + v^2*z^2 + 2*v^2" in out


def test_homfly_machine(capsys):
    code, out, _ = run(capsys, "homfly", "BR[2,{1,1,1}]", "--machine")
    assert code == 0
    assert "poly=" in out and "ord_v=2" in out


def test_lk_pd_file(capsys, fixtures_dir):
    # the appendix curve has two components of linking number zero
    code, out, _ = run(capsys, "lk", str(fixtures_dir / "appendix.pd"))
    assert code == 0
    assert out.split() == ["0", "0", "0", "0"]


def test_lk_braid_literal(capsys):
    code, out, _ = run(capsys, "lk", "BR[2,{1,1}]", "--machine")
    assert code == 0
    assert "lk.0=0,1" in out and "lk.1=1,0" in out


def test_chi_prints_interval_and_witness(capsys):
    code, out, _ = run(capsys, "chi", "BR[3,{1,-2,-1,-1,-2}]")
    assert code == 0
    assert "chi_s^- in [2, 2]" in out
    assert "flip -> BR[3, {1, -2, 1, -1, -2}]" in out
    assert "reduce -> BR[3, {1, -2, -2}]" in out


def test_qp_verify_good_and_bad(capsys, fixtures_dir, tmp_path):
    code, out, _ = run(capsys, "qp-verify", str(fixtures_dir / "qp_wermer.qp"))
    assert code == 0
    bad = tmp_path / "bad.qp"
    bad.write_text("braid BR[3,{1,2,-1,-1,2,1}]\nfactors 1:2 -1:1\n")
    code, out, err = run(capsys, "qp-verify", str(bad))
    assert code == 3


def test_qp_obstruct(capsys):
    code, out, _ = run(capsys, "qp-obstruct", "BR[3,{1,-2,1,-2,1}]")
    assert code == 0
    assert "refuted" in out


def test_ovals_realize(capsys, fixtures_dir):
    code, out, _ = run(capsys, "ovals", "realize", str(fixtures_dir / "wermer.ovals"))
    assert code == 0
    assert "realizable" in out


def test_ovals_cable_and_splice(capsys, fixtures_dir):
    code, out, _ = run(capsys, "ovals", "cable", str(fixtures_dir / "wermer.ovals"))
    assert code == 0
    assert "add_retain(+1) @1" in out
    code, out, _ = run(capsys, "ovals", "splice", str(fixtures_dir / "wermer.ovals"))
    assert code == 0
    assert "--" in out


def test_ovals_embed_svg(capsys, fixtures_dir, tmp_path):
    target = tmp_path / "out.svg"
    code, out, _ = run(capsys, "ovals", "embed", str(fixtures_dir / "hopf.ovals"),
                       "--svg", str(target))
    assert code == 0
    assert target.read_text().startswith("<svg")


def test_table1_clean(capsys, fixtures_dir):
    code, out, _ = run(capsys, "table1", str(fixtures_dir / "table1.kb"))
    assert code == 0
    assert "29 rows, 0 mismatches" in out


def test_table1_mismatch_exit_code(capsys, tmp_path):
    kb = tmp_path / "bad.kb"
    kb.write_text("link A\nbraid BR[2,{1,1}]\ncert :1 :1\nexpect Q no a\n")
    code, out, _ = run(capsys, "table1", str(kb))
    assert code == 3
    assert "MISMATCH" in out


def test_classify_output(capsys, fixtures_dir):
    code, out, _ = run(capsys, "classify", str(fixtures_dir / "table1.kb"))
    assert code == 0
    assert "via certificate" in out
    assert "via mirror-exclusion" in out


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "homfly", "BR[2,{1,")
    assert code == 1
    assert "error" in err


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "homfly", "BR[4,{1,-2,3,-1,2,-3,1,-2,3,-1,2,-3}]",
                       "--skein-budget", "10")
    assert code == 2
    assert "budget" in err


def test_missing_file_exit_code(capsys):
    code, _, err = run(capsys, "lk", "/no/such/file.pd")
    assert code == 1


def test_reports_byte_stable_across_jobs(capsys, fixtures_dir):
    _, one, _ = run(capsys, "table1", str(fixtures_dir / "table1.kb"), "--jobs", "1")
    _, four, _ = run(capsys, "table1", str(fixtures_dir / "table1.kb"), "--jobs", "4")
    assert one == four


def test_table1_machine_mode(capsys, fixtures_dir):
    code, out, _ = run(capsys, "table1", str(fixtures_dir / "table1.kb"), "--machine")
    assert code == 0
    assert "row.2_1.Q=yes" in out
    assert "mismatches=0" in out
