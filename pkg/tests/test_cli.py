import pytest

from omplan import cli
from omplan.benchmarks import one_armed_delivery, running_example


@pytest.fixture
def bw_dir(tmp_path):
    running_example().write(tmp_path / "bw")
    return str(tmp_path / "bw")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check(capsys, bw_dir):
    code, out, _ = run(capsys, "check", "--dir", bw_dir)
    assert code == 0 and out.splitlines()[0] == "consistent"


def test_plan(capsys, bw_dir):
    code, out, _ = run(capsys, "plan", "--dir", bw_dir)
    assert code == 0
    assert out == "(pickup stackBot blockA)\n(stack stackBot blockA blockB)\n"


def test_explain_query_atom(capsys, bw_dir):
    code, out, _ = run(capsys, "explain", "fullHands(stackBot)", "--dir", bw_dir)
    assert code == 0
    lines = [l.strip() for l in out.splitlines()]
    assert "holds(stackBot, blockA) holds(stackBot, blockB)" in lines
    assert "holds(stackBot, blockA) holds(stackBot, blockC)" in lines
    assert "holds(stackBot, blockB) holds(stackBot, blockC)" in lines
    assert "3 justification(s)" in out


def test_explain_inconsistent_pddl_syntax(capsys, bw_dir):
    code, out, _ = run(capsys, "explain", "inconsistent", "--dir", bw_dir)
    assert code == 0 and "holds(stackBot, blockA) holds(stackBot, blockB) holds(stackBot, blockC)" in out
    code, out, _ = run(capsys, "explain", "(fullHands stackBot)", "--dir", bw_dir)
    assert code == 0 and "3 justification(s)" in out


def test_explain_unknown_predicate(capsys, bw_dir):
    code, _, err = run(capsys, "explain", "clear(blockA)", "--dir", bw_dir)
    assert code == 2 and "error" in err


def test_compile_is_byte_identical(capsys, bw_dir, tmp_path):
    _, first, _ = run(capsys, "compile", "--dir", bw_dir)
    _, second, _ = run(capsys, "compile", "--dir", bw_dir)
    assert first == second and "(:derived (inconsistent)" in first
    code, _, _ = run(capsys, "compile", "--dir", bw_dir, "--out", str(tmp_path / "out"))
    assert code == 0 and (tmp_path / "out" / "domain.pddl").read_text().startswith("(define (domain")


def test_validate_compiled_and_direct(capsys, bw_dir, tmp_path):
    plan = tmp_path / "plan.txt"
    plan.write_text("(pickup stackBot blockA)\n(stack stackBot blockA blockB)\n")
    assert run(capsys, "validate", str(plan), "--dir", bw_dir)[:2] == (0, "valid\n")
    assert run(capsys, "validate", str(plan), "--direct", "--dir", bw_dir)[:2] == (0, "valid\n")
    plan.write_text("(pickup stackBot blockA)\n")
    code, out, _ = run(capsys, "validate", str(plan), "--direct", "--dir", bw_dir)
    assert code == 1 and out.startswith("invalid")


def test_plan_through_inconsistent_state(capsys, tmp_path):
    one_armed_delivery().write(tmp_path / "d")
    code, out, _ = run(capsys, "plan", "--dir", str(tmp_path / "d"))
    assert code == 0 and len(out.splitlines()) == 3
    code, _, err = run(capsys, "plan", "--block-inconsistent", "--dir", str(tmp_path / "d"))
    assert code == 1 and "unsolvable" in err


def test_input_errors(capsys, bw_dir, tmp_path):
    assert run(capsys, "check", "--dir", str(tmp_path / "missing"))[0] == 2
    broken = tmp_path / "broken"
    fx = running_example()
    fx.write(broken)
    (broken / "domain.pddl").write_text(fx.domain.replace("(:action putdown", "(:action putdown (", 1))
    code, _, err = run(capsys, "plan", "--dir", str(broken))
    assert code == 2 and "line" in err


def test_resource_limits(capsys, bw_dir):
    assert run(capsys, "plan", "--max-states", "1", "--dir", bw_dir)[0] == 3
    assert run(capsys, "compile", "--hst-limit", "1", "--dir", bw_dir)[0] == 3


def test_invariant_violation(capsys, bw_dir, monkeypatch):
    from omplan.planner import SOLVED, SearchResult

    real = cli.solve

    def bogus(spec, limits):
        plan = real(spec, limits).plan
        return SearchResult(SOLVED, plan[:1])  # a plan that misses the goal

    monkeypatch.setattr(cli, "solve", bogus)
    code, out, err = run(capsys, "plan", "--dir", bw_dir)
    assert code == 4 and out == "" and "internal error" in err


def test_individual_file_flags(capsys, bw_dir):
    args = []
    for role, fname in cli.FILE_NAMES.items():
        args += [f"--{role}", f"{bw_dir}/{fname}"]
    assert run(capsys, "check", *args)[0] == 0
