import json

import pytest

from pathweave.cli import main

from conftest import FIXTURE1_TRIPLES


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "fixture1.tsv"
    path.write_text(
        "# fixture\n" + "".join(f"{t}\t{l}\t{h}\n" for t, l, h in FIXTURE1_TRIPLES),
        encoding="utf-8",
    )
    return str(path)


@pytest.fixture
def cycle_file(tmp_path):
    path = tmp_path / "cycle.tsv"
    path.write_text("x\tnext\ty\ny\tnext\tz\nz\tnext\tx\n", encoding="utf-8")
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_coauthorship(graph_file, capsys):
    code, out, _ = run(
        ["eval", "--graph", graph_file, "--expr", "A[authored] . A[authored]' & not(I)"],
        capsys,
    )
    assert code == 0
    assert out == "h1\th2\t1\nh2\th1\t1\n"


def test_eval_deterministic(graph_file, capsys):
    argv = ["eval", "--graph", graph_file, "--expr", "A[authored] . A[cites]", "--format", "json"]
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first == second
    assert json.loads(first[1]) == {"n": 7, "entries": [["h1", "a3", 1.0]]}


def test_missing_graph_file(capsys):
    code, _, err = run(["eval", "--graph", "/nonexistent/g.tsv", "--expr", "A[x]"], capsys)
    assert code == 2
    assert "/nonexistent/g.tsv" in err


def test_syntax_error_is_exit_2(graph_file, capsys):
    code, _, err = run(["eval", "--graph", graph_file, "--expr", "A[authored"], capsys)
    assert code == 2
    assert "syntax error" in err


def test_unknown_label_is_exit_1(graph_file, capsys):
    code, _, err = run(["eval", "--graph", graph_file, "--expr", "A[knows]"], capsys)
    assert code == 1
    assert "knows" in err


def test_eval_simplify_flag_identical_result(graph_file, capsys):
    expr = (
        "A[authored] . A[cites] . A[authored]' "
        "& not(clip(A[authored] . A[authored]' & not(I))) & not(I)"
    )
    plain_code, plain_out, _ = run(["eval", "--graph", graph_file, "--expr", expr], capsys)
    simp_code, simp_out, simp_err = run(
        ["eval", "--graph", graph_file, "--expr", expr, "--simplify"], capsys
    )
    assert plain_code == simp_code == 0
    assert plain_out == simp_out
    assert "not-masked" in simp_err  # derivation table went to stderr


def test_simplify_prints_derivation(capsys):
    code, out, _ = run(
        [
            "simplify",
            "--expr",
            "0.6 * (A[authored] . A[authored]' & not(I)) + "
            "0.4 * (A[developed] . A[developed]' & not(I))",
        ],
        capsys,
    )
    assert code == 0
    assert "had-factor" in out
    assert out.strip().endswith(
        "(0.6 * (A[authored] . A[authored]') + 0.4 * (A[developed] . A[developed]')) & not(I)"
    )


def test_pagerank_cycle_uniform(cycle_file, capsys):
    code, out, _ = run(
        [
            "pagerank",
            "--graph",
            cycle_file,
            "--delta",
            "0.85",
            "--epsilon",
            "1e-12",
            "--format",
            "json",
        ],
        capsys,
    )
    assert code == 0
    values = json.loads(out)["values"]
    assert all(abs(v - 1 / 3) < 1e-9 for v in values.values())


def test_geodesic_on_cites(graph_file, capsys):
    code, out, _ = run(
        ["geodesic", "--graph", graph_file, "--expr", "A[cites]", "--format", "json"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert ["a1", "a3", 1] in payload["distances"]
    assert len(payload["distances"]) == 1  # unreachable pairs are absent


def test_spread(cycle_file, capsys):
    code, out, _ = run(
        [
            "spread",
            "--graph",
            cycle_file,
            "--steps",
            "0",
            "--seed",
            "x=1.0",
        ],
        capsys,
    )
    assert code == 0
    assert "x\t1\n" in out
    code, _, err = run(["spread", "--graph", cycle_file, "--steps", "2"], capsys)
    assert code == 2 and "--seed" in err
    code, _, err = run(
        ["spread", "--graph", cycle_file, "--steps", "1", "--seed", "ghost=1"], capsys
    )
    assert code == 1 and "ghost" in err


def test_assort_categorical(tmp_path, capsys):
    graph = tmp_path / "g.tsv"
    graph.write_text("a\tknows\tb\nb\tknows\ta\nc\tknows\td\nd\tknows\tc\n")
    props = tmp_path / "p.tsv"
    props.write_text("a\tred\nb\tred\nc\tblue\nd\tblue\n")
    code, out, _ = run(
        [
            "assort",
            "--graph",
            str(graph),
            "--property",
            str(props),
            "--kind",
            "categorical",
        ],
        capsys,
    )
    assert code == 0
    assert out == "#r\t1\n"


def test_load_check_reports_signature(tmp_path, graph_file, capsys):
    sigs = tmp_path / "sigs.tsv"
    sigs.write_text("authored\tH\tA\ncites\tA\tA\ncontains\tJ\tA\ncategory\tJ\tS\n")
    code, out, _ = run(
        [
            "load-check",
            "--graph",
            graph_file,
            "--signatures",
            str(sigs),
            "--expr",
            "A[authored] . A[cites] . A[authored]'",
        ],
        capsys,
    )
    assert code == 0
    assert "vertices\t7" in out
    assert "labels\t4" in out
    assert "signature\tH\tH\tok" in out


def test_load_check_flags_violation(tmp_path, graph_file, capsys):
    sigs = tmp_path / "sigs.tsv"
    sigs.write_text("authored\tH\tA\ncites\tA\tA\n")
    code, out, _ = run(
        [
            "load-check",
            "--graph",
            graph_file,
            "--signatures",
            str(sigs),
            "--expr",
            "A[cites] . A[authored]",
        ],
        capsys,
    )
    assert code == 0
    assert "violations" in out
    assert "expected A" in out and "found H" in out


def test_expr_file_with_let(tmp_path, graph_file, capsys):
    f = tmp_path / "expr.pw"
    f.write_text("# coauthors\nlet co = A[authored] . A[authored]' & not(I)\nlet z = clip(co)\n")
    code, out, _ = run(["eval", "--graph", graph_file, "--expr-file", str(f)], capsys)
    assert code == 0
    assert out == "h1\th2\t1\nh2\th1\t1\n"


def test_multi_label_graph_requires_expr(graph_file, capsys):
    code, _, err = run(["pagerank", "--graph", graph_file], capsys)
    assert code == 2
    assert "--expr" in err


def test_thread_cap_env(monkeypatch, graph_file, capsys):
    monkeypatch.setenv("PATHWEAVE_THREADS", "4")
    code, _, _ = run(["eval", "--graph", graph_file, "--expr", "A[cites]"], capsys)
    assert code == 0
    monkeypatch.setenv("PATHWEAVE_THREADS", "zero")
    code, _, err = run(["eval", "--graph", graph_file, "--expr", "A[cites]"], capsys)
    assert code == 2 and "PATHWEAVE_THREADS" in err
