from unittest.mock import patch

import pytest

from src.cli.main import EXIT_FAILURE, EXIT_INPUT, EXIT_OK, EXIT_USAGE, main
from src.core.codec import parse_instance
from src.core.config import settings

E1_TEXT = "p hs 2 4 3 1\n1 2\n1 3\n1 4\n"


@pytest.fixture
def write(tmp_path):
    """Writes text to a file under tmp_path and returns its path as a string."""

    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def test_kernelize_then_verify(write, tmp_path, capsys):
    """Kernelize the star family and check both sides answer the same."""
    source = write("e1.hs", E1_TEXT)
    target = str(tmp_path / "e1.kernel.hs")

    # 1. Kernelize
    code = main(["kernelize", "--problem", "hs", "--input", source, "--output", target])
    assert code == EXIT_OK
    assert "sets_in=3 sets_out=2 bound=4" in capsys.readouterr().out
    assert parse_instance((tmp_path / "e1.kernel.hs").read_text()).family == ((1, 2), (1, 3))

    # 2. Verify
    code = main(["verify", "--problem", "hs", "--input", source, "--kernel", target])
    assert code == EXIT_OK
    assert capsys.readouterr().out.strip() == "hs: in≤1 kernel≤1"


def test_kernel_to_stdout_keeps_stats_on_stderr(write, capsys):
    source = write("e1.hs", E1_TEXT)
    assert main(["kernelize", "--problem", "hs", "--input", source, "--trace"]) == EXIT_OK

    captured = capsys.readouterr()
    assert captured.out == "p hs 2 3 2 1\n1 2\n1 3\n"
    assert "peak_bits=" in captured.err


def test_linear_mode_prints_trie_work(write, tmp_path, capsys):
    source = write("e1.hs", E1_TEXT)
    target = str(tmp_path / "out.hs")
    args = ["kernelize", "--problem", "hs", "--mode", "linear", "--input", source]
    assert main(args + ["--output", target, "--trace", "--audit"]) == EXIT_OK
    assert "node_visits=" in capsys.readouterr().out


def test_mismatching_kernel_fails_verification(write, capsys):
    """E1 with k=0 has no solution; an empty kernel claims one."""
    source = write("e1.hs", E1_TEXT.replace("3 1\n", "3 0\n", 1))
    corrupted = write("bad.hs", "p hs 2 1 0 0\n")

    code = main(["verify", "--problem", "hs", "--input", source, "--kernel", corrupted])
    captured = capsys.readouterr()
    assert code == EXIT_FAILURE
    assert captured.out.strip() == "hs: in>0 kernel≤0"
    assert "MISMATCH" in captured.err


def test_linear_mode_is_a_usage_error_for_eds(write, capsys):
    source = write("g.gr", "p gr 3 1 1\ne 1 2\n")
    code = main(["kernelize", "--problem", "eds", "--mode", "linear", "--input", source])
    assert code == EXIT_USAGE
    assert "linear mode unavailable for eds" in capsys.readouterr().err


@pytest.mark.parametrize("layer", ["5", "-1"])
def test_layer_out_of_range_is_a_usage_error(write, capsys, layer):
    source = write("e1.hs", E1_TEXT)
    code = main(["kernelize", "--problem", "hs", "--input", source, "--layer", layer])
    assert code == EXIT_USAGE
    err = capsys.readouterr().err
    assert "error: --layer" in err
    assert "Traceback" not in err


def test_unknown_flag_is_a_usage_error(capsys):
    assert main(["kernelize", "--problem", "hs", "--bogus"]) == EXIT_USAGE
    assert main(["kernelize"]) == EXIT_USAGE


def test_malformed_input_is_an_input_error(write, capsys):
    source = write("bad.hs", "p hs 2 4 1 1\n\n")
    assert main(["kernelize", "--problem", "hs", "--input", source]) == EXIT_INPUT
    assert "line 2: empty set" in capsys.readouterr().err


def test_missing_file_is_an_input_error(tmp_path):
    missing = str(tmp_path / "nope.hs")
    assert main(["stats", "--input", missing]) == EXIT_INPUT


def test_oracle_refuses_large_instances(write, capsys):
    source = write("big.hs", "p hs 2 50 1 1\n1 50\n")
    code = main(["verify", "--problem", "hs", "--input", source, "--kernel", source])
    assert code == EXIT_INPUT
    assert "too large" in capsys.readouterr().err


def test_space_budget_failure(write):
    source = write("e1.hs", E1_TEXT)
    with patch.object(settings, "BIT_BUDGET", 4):
        code = main(["kernelize", "--problem", "hs", "--input", source])
    assert code == EXIT_FAILURE


def test_gen_is_deterministic(tmp_path):
    paths = [str(tmp_path / f"run{i}.hs") for i in range(2)]
    for path in paths:
        args = ["gen", "--kind", "hs", "--d", "2", "--n", "6", "--m", "5", "--k", "1"]
        assert main(args + ["--seed", "3", "--output", path]) == EXIT_OK

    first, second = ((tmp_path / f"run{i}.hs").read_text() for i in range(2))
    assert first == second
    assert first.startswith("p hs 2 6 5 1\n")


def test_gen_rejects_impossible_graph(capsys):
    args = ["gen", "--kind", "graph", "--n", "5", "--m", "11", "--k", "1", "--seed", "0"]
    assert main(args) == EXIT_INPUT
    assert "only 10 possible edges" in capsys.readouterr().err


def test_solve_prints_optimum(write, capsys):
    source = write("e1.hs", E1_TEXT)
    assert main(["solve", "--problem", "hs", "--input", source]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1"

    assert main(["solve", "--problem", "hs", "--input", source, "--cap", "0"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == ">0"


def test_stats(write, capsys):
    source = write("g.gr", "p gr 4 3 1\ne 1 2\ne 1 3\ne 1 4\n")
    assert main(["stats", "--input", source]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out == ["kind=gr n=4 m=3 k=1", "degree_histogram: 1:3 3:1"]


def test_flower_reports_core(write, capsys):
    source = write("e1.hs", E1_TEXT)
    assert main(["flower", "--input", source, "--l", "2"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == [
        "core: 1",
        "members: 0 1 2",
        "blocking_number: 3",
    ]


def test_flower_below_bound(write, capsys):
    source = write("e1.hs", E1_TEXT)
    assert main(["flower", "--input", source, "--l", "3"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "none guaranteed"


def test_sunflower(write, capsys):
    source = write("pairs.sp", "p sp 2 6 3 1\n1 2\n3 4\n5 6\n")
    assert main(["flower", "--input", source, "--l", "3", "--sunflower"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["core: (empty)", "members: 0 1 2"]


def test_triangle_deletion_with_pattern_file(write, tmp_path, capsys):
    pattern = write("tri.pat", "p pat 3\ne 1 2\ne 2 3\ne 1 3\n")
    source = write("k4.gr", "p gr 4 6 1\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n")
    target = str(tmp_path / "k4.kernel.gr")

    args = ["--problem", "hfree", "--pattern", f"@{pattern}", "--input", source]
    assert main(["kernelize", *args, "--output", target]) == EXIT_OK
    capsys.readouterr()

    assert main(["verify", "--problem", "hfree", "--pattern", f"@{pattern}",
                 "--input", source, "--kernel", target]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "hfree: in>1 kernel>1"


def test_verify_corpus(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for seed in range(4):
        args = ["gen", "--kind", "hs", "--d", "2", "--n", "6", "--m", "6", "--k", "1"]
        out = str(corpus / f"case{seed}.hs")
        assert main(args + ["--seed", str(seed), "--output", out]) == EXIT_OK
    (corpus / "notes.txt").write_text("ignored")

    code = main(["verify", "--problem", "hs", "--corpus", str(corpus), "--jobs", "2"])
    lines = capsys.readouterr().out.splitlines()
    assert code == EXIT_OK
    assert [line.split(":")[0] for line in lines] == [f"case{s}.hs" for s in range(4)]
