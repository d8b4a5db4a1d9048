import numpy as np
import pytest

from synth import make_gold, make_sentences, plant_embeddings

from chunkalign.cli import main
from chunkalign.core import read_alignment_file, validate_alignment_set, write_alignment_file
from chunkalign.simulator import exhaustive_expected_max_chunk


def write_pair(tmp_path, rng, n_beads=12, p11=0.9, noise=0.1, dim=16):
    gold = make_gold(rng, n_beads, p11)
    src, tgt = make_sentences(rng, gold)
    src_emb, tgt_emb = plant_embeddings(rng, gold, dim=dim, noise=noise)
    paths = {
        "src": tmp_path / "src.txt",
        "tgt": tmp_path / "tgt.txt",
        "src_emb": tmp_path / "src.bin",
        "tgt_emb": tmp_path / "tgt.bin",
    }
    paths["src"].write_text("\n".join(src) + "\n", encoding="utf-8")
    paths["tgt"].write_text("\n".join(tgt) + "\n", encoding="utf-8")
    src_emb.vectors.astype("<f4").tofile(paths["src_emb"])
    tgt_emb.vectors.astype("<f4").tofile(paths["tgt_emb"])
    return gold, paths, dim


def align_argv(paths, dim, *extra):
    return [
        "align",
        "--src", str(paths["src"]),
        "--tgt", str(paths["tgt"]),
        "--src-emb", str(paths["src_emb"]),
        "--tgt-emb", str(paths["tgt_emb"]),
        "--dim", str(dim),
        *extra,
    ]


def test_single_sentence_pair(tmp_path, capsys):
    (tmp_path / "s.txt").write_text("hello there\n", encoding="utf-8")
    (tmp_path / "t.txt").write_text("bonjour \n", encoding="utf-8")
    np.ones((1, 4), dtype="<f4").tofile(tmp_path / "s.bin")
    np.ones((1, 4), dtype="<f4").tofile(tmp_path / "t.bin")
    code = main([
        "align",
        "--src", str(tmp_path / "s.txt"),
        "--tgt", str(tmp_path / "t.txt"),
        "--src-emb", str(tmp_path / "s.bin"),
        "--tgt-emb", str(tmp_path / "t.bin"),
        "--dim", "4",
    ])
    assert code == 0
    assert capsys.readouterr().out == "0:0\n"


def test_dim_mismatch_exits_2(tmp_path, capsys):
    _, paths, dim = write_pair(tmp_path, np.random.default_rng(0))
    code = main(align_argv(paths, dim + 1))
    assert code == 2
    assert "not a multiple" in capsys.readouterr().err


def test_row_count_mismatch_names_both_counts(tmp_path, capsys):
    _, paths, dim = write_pair(tmp_path, np.random.default_rng(1))
    extra = np.zeros((1, dim), dtype="<f4")
    with open(paths["src_emb"], "ab") as fh:
        extra.tofile(fh)
    code = main(align_argv(paths, dim))
    assert code == 2
    err = capsys.readouterr().err
    assert "rows" in err and "sentences" in err


def test_missing_file_exits_1(tmp_path, capsys):
    _, paths, dim = write_pair(tmp_path, np.random.default_rng(2))
    paths["src_emb"].unlink()
    code = main(align_argv(paths, dim))
    assert code == 1


def test_no_dac_needs_no_embeddings(tmp_path):
    _, paths, dim = write_pair(tmp_path, np.random.default_rng(3))
    paths["src_emb"].unlink()
    paths["tgt_emb"].unlink()
    out = tmp_path / "out.txt"
    code = main([
        "align", "--src", str(paths["src"]), "--tgt", str(paths["tgt"]),
        "--no-dac", "--out", str(out),
    ])
    assert code == 0
    assert validate_alignment_set(read_alignment_file(out)) is None


def test_no_dac_and_default_both_valid(tmp_path):
    _, paths, dim = write_pair(tmp_path, np.random.default_rng(4), n_beads=20)
    out_a = tmp_path / "a.txt"
    out_b = tmp_path / "b.txt"
    assert main(align_argv(paths, dim, "--out", str(out_a))) == 0
    assert main(align_argv(paths, dim, "--no-dac", "--out", str(out_b))) == 0
    assert validate_alignment_set(read_alignment_file(out_a)) is None
    assert validate_alignment_set(read_alignment_file(out_b)) is None


def test_lexical_requires_ttable(tmp_path, capsys):
    _, paths, dim = write_pair(tmp_path, np.random.default_rng(5))
    code = main(align_argv(paths, dim, "--scorer", "lexical"))
    assert code == 2
    assert "--ttable" in capsys.readouterr().err


def test_lexical_scorer_runs(tmp_path):
    _, paths, dim = write_pair(tmp_path, np.random.default_rng(6))
    ttable = tmp_path / "t.tsv"
    ttable.write_text("s t 0.5\n", encoding="utf-8")
    out = tmp_path / "out.txt"
    code = main(align_argv(
        paths, dim, "--scorer", "lexical", "--ttable", str(ttable), "--out", str(out)
    ))
    assert code == 0
    assert validate_alignment_set(read_alignment_file(out)) is None


def test_jobs_do_not_change_output(tmp_path):
    _, paths, dim = write_pair(tmp_path, np.random.default_rng(7), n_beads=60)
    out_1 = tmp_path / "j1.txt"
    out_8 = tmp_path / "j8.txt"
    assert main(align_argv(paths, dim, "--jobs", "1", "--max-chunk", "8", "--out", str(out_1))) == 0
    assert main(align_argv(paths, dim, "--jobs", "8", "--max-chunk", "8", "--out", str(out_8))) == 0
    assert out_1.read_bytes() == out_8.read_bytes()


def test_extended_beads_flag(tmp_path):
    _, paths, dim = write_pair(tmp_path, np.random.default_rng(8))
    out = tmp_path / "out.txt"
    assert main(align_argv(paths, dim, "--beads", "extended", "--out", str(out))) == 0
    assert validate_alignment_set(read_alignment_file(out)) is None


# --- delimiters ---------------------------------------------------------------

def test_delimiters_identity_signal(tmp_path, capsys):
    sents = "\n".join(f"sent {k}" for k in range(5)) + "\n"
    (tmp_path / "s.txt").write_text(sents, encoding="utf-8")
    (tmp_path / "t.txt").write_text(sents, encoding="utf-8")
    np.eye(5, dtype="<f4").tofile(tmp_path / "s.bin")
    np.eye(5, dtype="<f4").tofile(tmp_path / "t.bin")
    code = main([
        "delimiters",
        "--src", str(tmp_path / "s.txt"), "--tgt", str(tmp_path / "t.txt"),
        "--src-emb", str(tmp_path / "s.bin"), "--tgt-emb", str(tmp_path / "t.bin"),
        "--dim", "5",
    ])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    # top-4 neighbourhood mean on orthogonal rows is 1/4, so margin = 4
    assert lines[0] == "1\t1\t1.000000\t4.000000"
    cols = [tuple(map(int, line.split("\t")[:2])) for line in lines]
    assert cols == sorted(cols)
    assert all(a[0] < b[0] and a[1] < b[1] for a, b in zip(cols, cols[1:]))


def test_delimiters_zero_embeddings_empty_output(tmp_path, capsys):
    sents = "\n".join(f"sent {k}" for k in range(4)) + "\n"
    (tmp_path / "s.txt").write_text(sents, encoding="utf-8")
    (tmp_path / "t.txt").write_text(sents, encoding="utf-8")
    np.zeros((4, 3), dtype="<f4").tofile(tmp_path / "s.bin")
    np.zeros((4, 3), dtype="<f4").tofile(tmp_path / "t.bin")
    code = main([
        "delimiters",
        "--src", str(tmp_path / "s.txt"), "--tgt", str(tmp_path / "t.txt"),
        "--src-emb", str(tmp_path / "s.bin"), "--tgt-emb", str(tmp_path / "t.bin"),
        "--dim", "3",
    ])
    assert code == 0
    assert capsys.readouterr().out == ""


# --- simulate -------------------------------------------------------------------

def test_simulate_single_cell_close_to_exact(tmp_path, capsys):
    code = main(["simulate", "--n", "4", "--r", "0.5", "--trials", "100000", "--seed", "42"])
    assert code == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header == "n,r,mean,stderr"
    n, r, mean, stderr = row.split(",")
    assert (n, r) == ("4", "0.5")
    assert abs(float(mean) - 3.5625) <= 3 * float(stderr)


def test_simulate_degenerate_r1(capsys):
    code = main(["simulate", "--n", "3", "--r", "1", "--trials", "10"])
    assert code == 0
    row = capsys.readouterr().out.splitlines()[1]
    assert row == "3,1,1.000000,0.000000"


def test_simulate_byte_identical_across_runs(tmp_path):
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    argv = ["simulate", "--n", "10,20", "--r", "0.5,0.9", "--trials", "2000", "--seed", "7"]
    assert main(argv + ["--out", str(out_a)]) == 0
    assert main(argv + ["--out", str(out_b)]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()


def test_simulate_exact_flag(capsys):
    code = main(["simulate", "--n", "4", "--r", "0.5", "--exact"])
    assert code == 0
    row = capsys.readouterr().out.splitlines()[1]
    assert float(row.split(",")[2]) == exhaustive_expected_max_chunk(4, 0.5)


def test_simulate_rejects_garbage_lists(capsys):
    assert main(["simulate", "--n", "4,x", "--r", "0.5"]) == 2


# --- evaluate -------------------------------------------------------------------

def test_evaluate_self_is_perfect(tmp_path, capsys):
    rng = np.random.default_rng(9)
    gold = make_gold(rng, 15, 0.8)
    path = tmp_path / "g.txt"
    write_alignment_file(path, gold)
    code = main(["evaluate", "--test", str(path), "--gold", str(path)])
    assert code == 0
    assert capsys.readouterr().out == "1.0000\t1.0000\t1.0000\n"


def test_evaluate_delimiter_mode(tmp_path, capsys):
    rng = np.random.default_rng(10)
    gold = make_gold(rng, 20, 1.0)
    gold_path = tmp_path / "g.txt"
    write_alignment_file(gold_path, gold)
    found = tmp_path / "d.tsv"
    found.write_text("1\t1\t1.000000\t2.000000\n", encoding="utf-8")
    code = main(["evaluate", "--test", str(found), "--gold", str(gold_path), "--delimiters"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("1.0000\t")


def test_evaluate_size_mismatch_exits_2(tmp_path, capsys):
    rng = np.random.default_rng(11)
    a_path, b_path = tmp_path / "a.txt", tmp_path / "b.txt"
    write_alignment_file(a_path, make_gold(rng, 10, 1.0))
    write_alignment_file(b_path, make_gold(rng, 11, 1.0))
    assert main(["evaluate", "--test", str(a_path), "--gold", str(b_path)]) == 2


# --- help texts -------------------------------------------------------------------

@pytest.mark.parametrize("command", ["align", "delimiters", "simulate", "evaluate"])
def test_help_lists_defaults(command, capsys):
    with pytest.raises(SystemExit) as exc:
        main([command, "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    assert "default" in text
    if command == "align":
        for flag, default in (
            ("--threshold", "0.6"), ("--knn", "4"), ("--max-chunk", "200"),
            ("--band", "10"), ("--max-depth", "3"), ("--jobs", "1"),
        ):
            assert flag in text and default in text
    if command == "simulate":
        assert "--seed" in text and "42" in text


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["align", "--bogus"])
    assert exc.value.code == 2
