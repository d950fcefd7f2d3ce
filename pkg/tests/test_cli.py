from __future__ import annotations

import io
import json

import pytest

from surfparse import demo
from surfparse.cli import CONFIG_ENV, main
from surfparse.core import serialize_cohort_stream
from surfparse.engine import disambiguate, parse_trace


def data(name: str) -> str:
    return str(demo.data_path(name))


def read(path) -> str:
    return open(path, encoding="utf-8").read()


@pytest.fixture
def sentence_one(tmp_path):
    p = tmp_path / "one.txt"
    p.write_text(demo.corpus_lines()[0] + "\n", encoding="utf-8")
    return p


def test_analyze_golden(sentence_one, capsys):
    assert main(["analyze", str(sentence_one)]) == 0
    assert capsys.readouterr().out == read(data("table_ambiguous.cohorts"))


def test_analyze_reads_stdin_and_reports_stats(sentence_one, capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(read(sentence_one)))
    assert main(["analyze", "--stats"]) == 0
    cap = capsys.readouterr()
    assert cap.out == read(data("table_ambiguous.cohorts"))
    assert cap.err.startswith("readings/word ")


def test_disambiguate_golden(capsys):
    assert main(["disambiguate", data("table_ambiguous.cohorts")]) == 0
    assert capsys.readouterr().out == read(data("table_disambiguated.cohorts"))


def test_fsig_golden(capsys):
    assert main(["fsig-parse", "--penalty", data("penalty.txt"), data("table_ambiguous.cohorts")]) == 0
    assert capsys.readouterr().out == read(data("table_fsig_one.cohorts"))


def test_fsig_all_respects_limit(capsys):
    assert main(["fsig-parse", "--all", "--limit", "5", data("table_ambiguous.cohorts")]) == 0
    assert capsys.readouterr().out.count('"<$.>"') == 5


def test_pipe_composition_matches_in_process(tmp_path, corpus, grammar):
    text = tmp_path / "corpus.txt"
    text.write_text("\n".join(demo.corpus_lines()[:30]) + "\n", encoding="utf-8")
    analysed, out = tmp_path / "a.cohorts", tmp_path / "d.cohorts"
    assert main(["analyze", str(text), "-o", str(analysed)]) == 0
    assert main(["disambiguate", str(analysed), "-o", str(out)]) == 0
    want = serialize_cohort_stream(disambiguate(s, grammar).sentence for s in corpus[:30])
    assert read(out) == want


def test_jobs_do_not_change_output(tmp_path):
    text = tmp_path / "corpus.txt"
    text.write_text("\n".join(demo.corpus_lines()[:40]) + "\n", encoding="utf-8")
    analysed = tmp_path / "a.cohorts"
    assert main(["analyze", str(text), "-o", str(analysed)]) == 0
    outs = []
    for jobs in ("1", "2"):
        out = tmp_path / f"d{jobs}.cohorts"
        assert main(["disambiguate", "--heuristic", "--map", "-j", jobs, str(analysed), "-o", str(out)]) == 0
        outs.append(read(out))
    assert outs[0] == outs[1]


def test_trace_file_replays(tmp_path):
    trace = tmp_path / "t.trace"
    assert main(["disambiguate", "--trace", str(trace), data("table_ambiguous.cohorts"), "-o", str(tmp_path / "o")]) == 0
    events = parse_trace(read(trace))
    assert events and all(e.sentence == 0 for e in events)


def test_trace_with_text_based_is_a_usage_error(tmp_path, capsys):
    code = main(["disambiguate", "--text-based", "--trace", str(tmp_path / "t"), data("table_ambiguous.cohorts")])
    assert code == 1 and "--trace" in capsys.readouterr().err


def test_text_based_cylinder(tmp_path, capsys):
    analysed = tmp_path / "c.cohorts"
    assert main(["analyze", data("cylinder.txt"), "-o", str(analysed)]) == 0
    assert main(["disambiguate", "--text-based", str(analysed)]) == 0
    plain = capsys.readouterr().out
    assert main(["disambiguate", "--text-based", "--no-noun-groups", "--no-predominance", str(analysed)]) == 0
    assert capsys.readouterr().out.count("(") < read(analysed).count("(")
    assert plain.count("(") <= read(analysed).count("(")


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--lexicon", "/nonexistent/lex.cohorts", "x"],
        ["disambiguate", "--grammar", "/nonexistent/g.cg"],
        ["disambiguate", "--jobs", "0", "x"],
        ["eval", "--gold", "/nonexistent"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert capsys.readouterr().err.startswith("surfparse: ")


@pytest.mark.parametrize("argv", [["frobnicate"], ["disambiguate", "--max-passes", "many"]])
def test_argument_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as raised:
        main(argv)
    assert raised.value.code == 1
    assert "error:" in capsys.readouterr().err


def test_malformed_cohorts_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.cohorts"
    bad.write_text('("<run>"\n  ("run" N\n', encoding="utf-8")
    assert main(["disambiguate", str(bad)]) == 1
    assert "bad.cohorts" in capsys.readouterr().err


def test_rejection_exit_2(tmp_path, capsys):
    g = tmp_path / "none.grammar"
    g.write_text('REJECT "all": .* ;\n', encoding="utf-8")
    assert main(["fsig-parse", "--fsig-grammar", str(g), data("table_ambiguous.cohorts")]) == 2
    assert "rejected" in capsys.readouterr().err


def test_oracle_cross_check(tmp_path, capsys):
    assert main(["fsig-parse", "--all", "--oracle", "--bound", "4096", data("table_ambiguous.cohorts")]) == 0
    assert "mismatch" not in capsys.readouterr().err


def test_config_file_and_precedence(tmp_path, monkeypatch, capsys):
    empty = tmp_path / "empty.cg"
    empty.write_text("", encoding="utf-8")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"grammar": str(empty)}), encoding="utf-8")
    monkeypatch.setenv(CONFIG_ENV, str(cfg))
    assert main(["disambiguate", data("table_ambiguous.cohorts")]) == 0
    assert capsys.readouterr().out == read(data("table_ambiguous.cohorts"))
    # a command-line value wins over the config file
    assert main(["disambiguate", "--grammar", data("grammar.cg"), data("table_ambiguous.cohorts")]) == 0
    assert capsys.readouterr().out == read(data("table_disambiguated.cohorts"))


def test_config_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"grammer": "x"}', encoding="utf-8")
    assert main(["disambiguate", "--config", str(cfg), data("table_ambiguous.cohorts")]) == 1
    assert "grammer" in capsys.readouterr().err


def test_eval_counts_table(capsys):
    assert main(["eval", "--counts", data("tagger_counts.tsv")]) == 0
    assert capsys.readouterr().out == read(data("tagger_report.txt"))


def test_eval_against_gold(tmp_path, capsys):
    analysed, out = tmp_path / "a.cohorts", tmp_path / "sys.cohorts"
    assert main(["analyze", data("demo_gold.txt"), "-o", str(analysed)]) == 0
    assert main(["disambiguate", str(analysed), "-o", str(out)]) == 0
    assert main(["eval", "--tsv", "--gold", data("demo_gold.cohorts"), str(out)]) == 0
    row = capsys.readouterr().out.splitlines()[1].split("\t")
    assert row == ["sys", "100.00%", "84.48%", "49", "87.76%", "1.18", "0"]


def test_eval_misaligned_exit_1(capsys):
    assert main(["eval", "--gold", data("demo_gold.cohorts"), data("table_ambiguous.cohorts")]) == 1
    assert "misaligned" in capsys.readouterr().err


def test_stats_and_lexical_stats(capsys):
    assert main(["stats", data("table_ambiguous.cohorts")]) == 0
    lines = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
    assert lines["sentences"] == "1" and lines["words"] == "5"
    assert main(["stats", "--lexical", data("table_disambiguated.cohorts")]) == 0
    assert "table\tN\t1" in capsys.readouterr().out


def test_extract_ngroups(tmp_path, capsys):
    analysed, out = tmp_path / "c.cohorts", tmp_path / "d.cohorts"
    assert main(["analyze", data("cylinder.txt"), "-o", str(analysed)]) == 0
    assert main(["disambiguate", str(analysed), "-o", str(out)]) == 0
    assert main(["extract-ngroups", str(out)]) == 0
    assert "cylinder/N head/N" in capsys.readouterr().out.splitlines()
