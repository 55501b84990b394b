import json
import subprocess
import sys

from fgkit.cli import main


def run_cli(args):
    return main(args)


def read_jsonl(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


def test_annotate_mol(tmp_path):
    src = tmp_path / "mols.smi"
    src.write_text("CCO\nCC(=O)O\n")
    out = tmp_path / "out.jsonl"
    assert run_cli(["annotate-mol", "--input", str(src),
                    "--output", str(out)]) == 0
    records = read_jsonl(out)
    assert records[0]["canonical"] == "CCO"
    assert records[0]["functional_groups"] == [
        {"name": "alcohol", "atoms": [1, 2]}]


def test_annotate_mol_error_lines(tmp_path):
    src = tmp_path / "mols.smi"
    src.write_text("CCO\nnot-smiles\n")
    out = tmp_path / "out.jsonl"
    assert run_cli(["annotate-mol", "--input", str(src),
                    "--output", str(out)]) == 1
    records = read_jsonl(out)
    assert "error" in records[1]


def test_annotate_mol_empty_file(tmp_path):
    src = tmp_path / "empty.smi"
    src.write_text("")
    out = tmp_path / "out.jsonl"
    assert run_cli(["annotate-mol", "--input", str(src),
                    "--output", str(out)]) == 0
    assert out.read_text() == ""


def test_unreadable_input_is_exit_2(tmp_path):
    assert run_cli(["annotate-mol", "--input",
                    str(tmp_path / "missing.smi"),
                    "--output", "-"]) == 2


def test_annotate_rxn(tmp_path):
    src = tmp_path / "rxns.smi"
    src.write_text(
        "[CH3:1][OH:2].[C:3](=[O:4])(O)[CH3:5]>>"
        "[CH3:1][O:2][C:3](=[O:4])[CH3:5]\n")
    out = tmp_path / "out.jsonl"
    assert run_cli(["annotate-rxn", "--input", str(src),
                    "--output", str(out)]) == 0
    record = read_jsonl(out)[0]
    assert record["description"] == \
        "Reaction between alcohol and carboxylic acid forming ester."
    assert record["quality"] == "ok"


def test_annotate_rxn_unmapped_flagged(tmp_path):
    src = tmp_path / "rxns.smi"
    src.write_text("CC>>CC\n")
    out = tmp_path / "out.jsonl"
    assert run_cli(["annotate-rxn", "--input", str(src),
                    "--output", str(out)]) == 1
    assert read_jsonl(out)[0]["quality"] == "unannotated-error"


def test_export_catalog(tmp_path):
    out = tmp_path / "catalog.tsv"
    assert run_cli(["export-catalog", "--output", str(out)]) == 0
    lines = [l for l in out.read_text().splitlines()
             if l.strip() and not l.startswith("#")]
    assert len(lines) == 241
    from fgkit.catalog import bundled_catalog_text
    assert out.read_text() == bundled_catalog_text()


def test_score(tmp_path):
    src = tmp_path / "pairs.jsonl"
    cases = [
        {"response": "<think>x</think><answer>OCC</answer>",
         "gold": "CCO", "task_kind": "smiles"},
        {"response": "<answer>CCO</answer>", "gold": "CCO",
         "task_kind": "smiles"},
        {"response": "<think>x</think><answer>b</answer>", "gold": "B",
         "task_kind": "choice"},
    ]
    src.write_text("\n".join(json.dumps(c) for c in cases) + "\n")
    out = tmp_path / "scores.jsonl"
    assert run_cli(["score", "--input", str(src),
                    "--output", str(out)]) == 0
    records = read_jsonl(out)
    assert [r["total"] for r in records] == [2.0, 0.0, 2.0]


def test_score_bad_line_is_record_error(tmp_path):
    src = tmp_path / "pairs.jsonl"
    src.write_text('{"response": "x", "gold": "CCO", "task_kind": "bogus"}\n')
    out = tmp_path / "scores.jsonl"
    assert run_cli(["score", "--input", str(src),
                    "--output", str(out)]) == 1
    assert "error" in read_jsonl(out)[0]


def test_build_corpus(tmp_path, fixtures_dir):
    config = json.loads((fixtures_dir / "corpus_config.json").read_text())
    config["molecules"] = str(fixtures_dir / "corpus_molecules.smi")
    config["reactions"] = None
    config["blacklist"] = None
    config["output"] = str(tmp_path / "corpus.jsonl")
    config["stats"] = str(tmp_path / "stats.json")
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))
    assert run_cli(["build-corpus", "--config", str(config_path)]) == 0
    entries = read_jsonl(tmp_path / "corpus.jsonl")
    stats = json.loads((tmp_path / "stats.json").read_text())
    assert stats["entries"]["total"] == len(entries)
    assert set(stats["entries"]["by_format"]) <= {
        "markdown_list", "markdown_table", "json_dict"}


def test_build_corpus_flag_overrides(tmp_path, fixtures_dir):
    config = json.loads((fixtures_dir / "corpus_config.json").read_text())
    config["molecules"] = str(fixtures_dir / "corpus_molecules.smi")
    config["reactions"] = None
    config["output"] = str(tmp_path / "corpus.jsonl")
    config["stats"] = str(tmp_path / "stats.json")
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))
    assert run_cli(["build-corpus", "--config", str(config_path),
                    "--format", "json_dict", "--seed", "9"]) == 0
    stats = json.loads((tmp_path / "stats.json").read_text())
    assert set(stats["entries"]["by_format"]) == {"json_dict"}


def test_build_corpus_requires_seed(tmp_path):
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({"molecules": "x.smi"}))
    assert run_cli(["build-corpus", "--config", str(config_path)]) == 2


def test_console_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "fgkit.cli", "--version"],
        capture_output=True, text=True)
    assert result.returncode == 0
    assert "fgkit" in result.stdout


def test_streaming_memory_is_line_bounded(tmp_path):
    import tracemalloc

    def peak_for(lines):
        src = tmp_path / f"stream_{lines}.smi"
        src.write_text("CCO\n" * lines)
        out = tmp_path / f"stream_{lines}.jsonl"
        tracemalloc.start()
        assert run_cli(["annotate-mol", "--input", str(src),
                        "--output", str(out)]) == 0
        _, peak = tracemalloc.get_traced_memory()
        tracemalloc.stop()
        return peak

    small = peak_for(100)
    large = peak_for(2000)
    # Generator discipline: peak memory must not grow with line count.
    assert large < small * 5 + 2_000_000


def test_stdin_stdout_streams(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "fgkit.cli", "annotate-mol",
         "--input", "-", "--output", "-"],
        input="CCO\n", capture_output=True, text=True)
    assert result.returncode == 0
    assert json.loads(result.stdout)["canonical"] == "CCO"
