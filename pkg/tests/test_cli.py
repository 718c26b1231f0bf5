import pytest

from cbdl.cli import main
from cbdl.samples import ONTO2, chain_ontology


@pytest.fixture
def onto2_file(tmp_path):
    p = tmp_path / "onto2.dl"
    p.write_text(ONTO2)
    return p


def test_classify_to_file(onto2_file, tmp_path, capsys):
    out = tmp_path / "result.txt"
    assert main(["classify", str(onto2_file), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[:4] == ["B0 SubClassOf B4", "B2 SubClassOf B4", "B3 SubClassOf B4", "# stats"]
    assert "classified in" in capsys.readouterr().err


def test_classify_output_is_deterministic(onto2_file, capsys):
    main(["classify", str(onto2_file)])
    first = capsys.readouterr().out
    main(["classify", str(onto2_file), "--strategy", "eager", "--seed", "3"])
    second = capsys.readouterr().out
    assert first.split("# stats")[0] == second.split("# stats")[0]


@pytest.mark.parametrize("query, expected", [
    ("B0 SubClassOf B4", "ENTAILED"),
    ("B0 SubClassOf B2", "NOT ENTAILED"),
])
def test_entail(onto2_file, capsys, query, expected):
    assert main(["entail", str(onto2_file), "--query", query]) == 0
    assert capsys.readouterr().out.strip() == expected


def test_sat(tmp_path, capsys):
    p = tmp_path / "o.dl"
    p.write_text("A SubClassOf B\nA And B SubClassOf Bottom\n")
    assert main(["sat", str(p), "--query", "A"]) == 0
    assert capsys.readouterr().out.strip() == "UNSATISFIABLE"
    assert main(["sat", str(p), "--query", "B SubClassOf Bottom"]) == 0
    assert capsys.readouterr().out.strip() == "SATISFIABLE"
    assert main(["sat", str(p), "--query", "A SubClassOf B"]) == 1


def test_trace_goes_to_stderr(onto2_file, capsys):
    main(["entail", str(onto2_file), "--query", "B0 SubClassOf B4", "--trace"])
    err = capsys.readouterr().err
    assert "Init 0#0 <- []  Top -> B0(x)" in err


def test_input_errors(tmp_path, capsys):
    assert main(["classify", str(tmp_path / "missing.dl")]) == 1
    bad = tmp_path / "bad.dl"
    bad.write_text("A SubClassOf\n")
    assert main(["classify", str(bad)]) == 1
    assert "line 1, column 13" in capsys.readouterr().err


def test_bad_query(onto2_file):
    assert main(["entail", str(onto2_file), "--query", "B0 SubClassOf"]) == 1


def test_resource_abort(tmp_path, capsys):
    p = tmp_path / "chain.dl"
    p.write_text(chain_ontology(5))
    assert main(["classify", str(p), "--max-clauses", "10"]) == 2
    assert "aborted" in capsys.readouterr().err


def test_oracle_check(capsys):
    assert main(["oracle-check", "--samples", "20"]) == 0
    assert "checked 20 ontologies, 0 disagreements" in capsys.readouterr().out


def test_oracle_check_rejects_non_elh(onto2_file):
    assert main(["oracle-check", str(onto2_file)]) == 1


def test_dump_graph(onto2_file, tmp_path):
    base = tmp_path / "graph"
    assert main(["dump-graph", str(onto2_file), "--query", "B0 SubClassOf B4",
                 "--strategy", "eager", "--out", str(base)]) == 0
    assert (tmp_path / "graph.dot").read_text().startswith("digraph")
    assert "# contexts 4 edges 3" in (tmp_path / "graph.txt").read_text()


def test_jobs(onto2_file, capsys):
    assert main(["classify", str(onto2_file), "--jobs", "2"]) == 0
    assert capsys.readouterr().out.startswith("B0 SubClassOf B4\n")


def test_unknown_strategy(onto2_file):
    with pytest.raises(SystemExit):
        main(["classify", str(onto2_file), "--strategy", "lazy"])
