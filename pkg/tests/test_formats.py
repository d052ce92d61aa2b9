import numpy as np
import pytest

from glo_ga.formats import (
    FormatError,
    format_results,
    parse_config,
    parse_dimacs_cnf,
    parse_edge_list,
    read_results,
    write_dimacs_cnf,
    write_edge_list,
)
from glo_ga.problems import brute_force

from conftest import maxcut_corpus, maxsat_corpus


class TestDimacs:
    def test_basic(self):
        inst = parse_dimacs_cnf("p cnf 2 2\n1 2 0\n-1 0")
        assert inst.n == 2 and inst.clauses == [(1, 2), (-1,)]
        assert inst.value("01") == 2

    def test_comments_and_multiline_clauses(self):
        text = "c example\nc more\np cnf 3 2\n1 -2\n 3 0 -1\n0\n%\n0\n"
        inst = parse_dimacs_cnf(text)
        assert inst.clauses == [(1, -2, 3), (-1,)]

    @pytest.mark.parametrize(
        "text,line",
        [
            ("p cnf 1 0\n", 1),
            ("p cnf 2 1\n3 0\n", 2),
            ("p cnf 2 2\n1 0\n0\n", 3),
            ("p cnf 2 3\n1 0\n2 0\n", 3),
            ("1 2 0\n", 1),
            ("p cnf 2 1\n1 x 0\n", 2),
        ],
    )
    def test_rejects_with_line(self, text, line):
        with pytest.raises(FormatError) as exc:
            parse_dimacs_cnf(text)
        assert exc.value.line == line

    def test_round_trip(self):
        for inst in maxsat_corpus(10, (2, 9), 5):
            again = parse_dimacs_cnf(write_dimacs_cnf(inst))
            assert again.n == inst.n and again.clauses == inst.clauses
            assert write_dimacs_cnf(again) == write_dimacs_cnf(inst)


class TestEdgeList:
    def test_triangle(self):
        inst = parse_edge_list("3 3\n1 2 1\n1 3 1\n2 3 1")
        assert brute_force(inst).global_optimum_value == 2

    def test_weights(self):
        inst = parse_edge_list("3 2\n1 2 5\n2 3 7")
        assert inst.value("010") == 12

    @pytest.mark.parametrize(
        "text,line,msg",
        [
            ("2 1\n1 1 1", 2, "self-loop"),
            ("2 1\n1 2 0", 2, "weight"),
            ("2 1\n1 3 1", 2, "out of range"),
            ("3 2\n1 2 1", 2, "declares 2"),
            ("3 1\n1 2", 2, "u v w"),
        ],
    )
    def test_rejects_with_line(self, text, line, msg):
        with pytest.raises(FormatError, match=msg) as exc:
            parse_edge_list(text)
        assert exc.value.line == line

    def test_round_trip(self):
        for inst in maxcut_corpus(10, (2, 9), 6):
            again = parse_edge_list(write_edge_list(inst))
            assert again.n == inst.n and again.edges == inst.edges
            X = np.random.default_rng(0).integers(0, 2, (32, inst.n), dtype=np.uint8)
            assert np.array_equal(again.objective(X), inst.objective(X))


class TestConfigAndResults:
    def test_config(self):
        cfg = parse_config("# comment\nmode = plan_only\n--pm=0.1  # inline\nrestart-budget = 3\n")
        assert cfg == {"mode": "plan_only", "pm": "0.1", "restart_budget": "3"}
        with pytest.raises(FormatError):
            parse_config("just words\n")

    @pytest.mark.parametrize("fmt", ["csv", "tsv"])
    def test_results_round_trip(self, fmt):
        rows = [{"a": 1, "b": None, "c": True}, {"a": 2, "b": 0.5, "c": False}]
        text = format_results(rows, ["a", "b", "c"], {"runs": 2, "note": "x"}, fmt)
        assert text.count("# footer") == 1
        got_rows, footer = read_results(text, fmt)
        assert got_rows == [{"a": "1", "b": "", "c": "1"}, {"a": "2", "b": "0.5", "c": "0"}]
        assert footer == {"runs": "2", "note": "x"}
