"""The .pgr text format: canonical serialization, parsing, error reporting."""

import pytest

from conftest import bowtie_crosscap, random_multigraph, triangle
from crossflow.families import gen_counterexample, gen_random_pt
from crossflow.pgr import (
    PgrError,
    digest_graph,
    parse_graph,
    parse_orientation,
    serialize_graph,
    serialize_orientation,
)


def test_roundtrip_triangle():
    g = triangle()
    h, p = parse_graph(serialize_graph(g))
    assert h == g and p is None


def test_roundtrip_random_graphs():
    for seed in range(30):
        g = random_multigraph(seed)
        h, _ = parse_graph(serialize_graph(g))
        assert h == g, f"seed {seed}"


def test_roundtrip_with_prescription_and_marks():
    g, p, dspec = gen_counterexample(0)
    text = serialize_graph(g, p)
    h, q = parse_graph(text)
    assert h == g
    assert q == p
    assert h.tvertex == g.tvertex and h.dvertex == g.dvertex
    assert h.darcs == g.darcs


def test_serialization_is_canonical():
    g, p = gen_random_pt(5, 9)
    text = serialize_graph(g, p)
    h, q = parse_graph(text)
    assert serialize_graph(h, q) == text


def test_two_specified_faces_roundtrip():
    from crossflow.embedding import split_doubled_boundary_vertex

    out = split_doubled_boundary_vertex(bowtie_crosscap(), 0)
    h, _ = parse_graph(serialize_graph(out))
    assert h == out
    assert len(h.specified) == 2


def test_comments_and_blanks_ignored():
    g = triangle()
    lines = serialize_graph(g).splitlines()
    noisy = "\n".join(["# header note", lines[0], ""] + lines[1:] + ["  # trailing"])
    h, _ = parse_graph(noisy)
    assert h == g


def test_digest_ignores_labels():
    g = triangle()
    h = g.copy()
    h.labels[0] = "renamed"
    assert digest_graph(g) == digest_graph(h)


def test_digest_sees_signs():
    g = triangle()
    h = g.copy()
    h.sign[0] = -1
    assert digest_graph(g) != digest_graph(h)


def test_orientation_file_roundtrip():
    tails = {0: 1, 1: 2, 2: 0}
    assert parse_orientation(serialize_orientation(tails)) == tails


# ------------------------------------------------------------------- errors


def _expect_error(text, fragment):
    with pytest.raises(PgrError) as exc:
        parse_graph(text)
    assert fragment in str(exc.value)


def test_missing_header():
    _expect_error("vertex 0\n", "pgr 1")


def test_bad_sign():
    _expect_error("pgr 1\nvertex 0\nvertex 1\nedge 0 0 1 2\n", "sign")


def test_edge_with_unknown_vertex():
    _expect_error("pgr 1\nvertex 0\nedge 0 0 9 +1\n", "9")


def test_duplicate_edge_id():
    _expect_error(
        "pgr 1\nvertex 0\nvertex 1\nedge 0 0 1 +1\nedge 0 1 0 +1\n", "edge 0"
    )


def test_error_reports_line_number():
    with pytest.raises(PgrError) as exc:
        parse_graph("pgr 1\nvertex 0\nbogus 1 2\n")
    assert exc.value.line == 3


def test_rotation_must_match_incidences():
    text = "pgr 1\nvertex 0\nvertex 1\nedge 0 0 1 +1\nrot 0 0.1\n"
    with pytest.raises(PgrError):
        parse_graph(text)
