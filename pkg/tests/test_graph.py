import pytest

from latsent.graph import (GraphError, from_edge_list, make_complete, make_network,
                           make_ring, make_star, make_topology)


@pytest.mark.parametrize("n", range(1, 9))
def test_complete_edge_count(n):
    g = make_complete(n)
    assert g.num_edges == n * (n - 1) // 2
    assert g.topology_tag == "complete"


def test_small_complete_cases():
    assert make_complete(4).num_edges == 6
    assert make_complete(1).num_edges == 0
    assert make_complete(3).edges == make_ring(3).edges


def test_star():
    g = make_star(5)
    assert g.num_edges == 4
    assert all(0 in e for e in g.edges)
    assert make_star(2).edges == make_complete(2).edges
    assert make_star(4).degrees() == [3, 1, 1, 1]


def test_ring():
    assert set(make_ring(3).edges) == {(0, 1), (1, 2), (0, 2)}
    assert make_ring(4).degrees() == [2, 2, 2, 2]
    assert make_ring(6).num_edges == 6


@pytest.mark.parametrize("builder,n", [(make_complete, 0), (make_star, 1), (make_ring, 2)])
def test_invalid_sizes(builder, n):
    with pytest.raises(GraphError):
        builder(n)


@pytest.mark.parametrize("tag,n", [("complete", 7), ("star", 6), ("ring", 5), ("chain", 5)])
def test_adjacency_symmetric_irreflexive(tag, n):
    g = make_topology(tag, n)
    a = g.adjacency
    assert (a == a.T).all()
    assert not a.diagonal().any()
    for i in range(n):
        assert g.neighbors(i) == sorted(j for j in range(n) if a[i, j])


def test_parse_basic():
    g = from_edge_list("0 1\n1 2")
    assert (g.n, g.num_edges, g.topology_tag) == (3, 2, "custom")


def test_parse_header_and_comments():
    g = from_edge_list("# a comment\nn 5\n\n0 1\n1 0\n")
    assert g.n == 5
    assert g.edges == ((0, 1),)


def test_parse_self_loop_reports_line():
    with pytest.raises(GraphError, match="line 1"):
        from_edge_list("0 0")
    with pytest.raises(GraphError, match="line 3"):
        from_edge_list("0 1\n# x\n2 2")


def test_parse_bad_token():
    with pytest.raises(GraphError, match="line 2.*parse"):
        from_edge_list("0 1\n1 b")


def test_parse_index_beyond_header():
    with pytest.raises(GraphError):
        from_edge_list("n 2\n0 3")


def test_disconnected_custom_graph_allowed():
    g = from_edge_list("n 6\n0 1\n3 4")
    assert g.n == 6 and g.degrees()[5] == 0


@pytest.mark.parametrize("g", [make_complete(5), make_star(6), make_ring(7),
                               make_network(9, [(8, 0), (3, 2), (2, 3), (4, 7)])])
def test_round_trip(g):
    back = from_edge_list(g.serialize())
    assert back.n == g.n and back.edges == g.edges
    lines = g.serialize().splitlines()
    assert lines[0] == f"n {g.n}"
    pairs = [tuple(map(int, ln.split())) for ln in lines[1:]]
    assert pairs == sorted(pairs) and all(i < j for i, j in pairs)


def test_network_is_hashable_and_immutable():
    g = make_ring(5)
    assert hash(g) == hash(make_ring(5))
    with pytest.raises(AttributeError):
        g.n = 4
