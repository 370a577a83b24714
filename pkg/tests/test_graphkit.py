from datetime import datetime, timezone

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from polmon.corpus import Kind
from polmon.graphkit import (build_graph, daily_graphs, day_window,
                             export_edgelist, export_graph, import_graph,
                             remove_nodes, union_graph)

from conftest import WINDOW, graph_of, tweet


def test_bidirectional_interactions_single_edge():
    tweets = [
        tweet("t1", author="A", kind=Kind.RETWEET, refs=["B"]),
        tweet("t2", author="B", kind=Kind.ORIGINAL, refs=["A"],
              text="γεια @A υποκλοπές"),
    ]
    g = build_graph(tweets, WINDOW)
    assert g.nodes == ("A", "B")
    assert g.edges == (("A", "B"),)


def test_repeated_interactions_collapse():
    tweets = [tweet(f"t{i}", author="A", kind=Kind.RETWEET, refs=["B"])
              for i in range(3)]
    tweets.append(tweet("t9", author="A", kind=Kind.QUOTE, refs=["B"]))
    g = build_graph(tweets, WINDOW)
    assert g.edges == (("A", "B"),)
    assert g.m == 1


def test_reference_free_tweet_gives_isolated_node():
    g = build_graph([tweet("t1", author="A")], WINDOW)
    assert g.nodes == ("A",)
    assert g.edges == ()


def test_self_reply_drops_self_loop():
    g = build_graph([tweet("t1", author="A", kind=Kind.REPLY, refs=["A"])],
                    WINDOW)
    assert g.nodes == ("A",)
    assert g.edges == ()


def test_window_is_half_open():
    start, end = day_window(datetime(2022, 8, 5, tzinfo=timezone.utc).date())
    inside = tweet("t1", author="A", ts="2022-08-05T23:59:59Z")
    outside = tweet("t2", author="B", ts="2022-08-06T00:00:01Z")
    g = build_graph([inside, outside], (start, end))
    assert g.nodes == ("A",)


def test_daily_graphs_bucketing():
    tweets = [
        tweet("t1", author="A", ts="2022-08-05T23:59:59Z"),
        tweet("t2", author="B", ts="2022-08-06T00:00:01Z"),
    ]
    days = daily_graphs(tweets)
    assert [d.isoformat() for d, _ in days] == ["2022-08-05", "2022-08-06"]
    assert days[0][1].nodes == ("A",)
    assert days[1][1].nodes == ("B",)


def test_daily_graphs_single_date_equals_full_build():
    tweets = [
        tweet("t1", author="A", kind=Kind.RETWEET, refs=["B"],
              ts="2022-08-05T08:00:00Z"),
        tweet("t2", author="C", ts="2022-08-05T09:00:00Z"),
    ]
    days = daily_graphs(tweets)
    assert len(days) == 1
    full = build_graph(tweets, WINDOW)
    assert days[0][1].nodes == full.nodes
    assert days[0][1].edges == full.edges


def test_daily_union_covers_full_window_edges():
    tweets = [
        tweet("t1", author="A", kind=Kind.RETWEET, refs=["B"],
              ts="2022-08-05T08:00:00Z"),
        tweet("t2", author="B", kind=Kind.REPLY, refs=["C"],
              ts="2022-08-06T08:00:00Z"),
        tweet("t3", author="A", kind=Kind.QUOTE, refs=["B"],
              ts="2022-08-06T10:00:00Z"),
    ]
    union = union_graph((g for _, g in daily_graphs(tweets)), WINDOW)
    full = build_graph(tweets, WINDOW)
    assert union.edges == full.edges
    assert union.nodes == full.nodes


@settings(max_examples=50, deadline=None)
@given(st.permutations(list(range(6))))
def test_build_graph_order_invariant(order):
    base = [
        tweet("t0", author="A", kind=Kind.RETWEET, refs=["B"]),
        tweet("t1", author="B", kind=Kind.REPLY, refs=["C", "A"]),
        tweet("t2", author="C", kind=Kind.QUOTE, refs=["A"]),
        tweet("t3", author="D"),
        tweet("t4", author="C", kind=Kind.RETWEET, refs=["B"]),
        tweet("t5", author="E", kind=Kind.REPLY, refs=["A"]),
    ]
    reference = build_graph(base, WINDOW)
    shuffled = build_graph([base[i] for i in order], WINDOW)
    assert shuffled.nodes == reference.nodes
    assert shuffled.edges == reference.edges


def test_simple_graph_invariants():
    rng = np.random.default_rng(5)
    from conftest import random_graph
    g = random_graph(rng, 25, 0.2)
    assert g.m <= g.n * (g.n - 1) // 2
    assert all(u != v for u, v in g.edges)
    assert all(u < v for u, v in g.edges)
    indptr, indices = g.csr
    assert indptr[-1] == 2 * g.m
    assert (np.diff(indptr) == g.degrees).all()


def test_node_index_is_sorted_dense():
    g = graph_of([("zeta", "alpha"), ("alpha", "mid")])
    assert g.nodes == ("alpha", "mid", "zeta")
    assert g.node_index == {"alpha": 0, "mid": 1, "zeta": 2}


def test_remove_hub_keep_isolated():
    star = graph_of([("hub", f"s{i}") for i in range(4)])
    out = remove_nodes(star, {"hub"}, drop_isolated=False)
    assert out.n == 4
    assert out.m == 0


def test_remove_hub_drop_isolated():
    star = graph_of([("hub", f"s{i}") for i in range(4)])
    out = remove_nodes(star, {"hub"}, drop_isolated=True)
    assert out.n == 0


def test_remove_preserves_preexisting_isolated():
    g = graph_of([("a", "b")], isolated=["lone"])
    out = remove_nodes(g, {"a"}, drop_isolated=True)
    # b became isolated by the removal (dropped); lone was already isolated
    assert out.nodes == ("lone",)


def test_remove_disjoint_victims_is_identity():
    g = graph_of([("a", "b"), ("b", "c")])
    out = remove_nodes(g, {"zz"}, drop_isolated=True)
    assert out.nodes == g.nodes
    assert out.edges == g.edges


def test_remove_empty_victims_returns_same_graph():
    g = graph_of([("a", "b")])
    assert remove_nodes(g, set()) is g


def test_graphml_round_trip(tmp_path):
    g = graph_of([("a", "b"), ("b", "c")], isolated=["d"])
    path = tmp_path / "g.graphml"
    export_graph(g, path)
    back, attrs = import_graph(path)
    assert back.nodes == g.nodes
    assert back.edges == g.edges
    assert attrs["a"]["stance"] == "Neutral"
    assert attrs["a"]["category"] == "Individual"


def test_graphml_attributes(tmp_path):
    from polmon.corpus import AccountAnnotation, Category, Side
    from polmon.stance import Stance, StanceAssignment
    g = graph_of([("a", "b")])
    stances = {"a": StanceAssignment("a", Stance.LEFT, 2, 0, 0, 0.0)}
    annotations = {"b": AccountAnnotation("b", Category.POLITICAL, Side.RIGHT)}
    path = tmp_path / "g.graphml"
    export_graph(g, path, stances=stances, annotations=annotations)
    _, attrs = import_graph(path)
    assert attrs["a"]["stance"] == "Left"
    assert attrs["b"]["category"] == "Political"


def test_graphml_empty_graph(tmp_path):
    g = graph_of([])
    path = tmp_path / "empty.graphml"
    export_graph(g, path)
    back, _ = import_graph(path)
    assert back.n == 0
    assert back.m == 0


def test_graphml_edge_count(tmp_path):
    g = graph_of([("a", "b")])
    path = tmp_path / "two.graphml"
    export_graph(g, path)
    assert path.read_text(encoding="utf-8").count("<edge ") == 1


def test_edgelist_export(tmp_path):
    g = graph_of([("b", "a"), ("c", "a")])
    path = tmp_path / "edges.txt"
    export_edgelist(g, path)
    assert path.read_text(encoding="utf-8") == "a\tb\na\tc\n"
