import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pytest

from polmon.corpus import Kind, TweetRecord
from polmon.graphkit import InteractionGraph

sys.path.insert(0, str(Path(__file__).parent))  # for `import oracles`

DATA = Path(__file__).parent / "data"

WINDOW = (datetime(2022, 8, 1, tzinfo=timezone.utc),
          datetime(2022, 9, 1, tzinfo=timezone.utc))


def graph_of(edges, isolated=(), window=WINDOW) -> InteractionGraph:
    """Small-graph literal: edge pairs plus extra isolated nodes."""
    nodes = set(isolated)
    cleaned = set()
    for u, v in edges:
        nodes.update((u, v))
        cleaned.add((u, v) if u < v else (v, u))
    return InteractionGraph(window=window, nodes=tuple(sorted(nodes)),
                            edges=tuple(sorted(cleaned)))


def random_graph(rng: np.random.Generator, n: int, p: float,
                 window=WINDOW) -> InteractionGraph:
    names = [f"n{i:03d}" for i in range(n)]
    edges = [(names[i], names[j])
             for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return graph_of(edges, isolated=names)


def tweet(tweet_id="t1", author="a", ts="2022-08-05T12:00:00Z",
          text="υποκλοπές", lang="el", kind=Kind.ORIGINAL, hashtags=(),
          refs=(), **kwargs) -> TweetRecord:
    return TweetRecord(
        tweet_id=tweet_id, author_id=author,
        timestamp=datetime.fromisoformat(ts.replace("Z", "+00:00")),
        text=text, lang=lang, kind=kind, hashtags=list(hashtags),
        referenced_user_ids=list(refs), **kwargs)


@pytest.fixture
def fixture_paths():
    return {
        "tweets": DATA / "fixture_tweets.jsonl",
        "annotations": DATA / "fixture_annotations.csv",
        "follows": DATA / "fixture_follows.csv",
        "config": DATA / "fixture_config.json",
    }
