"""End-to-end analyses over a corpus: stats, shares, PI series, ablations,
threshold sweeps, communities, and the deterministic report bundle.

Everything here is glue around the other modules; the one piece of real
policy is the rounding rule for percentage tables (round-half-even to one
decimal, remainder pinned onto the largest share so rows always total
100.0) and the tokenizer used for word/phrase counts (unicode letter runs,
case/accent-folded, contiguous bigrams as phrases).
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from . import __version__, _kernels
from .corpus import (Category, FilterReport, Kind, RuleSet, TweetRecord,
                     default_rule_set, filter_corpus, fold_text,
                     load_annotations, load_follows, load_rule_set,
                     load_tweets, tweet_to_obj)
from .graphkit import (InteractionGraph, build_graph, daily_graphs,
                       export_graph, remove_nodes)
from .polarization import PolarizationResult, SolverMethod, compute_pi
from .stance import Stance, StanceAssignment, stance_map, write_stance_csv
from .structure import decompose_communities, louvain, netshield

log = logging.getLogger(__name__)

ABLATION_CATEGORIES = ("Political", "MediaJournalist", "Influencers")

_WORD_RE = re.compile(r"[^\W\d_]+", re.UNICODE)


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------


@dataclass
class DailyStats:
    date: date | None  # None = aggregate over the whole input
    n_posts: int
    n_by_kind: dict[str, int]
    n_users: int
    n_hashtags: int
    n_urls: int
    top: dict[str, list[tuple[str, int]]]


def tokenize(text: str) -> list[str]:
    return [fold_text(w) for w in _WORD_RE.findall(text)]


def _top(counter: Counter, k: int) -> list[tuple[str, int]]:
    return sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))[:k]


def _stats_for(group: Sequence[TweetRecord], day: date | None, top_k: int,
               stopwords: frozenset[str]) -> DailyStats:
    by_kind = {k.value: 0 for k in Kind}
    users: set[str] = set()
    hashtags = Counter()
    urls = Counter()
    images = Counter()
    videos = Counter()
    mentioned = Counter()
    active = Counter()
    words = Counter()
    phrases = Counter()
    for t in group:
        by_kind[t.kind.value] += 1
        users.add(t.author_id)
        active[t.author_id] += 1
        for h in t.hashtags:
            hashtags[h] += 1
        for u in t.urls:
            urls[u] += 1
        for m in t.media:
            (images if m.kind.value == "image" else videos)[m.url] += 1
        for ref in t.referenced_user_ids:
            mentioned[ref] += 1
        tokens = [w for w in tokenize(t.text) if w not in stopwords]
        words.update(tokens)
        phrases.update(f"{a} {b}" for a, b in zip(tokens, tokens[1:]))
    ranked_tweets = sorted(group, key=lambda t: t.tweet_id)
    top = {
        "liked_tweets": _top(Counter({t.tweet_id: t.like_count
                                      for t in ranked_tweets}), top_k),
        "retweeted_tweets": _top(Counter({t.tweet_id: t.retweet_count
                                          for t in ranked_tweets}), top_k),
        "replied_tweets": _top(Counter({t.tweet_id: t.reply_count
                                        for t in ranked_tweets}), top_k),
        "mentioned_users": _top(mentioned, top_k),
        "active_users": _top(active, top_k),
        "shared_urls": _top(urls, top_k),
        "shared_images": _top(images, top_k),
        "shared_videos": _top(videos, top_k),
        "words": _top(words, top_k),
        "phrases": _top(phrases, top_k),
        "hashtags": _top(hashtags, top_k),
    }
    return DailyStats(date=day, n_posts=len(group), n_by_kind=by_kind,
                      n_users=len(users), n_hashtags=len(hashtags),
                      n_urls=len(urls), top=top)


def compute_stats(tweets: Sequence[TweetRecord], per_day: bool = True,
                  top_k: int = 10, stopwords: Iterable[str] = (),
                  offset_minutes: int = 0) -> list[DailyStats]:
    """Per-day statistics (ascending date), or one aggregate row."""
    stop = frozenset(stopwords)
    if not per_day:
        return [_stats_for(list(tweets), None, top_k, stop)]
    shift = timedelta(minutes=offset_minutes)
    by_date: dict[date, list[TweetRecord]] = {}
    for t in tweets:
        by_date.setdefault((t.timestamp + shift).date(), []).append(t)
    return [_stats_for(by_date[d], d, top_k, stop) for d in sorted(by_date)]


# ---------------------------------------------------------------------------
# stance shares
# ---------------------------------------------------------------------------


def rounded_percentages(counts: Mapping[str, int]) -> dict[str, float]:
    """Percentages in tenths that sum to exactly 100.0 (when total > 0).

    Each share rounds half-even to one decimal; whatever tenths remain are
    assigned to the largest raw share (ties: lexicographically first key).
    """
    total = sum(counts.values())
    if total == 0:
        return {k: 0.0 for k in counts}
    tenths = {k: round(1000 * v / total) for k, v in counts.items()}
    leftover = 1000 - sum(tenths.values())
    if leftover:
        largest = min(counts, key=lambda k: (-counts[k], k))
        tenths[largest] += leftover
    return {k: t / 10 for k, t in tenths.items()}


@dataclass
class StanceShares:
    tweet_counts: dict[str, int]
    user_counts: dict[str, int]
    tweet_pct: dict[str, float]
    user_pct: dict[str, float]


def stance_shares(tweets: Sequence[TweetRecord],
                  stances: Mapping[str, StanceAssignment]) -> StanceShares:
    """Tweet volume and unique-author shares per stance label."""
    tweet_counts = {s.value: 0 for s in Stance}
    user_counts = {s.value: 0 for s in Stance}
    seen: set[str] = set()
    for t in tweets:
        entry = stances.get(t.author_id)
        label = entry.stance.value if entry else Stance.NEUTRAL.value
        tweet_counts[label] += 1
        if t.author_id not in seen:
            seen.add(t.author_id)
            user_counts[label] += 1
    return StanceShares(tweet_counts=tweet_counts, user_counts=user_counts,
                        tweet_pct=rounded_percentages(tweet_counts),
                        user_pct=rounded_percentages(user_counts))


# ---------------------------------------------------------------------------
# polarization series, ablation, threshold sweep
# ---------------------------------------------------------------------------


def _pmap(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def pi_series(graphs: Sequence[tuple[date, InteractionGraph]],
              stances: Mapping[str, StanceAssignment],
              workers: int = 1,
              **pi_kwargs) -> list[tuple[date, PolarizationResult | None]]:
    """compute_pi per day; a failing day becomes a flagged gap (None)."""

    def one(pair: tuple[date, InteractionGraph]):
        d, g = pair
        try:
            return d, compute_pi(g, stances, **pi_kwargs)
        except Exception as exc:
            log.warning("pi series gap on %s: %s", d, exc)
            return d, None

    return _pmap(one, list(graphs), workers)


@dataclass
class AblationResult:
    date: date | None
    pi_full: float
    pi_without: dict[str, float]
    drop_isolated: bool


def category_victims(annotations: Mapping, category: Category) -> set[str]:
    return {uid for uid, ann in annotations.items() if ann.category is category}


def ablation(g: InteractionGraph,
             stances: Mapping[str, StanceAssignment],
             annotations: Mapping,
             influencer_set: Iterable[str],
             drop_isolated: bool = True,
             result_date: date | None = None,
             **pi_kwargs) -> AblationResult:
    """PI of g and of g without each connector category.

    Removing a category absent from the graph is a no-op and reproduces
    pi_full; removing everything raises (the index is undefined on an
    empty graph) with the offending category named.
    """
    victims_by_cat = {
        "Political": category_victims(annotations, Category.POLITICAL),
        "MediaJournalist": category_victims(annotations,
                                            Category.MEDIA_JOURNALIST),
        "Influencers": set(influencer_set),
    }
    pi_full = compute_pi(g, stances, **pi_kwargs).pi
    pi_without = {}
    for name in ABLATION_CATEGORIES:
        reduced = remove_nodes(g, victims_by_cat[name], drop_isolated)
        try:
            pi_without[name] = compute_pi(reduced, stances, **pi_kwargs).pi
        except ValueError as exc:
            raise ValueError(f"removing {name} nodes: {exc}") from exc
    return AblationResult(date=result_date, pi_full=pi_full,
                          pi_without=pi_without, drop_isolated=drop_isolated)


@dataclass
class ThresholdSweepEntry:
    threshold: float
    pi_full: float
    pi_without: dict[str, float]
    n_left_users: int
    n_right_users: int


@dataclass
class ThresholdSweepResult:
    thresholds: list[float]
    entries: list[ThresholdSweepEntry]


def threshold_sweep(g: InteractionGraph,
                    follows,
                    annotations: Mapping,
                    thresholds: Sequence[float] = (0.0, 0.5, 0.7),
                    influencer_set: Iterable[str] | None = None,
                    drop_isolated: bool = True,
                    k: int = 500,
                    **pi_kwargs) -> ThresholdSweepResult:
    """Re-infer stances and redo every ablation PI at each threshold."""
    if influencer_set is None:
        influencer_set = netshield(g, min(k, g.n)).selected
    entries = []
    for t in thresholds:
        stances = stance_map(follows, annotations, threshold=t,
                             ensure_users=g.nodes)
        result = ablation(g, stances, annotations, influencer_set,
                          drop_isolated=drop_isolated, **pi_kwargs)
        n_left = sum(1 for u in g.nodes
                     if stances[u].stance is Stance.LEFT)
        n_right = sum(1 for u in g.nodes
                      if stances[u].stance is Stance.RIGHT)
        entries.append(ThresholdSweepEntry(
            threshold=t, pi_full=result.pi_full,
            pi_without=result.pi_without,
            n_left_users=n_left, n_right_users=n_right))
    return ThresholdSweepResult(thresholds=list(thresholds), entries=entries)


# ---------------------------------------------------------------------------
# run configuration and the report bundle
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    tweets: Path
    annotations: Path
    follows: Path
    out_dir: Path
    rules: Path | None = None  # None -> shipped default rule set
    threshold: float = 0.0
    sweep_thresholds: tuple[float, ...] = (0.0, 0.5, 0.7)
    k: int = 500
    drop_isolated: bool = True
    include_isolated: bool = True
    solver: str = "direct"
    tol: float = 1e-10
    top_k: int = 10
    stopwords: Path | None = None
    date_from: date | None = None
    date_to: date | None = None
    workers: int = 1
    schema_strict: bool = False
    # emit ablation rows for both drop_isolated modes instead of just the
    # configured one (stranded satellites mechanically inflate PI, so the
    # two variants bracket the effect)
    ablate_both_variants: bool = False

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        with path.open("r", encoding="utf-8") as fh:
            raw = json.load(fh)
        base = path.parent

        def respath(key) -> Path | None:
            value = raw.get(key)
            return (base / value).resolve() if value else None

        return cls(
            tweets=respath("tweets"),
            annotations=respath("annotations"),
            follows=respath("follows"),
            out_dir=respath("out_dir") or (base / "out").resolve(),
            rules=respath("rules"),
            threshold=float(raw.get("threshold", 0.0)),
            sweep_thresholds=tuple(raw.get("sweep_thresholds", (0.0, 0.5, 0.7))),
            k=int(raw.get("k", 500)),
            drop_isolated=bool(raw.get("drop_isolated", True)),
            include_isolated=bool(raw.get("include_isolated", True)),
            solver=str(raw.get("solver", "direct")),
            tol=float(raw.get("tol", 1e-10)),
            top_k=int(raw.get("top_k", 10)),
            stopwords=respath("stopwords"),
            date_from=date.fromisoformat(raw["date_from"]) if raw.get("date_from") else None,
            date_to=date.fromisoformat(raw["date_to"]) if raw.get("date_to") else None,
            workers=int(raw.get("workers", 1)),
            schema_strict=bool(raw.get("schema_strict", False)),
            ablate_both_variants=bool(raw.get("ablate_both_variants", False)),
        )

    def echo(self) -> dict:
        out = {}
        for key, value in vars(self).items():
            if isinstance(value, Path):
                value = str(value)
            elif isinstance(value, date):
                value = value.isoformat()
            elif isinstance(value, tuple):
                value = list(value)
            out[key] = value
        return out


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _solver_method(name: str) -> SolverMethod:
    lookup = {"direct": SolverMethod.DIRECT,
              "directsolve": SolverMethod.DIRECT,
              "fixed_point": SolverMethod.FIXED_POINT,
              "fixedpoint": SolverMethod.FIXED_POINT}
    try:
        return lookup[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown solver {name!r}") from None


class Runner:
    """Caches pipeline stages so CLI subcommands can share one code path."""

    def __init__(self, config: RunConfig):
        self.config = config
        self._cache: dict[str, object] = {}
        self.load_errors: list = []

    def _get(self, key: str, builder: Callable):
        if key not in self._cache:
            try:
                self._cache[key] = builder()
            except StageError:
                raise
            except Exception as exc:
                raise StageError(key, exc) from exc
        return self._cache[key]

    # -- stages ------------------------------------------------------------

    @property
    def rule_set(self) -> RuleSet:
        def build():
            rs = (load_rule_set(self.config.rules) if self.config.rules
                  else default_rule_set())
            lo, hi = rs.study_window
            if self.config.date_from:
                lo = max(lo, self.config.date_from)
            if self.config.date_to:
                hi = min(hi, self.config.date_to)
            rs.study_window = (lo, hi)
            return rs
        return self._get("rules", build)

    @property
    def filtered(self) -> tuple[list[TweetRecord], FilterReport]:
        def build():
            tweets = load_tweets(self.config.tweets,
                                 schema_strict=self.config.schema_strict,
                                 error_log=self.load_errors)
            return filter_corpus(self.rule_set, tweets)
        return self._get("filter", build)

    @property
    def annotations(self):
        return self._get("annotations",
                         lambda: load_annotations(self.config.annotations))

    @property
    def follows(self):
        return self._get("follows",
                         lambda: load_follows(self.config.follows,
                                              self.annotations))

    @property
    def window(self) -> tuple[datetime, datetime]:
        lo, hi = self.rule_set.study_window
        shift = timedelta(minutes=self.rule_set.date_offset_minutes)
        start = datetime.combine(lo, time.min, tzinfo=timezone.utc) - shift
        end = datetime.combine(hi + timedelta(days=1), time.min,
                               tzinfo=timezone.utc) - shift
        return start, end

    @property
    def full_graph(self) -> InteractionGraph:
        return self._get("graph",
                         lambda: build_graph(self.filtered[0], self.window))

    @property
    def daily(self) -> list[tuple[date, InteractionGraph]]:
        return self._get("daily", lambda: daily_graphs(
            self.filtered[0], self.rule_set.date_offset_minutes))

    @property
    def stances(self) -> dict[str, StanceAssignment]:
        return self._get("stance", lambda: stance_map(
            self.follows, self.annotations, threshold=self.config.threshold,
            ensure_users=self.full_graph.nodes))

    @property
    def influencer_ranking(self):
        def build():
            g = self.full_graph
            return netshield(g, min(self.config.k, g.n))
        return self._get("influencers", build)

    @property
    def stopword_set(self) -> frozenset[str]:
        def build():
            if not self.config.stopwords:
                return frozenset()
            text = Path(self.config.stopwords).read_text(encoding="utf-8")
            return frozenset(w.strip() for w in text.splitlines() if w.strip())
        return self._get("stopwords", build)

    def _pi_kwargs(self) -> dict:
        return {"method": _solver_method(self.config.solver),
                "tol": self.config.tol,
                "include_isolated": self.config.include_isolated}

    @property
    def series(self):
        return self._get("polarize", lambda: pi_series(
            self.daily, self.stances, workers=self.config.workers,
            **self._pi_kwargs()))

    @property
    def ablation_rows(self) -> list[AblationResult | tuple[date, str]]:
        def build():
            variants = ((True, False) if self.config.ablate_both_variants
                        else (self.config.drop_isolated,))
            work = [(d, g, drop) for d, g in self.daily for drop in variants]
            # materialize shared stages before fanning out to workers
            stances = self.stances
            annotations = self.annotations
            influencers = self.influencer_ranking.selected
            pi_kwargs = self._pi_kwargs()

            def one(item):
                d, g, drop = item
                try:
                    return ablation(g, stances, annotations, influencers,
                                    drop_isolated=drop, result_date=d,
                                    **pi_kwargs)
                except Exception as exc:
                    log.warning("ablation gap on %s: %s", d, exc)
                    return (d, str(exc))

            return _pmap(one, work, self.config.workers)
        return self._get("ablate", build)

    @property
    def sweep(self) -> ThresholdSweepResult:
        return self._get("sweep", lambda: threshold_sweep(
            self.full_graph, self.follows, self.annotations,
            thresholds=self.config.sweep_thresholds,
            influencer_set=self.influencer_ranking.selected,
            drop_isolated=self.config.drop_isolated,
            **self._pi_kwargs()))

    @property
    def communities(self):
        def build():
            g = self.full_graph
            if g.n == 0:
                return None
            partition = louvain(g)
            decompose_communities(partition, self.stances,
                                  top_n=len(partition.per_community))
            return partition
        return self._get("communities", build)

    @property
    def stats(self) -> list[DailyStats]:
        return self._get("stats", lambda: compute_stats(
            self.filtered[0], per_day=True, top_k=self.config.top_k,
            stopwords=self.stopword_set,
            offset_minutes=self.rule_set.date_offset_minutes))

    @property
    def shares(self) -> StanceShares:
        return self._get("shares",
                         lambda: stance_shares(self.filtered[0], self.stances))

    # -- emitters ----------------------------------------------------------

    def _open(self, name: str):
        self.config.out_dir.mkdir(parents=True, exist_ok=True)
        return (self.config.out_dir / name).open("w", encoding="utf-8",
                                                 newline="")

    def write_filtered(self) -> Path:
        kept, report = self.filtered
        with self._open("filtered.jsonl") as fh:
            for t in kept:
                fh.write(json.dumps(tweet_to_obj(t), ensure_ascii=False,
                                    sort_keys=True) + "\n")
        with self._open("filter_report.json") as fh:
            payload = report.to_dict()
            payload["malformed_lines"] = len(self.load_errors)
            json.dump(payload, fh, indent=2, sort_keys=True,
                      ensure_ascii=False)
            fh.write("\n")
        return self.config.out_dir / "filtered.jsonl"

    def write_stats(self) -> Path:
        with self._open("stats_daily.csv") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["date", "n_posts", "n_original", "n_retweet",
                        "n_quote", "n_reply", "n_users", "n_hashtags",
                        "n_urls"])
            for row in self.stats:
                w.writerow([row.date.isoformat(), row.n_posts,
                            row.n_by_kind["original"],
                            row.n_by_kind["retweet"],
                            row.n_by_kind["quote"], row.n_by_kind["reply"],
                            row.n_users, row.n_hashtags, row.n_urls])
        return self.config.out_dir / "stats_daily.csv"

    def write_stance(self) -> Path:
        path = self.config.out_dir / "stance.csv"
        self.config.out_dir.mkdir(parents=True, exist_ok=True)
        write_stance_csv(self.stances, path)
        return path

    def write_pi_series(self) -> Path:
        with self._open("pi_series.csv") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["date", "n", "m", "pi", "method", "iterations",
                        "residual"])
            for d, result in self.series:
                if result is None:
                    w.writerow([d.isoformat(), "", "", "", "gap", "", ""])
                else:
                    w.writerow([d.isoformat(), result.n, result.m,
                                _fmt(result.pi), result.solver.method.value,
                                result.solver.iterations,
                                format(result.solver.residual, ".3e")])
        return self.config.out_dir / "pi_series.csv"

    def write_influencers(self) -> Path:
        ranking = self.influencer_ranking
        with self._open("influencers.csv") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["rank", "user_id", "marginal_score"])
            for rank, (uid, score) in enumerate(
                    zip(ranking.selected, ranking.shield_scores), start=1):
                w.writerow([rank, uid, _fmt(score)])
        return self.config.out_dir / "influencers.csv"

    def write_ablation(self) -> Path:
        with self._open("ablation.csv") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["date", "drop_isolated", "pi_full",
                        "pi_without_political", "pi_without_media",
                        "pi_without_influencers"])
            for row in self.ablation_rows:
                if isinstance(row, tuple):
                    w.writerow([row[0].isoformat(), "", "", "", "", ""])
                else:
                    w.writerow([
                        row.date.isoformat(),
                        str(row.drop_isolated).lower(), _fmt(row.pi_full),
                        _fmt(row.pi_without["Political"]),
                        _fmt(row.pi_without["MediaJournalist"]),
                        _fmt(row.pi_without["Influencers"]),
                    ])
        return self.config.out_dir / "ablation.csv"

    def write_sweep(self) -> Path:
        with self._open("sweep.csv") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["threshold", "pi_full", "pi_without_political",
                        "pi_without_media", "pi_without_influencers",
                        "n_left_users", "n_right_users"])
            entries = self.sweep.entries if self.full_graph.n else []
            for entry in entries:
                w.writerow([
                    format(entry.threshold, "g"), _fmt(entry.pi_full),
                    _fmt(entry.pi_without["Political"]),
                    _fmt(entry.pi_without["MediaJournalist"]),
                    _fmt(entry.pi_without["Influencers"]),
                    entry.n_left_users, entry.n_right_users,
                ])
        return self.config.out_dir / "sweep.csv"

    def write_communities(self) -> Path:
        with self._open("communities.csv") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["community_id", "size", "n_left", "n_right",
                        "n_center", "n_neutral", "lean"])
            partition = self.communities
            if partition is not None:
                ranked = sorted(partition.per_community,
                                key=lambda p: (-p.size, p.community_id))
                for p in ranked:
                    w.writerow([p.community_id, p.size, p.n_left, p.n_right,
                                p.n_center, p.n_neutral, _fmt(p.lean)])
        return self.config.out_dir / "communities.csv"

    def graphml_name(self) -> str:
        lo, hi = self.rule_set.study_window
        return f"graph_{lo.strftime('%Y%m%d')}-{hi.strftime('%Y%m%d')}.graphml"

    def write_graphml(self) -> Path:
        self.config.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.config.out_dir / self.graphml_name()
        export_graph(self.full_graph, path, stances=self.stances,
                     annotations=self.annotations)
        return path

    def write_summary(self) -> Path:
        from .report import render_summary
        html = render_summary(self)
        with self._open("summary.html") as fh:
            fh.write(html)
        return self.config.out_dir / "summary.html"

    def write_manifest(self, outputs: Sequence[str]) -> Path:
        inputs = {}
        for label, p in (("tweets", self.config.tweets),
                         ("annotations", self.config.annotations),
                         ("follows", self.config.follows),
                         ("rules", self.config.rules),
                         ("stopwords", self.config.stopwords)):
            if p is not None:
                inputs[label] = {"path": str(p), "sha256": _sha256(Path(p))}
        manifest = {
            "version": __version__,
            "kernel_backend": _kernels.backend(),
            "config": self.config.echo(),
            "inputs": inputs,
            "outputs": sorted(outputs),
        }
        with self._open("run_manifest.json") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True,
                      ensure_ascii=False)
            fh.write("\n")
        return self.config.out_dir / "run_manifest.json"


def run_all(config: RunConfig) -> dict[str, Path]:
    """Execute every stage and write the full report bundle.

    Returns a name -> path map of everything written.  Deterministic for
    fixed inputs; an empty corpus still produces the whole bundle (headers
    only) plus a warning.
    """
    runner = Runner(config)
    if runner.filtered[1].kept == 0:
        log.warning("filter kept no tweets; emitting an empty bundle")
    writers = [
        ("stats_daily.csv", runner.write_stats),
        ("stance.csv", runner.write_stance),
        ("pi_series.csv", runner.write_pi_series),
        ("influencers.csv", runner.write_influencers),
        ("ablation.csv", runner.write_ablation),
        ("sweep.csv", runner.write_sweep),
        ("communities.csv", runner.write_communities),
        (runner.graphml_name(), runner.write_graphml),
        ("summary.html", runner.write_summary),
    ]
    bundle: dict[str, Path] = {}
    for name, writer in writers:
        try:
            bundle[name] = writer()
        except StageError:
            raise
        except Exception as exc:
            raise StageError(name.rsplit(".", 1)[0], exc) from exc
    bundle["run_manifest.json"] = runner.write_manifest(list(bundle))
    return bundle
