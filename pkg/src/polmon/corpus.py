"""Tweet corpus loading, validation, rule filtering and companion datasets.

File formats (all consumed here, all documented in the README):

  - tweet archive: one JSON object per line with fields tweet_id, author_id,
    timestamp (ISO-8601 UTC), text, lang, kind, hashtags, urls, media,
    referenced_user_ids, referenced_tweet_id, like_count, retweet_count,
    reply_count.  For retweets/quotes/replies the primary referenced author
    (the retweeted/quoted/replied-to user) comes first in
    referenced_user_ids; mentions follow.
  - annotations: CSV with header ``user_id,category,side``
  - follow lists: CSV with header ``follower_id,followed_political_id``
  - rule set: JSON with keys rules[].term, rules[].mode, rules[].active_from,
    rules[].active_until, language_whitelist, study_window and an optional
    date_offset_minutes for local-time day bucketing (default 0 = UTC).

A default rule set (the tracked keyword/hashtag list with its per-term
activation windows) ships as package data; ``default_rule_set()`` loads it.
"""

from __future__ import annotations

import csv
import json
import logging
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence

log = logging.getLogger(__name__)


class CorpusFormatError(ValueError):
    """A corpus/companion file violates its documented format."""


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


class Kind(Enum):
    ORIGINAL = "original"
    RETWEET = "retweet"
    QUOTE = "quote"
    REPLY = "reply"


class MediaKind(Enum):
    IMAGE = "image"
    VIDEO = "video"


class MatchMode(Enum):
    HASHTAG_EXACT = "hashtag"
    KEYWORD_SUBSTRING = "keyword"


class Category(Enum):
    INDIVIDUAL = "Individual"
    MEDIA_JOURNALIST = "MediaJournalist"
    POLITICAL = "Political"
    ORGANIZATION = "Organization"
    BOT = "Bot"


class Side(Enum):
    LEFT = "Left"
    RIGHT = "Right"
    CENTER = "Center"


@dataclass
class MediaItem:
    kind: MediaKind
    url: str


@dataclass
class TweetRecord:
    tweet_id: str
    author_id: str
    timestamp: datetime  # tz-aware UTC
    text: str
    lang: str
    kind: Kind
    hashtags: list[str] = field(default_factory=list)
    urls: list[str] = field(default_factory=list)
    media: list[MediaItem] = field(default_factory=list)
    referenced_user_ids: list[str] = field(default_factory=list)
    referenced_tweet_id: str | None = None
    like_count: int = 0
    retweet_count: int = 0
    reply_count: int = 0


@dataclass
class FilterRule:
    term: str
    mode: MatchMode
    active_from: date | None = None
    active_until: date | None = None

    def __post_init__(self):
        if self.mode is MatchMode.HASHTAG_EXACT:
            self.term = normalize_hashtag(self.term)
        if (self.active_from is not None and self.active_until is not None
                and self.active_from > self.active_until):
            raise CorpusFormatError(
                f"rule {self.term!r}: active_from after active_until")

    def window_contains(self, d: date) -> bool:
        if self.active_from is not None and d < self.active_from:
            return False
        if self.active_until is not None and d > self.active_until:
            return False
        return True


@dataclass
class RuleSet:
    rules: list[FilterRule]
    language_whitelist: set[str] = field(default_factory=lambda: {"el"})
    study_window: tuple[date, date] = (date(2022, 4, 1), date(2023, 1, 14))
    date_offset_minutes: int = 0  # shift applied before taking calendar dates

    def __post_init__(self):
        if not self.rules:
            raise CorpusFormatError("rule set needs at least one rule")
        lo, hi = self.study_window
        if lo > hi:
            raise CorpusFormatError("study_window is not well-ordered")

    def local_date(self, ts: datetime) -> date:
        return (ts + timedelta(minutes=self.date_offset_minutes)).date()


@dataclass
class AccountAnnotation:
    user_id: str
    category: Category
    side: Side | None = None

    def __post_init__(self):
        if self.category is Category.POLITICAL and self.side is None:
            raise CorpusFormatError(
                f"political account {self.user_id!r} needs a side")
        if self.category is not Category.POLITICAL and self.side is not None:
            raise CorpusFormatError(
                f"non-political account {self.user_id!r} must not carry a side")


@dataclass(frozen=True)
class FollowRecord:
    follower_id: str
    followed_political_id: str


# ---------------------------------------------------------------------------
# text normalization
# ---------------------------------------------------------------------------


def fold_text(s: str) -> str:
    """Casefold and strip accents for keyword matching.

    Greek tonos/diaeresis are removed via NFD + combining-mark strip; the
    final sigma folds to sigma through casefold.  NFC-recomposed so equal
    strings compare equal byte-wise.
    """
    decomposed = unicodedata.normalize("NFD", s)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return unicodedata.normalize("NFC", stripped).casefold()


def normalize_hashtag(tag: str) -> str:
    """Lowercased NFC hashtag without the leading '#' (accents preserved)."""
    return unicodedata.normalize("NFC", tag.lstrip("#").lower())


# ---------------------------------------------------------------------------
# tweet archive loading
# ---------------------------------------------------------------------------

_REQUIRED_FIELDS = (
    "tweet_id", "author_id", "timestamp", "text", "lang", "kind",
)


def _parse_timestamp(raw: str) -> datetime:
    ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def parse_tweet(obj: dict) -> TweetRecord:
    """Build a validated TweetRecord from one decoded archive object.

    Raises CorpusFormatError on any violated invariant (missing field,
    bad enum value, negative count, non-original post without a referenced
    user).
    """
    for name in _REQUIRED_FIELDS:
        if name not in obj or obj[name] is None:
            raise CorpusFormatError(f"missing field {name!r}")
    try:
        kind = Kind(str(obj["kind"]).lower())
    except ValueError:
        raise CorpusFormatError(f"unknown kind {obj['kind']!r}") from None
    try:
        ts = _parse_timestamp(str(obj["timestamp"]))
    except ValueError:
        raise CorpusFormatError(
            f"unparseable timestamp {obj['timestamp']!r}") from None

    refs = [str(u) for u in obj.get("referenced_user_ids") or []]
    if kind is not Kind.ORIGINAL and not refs:
        raise CorpusFormatError(
            f"{kind.value} tweet must reference at least one user")

    counts = {}
    for name in ("like_count", "retweet_count", "reply_count"):
        value = int(obj.get(name) or 0)
        if value < 0:
            raise CorpusFormatError(f"{name} is negative")
        counts[name] = value

    media = []
    for item in obj.get("media") or []:
        try:
            media.append(MediaItem(kind=MediaKind(str(item["kind"]).lower()),
                                   url=str(item["url"])))
        except (KeyError, ValueError, TypeError):
            raise CorpusFormatError(f"bad media item {item!r}") from None

    ref_tweet = obj.get("referenced_tweet_id")
    return TweetRecord(
        tweet_id=str(obj["tweet_id"]),
        author_id=str(obj["author_id"]),
        timestamp=ts,
        text=str(obj["text"]),
        lang=str(obj["lang"]),
        kind=kind,
        hashtags=[normalize_hashtag(str(h)) for h in obj.get("hashtags") or []],
        urls=[str(u) for u in obj.get("urls") or []],
        media=media,
        referenced_user_ids=refs,
        referenced_tweet_id=None if ref_tweet is None else str(ref_tweet),
        **counts,
    )


def tweet_to_obj(t: TweetRecord) -> dict:
    """Inverse of parse_tweet, for writing archives back out."""
    return {
        "tweet_id": t.tweet_id,
        "author_id": t.author_id,
        "timestamp": t.timestamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
        "text": t.text,
        "lang": t.lang,
        "kind": t.kind.value,
        "hashtags": list(t.hashtags),
        "urls": list(t.urls),
        "media": [{"kind": m.kind.value, "url": m.url} for m in t.media],
        "referenced_user_ids": list(t.referenced_user_ids),
        "referenced_tweet_id": t.referenced_tweet_id,
        "like_count": t.like_count,
        "retweet_count": t.retweet_count,
        "reply_count": t.reply_count,
    }


def load_tweets(path: str | Path, schema_strict: bool = False,
                error_log: list | None = None) -> Iterator[TweetRecord]:
    """Stream validated TweetRecords from a line-delimited JSON archive.

    Malformed lines are skipped with a warning (collected into error_log as
    ``(line_number, message)`` when a list is passed); with schema_strict
    they raise instead.  An unreadable file always raises.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise CorpusFormatError("line is not an object")
                yield parse_tweet(obj)
            except (json.JSONDecodeError, CorpusFormatError) as exc:
                if schema_strict:
                    raise CorpusFormatError(
                        f"{path}:{lineno}: {exc}") from exc
                if error_log is not None:
                    error_log.append((lineno, str(exc)))
                log.warning("%s:%d: skipping malformed line (%s)",
                            path, lineno, exc)


# ---------------------------------------------------------------------------
# rule matching and corpus filtering
# ---------------------------------------------------------------------------


def rule_matches(rule: FilterRule, t: TweetRecord, tweet_date: date) -> bool:
    if not rule.window_contains(tweet_date):
        return False
    if rule.mode is MatchMode.HASHTAG_EXACT:
        return rule.term in t.hashtags
    return fold_text(rule.term) in fold_text(t.text)


def matches(rule_set: RuleSet, t: TweetRecord) -> bool:
    """True iff the tweet passes language, study window and at least one rule.

    Pure predicate; date windows are inclusive on both bounds.
    """
    if t.lang not in rule_set.language_whitelist:
        return False
    d = rule_set.local_date(t.timestamp)
    lo, hi = rule_set.study_window
    if d < lo or d > hi:
        return False
    return any(rule_matches(rule, t, d) for rule in rule_set.rules)


@dataclass
class FilterReport:
    """Counters from one filter pass; merge() makes it a commutative monoid."""

    total: int = 0
    kept: int = 0
    dropped_lang: int = 0
    dropped_window: int = 0
    dropped_no_rule: int = 0
    rule_hits: Counter = field(default_factory=Counter)

    @property
    def dropped(self) -> int:
        return self.dropped_lang + self.dropped_window + self.dropped_no_rule

    def merge(self, other: "FilterReport") -> "FilterReport":
        merged = FilterReport(
            total=self.total + other.total,
            kept=self.kept + other.kept,
            dropped_lang=self.dropped_lang + other.dropped_lang,
            dropped_window=self.dropped_window + other.dropped_window,
            dropped_no_rule=self.dropped_no_rule + other.dropped_no_rule,
        )
        merged.rule_hits = self.rule_hits + other.rule_hits
        return merged

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "kept": self.kept,
            "dropped": self.dropped,
            "dropped_lang": self.dropped_lang,
            "dropped_window": self.dropped_window,
            "dropped_no_rule": self.dropped_no_rule,
            "rule_hits": dict(sorted(self.rule_hits.items())),
        }


def filter_corpus(rule_set: RuleSet,
                  tweets: Iterable[TweetRecord]) -> tuple[list[TweetRecord], FilterReport]:
    """Order-preserving filter by ``matches`` with per-rule hit accounting."""
    kept: list[TweetRecord] = []
    report = FilterReport()
    for t in tweets:
        report.total += 1
        if t.lang not in rule_set.language_whitelist:
            report.dropped_lang += 1
            continue
        d = rule_set.local_date(t.timestamp)
        lo, hi = rule_set.study_window
        if d < lo or d > hi:
            report.dropped_window += 1
            continue
        hit = False
        for rule in rule_set.rules:
            if rule_matches(rule, t, d):
                report.rule_hits[f"{rule.mode.value}:{rule.term}"] += 1
                hit = True
        if hit:
            report.kept += 1
            kept.append(t)
        else:
            report.dropped_no_rule += 1
    return kept, report


# ---------------------------------------------------------------------------
# prevalent users
# ---------------------------------------------------------------------------


def _top_ids(counts: Counter, k: int) -> list[str]:
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [uid for uid, _ in ranked[:k]]


def prevalent_users(tweets: Sequence[TweetRecord],
                    influencer_ranking: Sequence[str] = (),
                    top_k: int = 500) -> set[str]:
    """Union of the top_k users per activity category.

    Categories: original tweets posted, replies posted, quotes posted,
    times quoted by others (first referenced id of each quote, self-quotes
    excluded), and the supplied influencer ranking.  Ties inside a category
    break by ascending user_id.
    """
    if top_k <= 0:
        raise ValueError("top_k must be positive")
    posted = Counter()
    replied = Counter()
    quoted_posts = Counter()
    quoted_by_others = Counter()
    for t in tweets:
        if t.kind is Kind.ORIGINAL:
            posted[t.author_id] += 1
        elif t.kind is Kind.REPLY:
            replied[t.author_id] += 1
        elif t.kind is Kind.QUOTE:
            quoted_posts[t.author_id] += 1
            if t.referenced_user_ids:
                target = t.referenced_user_ids[0]
                if target != t.author_id:
                    quoted_by_others[target] += 1
    selected: set[str] = set()
    for counts in (posted, replied, quoted_posts, quoted_by_others):
        selected.update(_top_ids(counts, top_k))
    selected.update(influencer_ranking[:top_k])
    return selected


# ---------------------------------------------------------------------------
# companion datasets
# ---------------------------------------------------------------------------

_CATEGORY_ALIASES = {
    "individual": Category.INDIVIDUAL,
    "mediajournalist": Category.MEDIA_JOURNALIST,
    "media/journalist": Category.MEDIA_JOURNALIST,
    "media": Category.MEDIA_JOURNALIST,
    "political": Category.POLITICAL,
    "organization": Category.ORGANIZATION,
    "bot": Category.BOT,
}


def load_annotations(path: str | Path,
                     delimiter: str = ",") -> dict[str, AccountAnnotation]:
    """Read the account annotation CSV into a user_id-keyed dict."""
    annotations: dict[str, AccountAnnotation] = {}
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        if reader.fieldnames is None or "user_id" not in reader.fieldnames:
            raise CorpusFormatError(f"{path}: missing user_id header")
        for row in reader:
            uid = (row.get("user_id") or "").strip()
            if not uid:
                raise CorpusFormatError(f"{path}: empty user_id")
            if uid in annotations:
                raise CorpusFormatError(f"{path}: duplicate annotation for {uid}")
            raw_cat = (row.get("category") or "").strip()
            category = _CATEGORY_ALIASES.get(raw_cat.lower())
            if category is None:
                raise CorpusFormatError(f"{path}: unknown category {raw_cat!r}")
            raw_side = (row.get("side") or "").strip()
            side = Side(raw_side.capitalize()) if raw_side else None
            annotations[uid] = AccountAnnotation(uid, category, side)
    return annotations


def load_follows(path: str | Path,
                 annotations: dict[str, AccountAnnotation] | None = None,
                 delimiter: str = ",") -> list[FollowRecord]:
    """Read follow records; duplicates collapse with a warning.

    When annotations are given, every followed id must be annotated
    Political (raises CorpusFormatError naming the id otherwise).
    """
    path = Path(path)
    seen: set[tuple[str, str]] = set()
    records: list[FollowRecord] = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        if (reader.fieldnames is None
                or "follower_id" not in reader.fieldnames
                or "followed_political_id" not in reader.fieldnames):
            raise CorpusFormatError(f"{path}: bad follow-list header")
        for row in reader:
            pair = ((row.get("follower_id") or "").strip(),
                    (row.get("followed_political_id") or "").strip())
            if not pair[0] or not pair[1]:
                raise CorpusFormatError(f"{path}: incomplete follow row {row}")
            if pair in seen:
                log.warning("%s: duplicate follow pair %s", path, pair)
                continue
            seen.add(pair)
            if annotations is not None:
                ann = annotations.get(pair[1])
                if ann is None or ann.category is not Category.POLITICAL:
                    raise CorpusFormatError(
                        f"{path}: followed id {pair[1]!r} is not an annotated "
                        "political account")
            records.append(FollowRecord(*pair))
    return records


# ---------------------------------------------------------------------------
# rule set (de)serialization
# ---------------------------------------------------------------------------


def _parse_date(raw) -> date | None:
    if raw is None or raw == "":
        return None
    return date.fromisoformat(str(raw))


def rule_set_from_dict(obj: dict) -> RuleSet:
    rules = []
    for entry in obj.get("rules", []):
        try:
            mode = MatchMode(str(entry["mode"]).lower())
        except (KeyError, ValueError):
            raise CorpusFormatError(f"bad rule entry {entry!r}") from None
        rules.append(FilterRule(
            term=str(entry["term"]),
            mode=mode,
            active_from=_parse_date(entry.get("active_from")),
            active_until=_parse_date(entry.get("active_until")),
        ))
    window = obj.get("study_window")
    if not window or len(window) != 2:
        raise CorpusFormatError("rule set needs a two-element study_window")
    return RuleSet(
        rules=rules,
        language_whitelist=set(obj.get("language_whitelist") or ["el"]),
        study_window=(_parse_date(window[0]), _parse_date(window[1])),
        date_offset_minutes=int(obj.get("date_offset_minutes") or 0),
    )


def load_rule_set(path: str | Path) -> RuleSet:
    with Path(path).open("r", encoding="utf-8") as fh:
        return rule_set_from_dict(json.load(fh))


def default_rule_set() -> RuleSet:
    """The shipped tracked-term configuration."""
    text = resources.files("polmon").joinpath("data/default_rules.json") \
        .read_text(encoding="utf-8")
    return rule_set_from_dict(json.loads(text))
