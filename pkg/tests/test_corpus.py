import json
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polmon.corpus import (AccountAnnotation, Category, CorpusFormatError,
                           FilterRule, FollowRecord, Kind, MatchMode, RuleSet,
                           Side, default_rule_set, filter_corpus, fold_text,
                           load_annotations, load_follows, load_tweets,
                           matches, normalize_hashtag, prevalent_users,
                           rule_set_from_dict, tweet_to_obj, parse_tweet)

from conftest import tweet


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

GOOD_LINE = json.dumps({
    "tweet_id": "t1", "author_id": "a", "timestamp": "2022-08-05T10:00:00Z",
    "text": "υποκλοπές", "lang": "el", "kind": "original", "hashtags": [],
    "urls": [], "media": [], "referenced_user_ids": [],
    "referenced_tweet_id": None, "like_count": 0, "retweet_count": 0,
    "reply_count": 0}, ensure_ascii=False)


def _write(tmp_path, lines):
    path = tmp_path / "tweets.jsonl"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_load_well_formed_file(tmp_path):
    path = _write(tmp_path, [GOOD_LINE] * 3)
    errors = []
    records = list(load_tweets(path, error_log=errors))
    assert len(records) == 3
    assert errors == []


def test_load_skips_malformed_line(tmp_path):
    path = _write(tmp_path, [GOOD_LINE, "{not json", GOOD_LINE])
    errors = []
    records = list(load_tweets(path, error_log=errors))
    assert len(records) == 2
    assert len(errors) == 1
    assert errors[0][0] == 2


def test_load_empty_file(tmp_path):
    path = _write(tmp_path, [""])
    assert list(load_tweets(path)) == []


def test_load_strict_raises(tmp_path):
    path = _write(tmp_path, [GOOD_LINE, "{not json"])
    with pytest.raises(CorpusFormatError, match="tweets.jsonl:2"):
        list(load_tweets(path, schema_strict=True))


def test_load_missing_file_raises(tmp_path):
    with pytest.raises(OSError):
        list(load_tweets(tmp_path / "nope.jsonl"))


def test_retweet_without_reference_is_malformed():
    obj = json.loads(GOOD_LINE)
    obj["kind"] = "retweet"
    with pytest.raises(CorpusFormatError, match="reference"):
        parse_tweet(obj)


def test_negative_count_is_malformed():
    obj = json.loads(GOOD_LINE)
    obj["like_count"] = -1
    with pytest.raises(CorpusFormatError, match="negative"):
        parse_tweet(obj)


def test_hashtags_normalized_on_load():
    obj = json.loads(GOOD_LINE)
    obj["hashtags"] = ["#ΥΠΟΚΛΟΠΕΣ", "Predator"]
    record = parse_tweet(obj)
    # lower() keeps the context-sensitive final sigma, matching how the
    # tracked hashtags are written
    assert record.hashtags == ["υποκλοπες", "predator"]


def test_tweet_round_trip():
    obj = json.loads(GOOD_LINE)
    obj["kind"] = "quote"
    obj["referenced_user_ids"] = ["b"]
    obj["media"] = [{"kind": "video", "url": "https://v"}]
    record = parse_tweet(obj)
    assert parse_tweet(tweet_to_obj(record)) == record


# ---------------------------------------------------------------------------
# folding
# ---------------------------------------------------------------------------


def test_fold_text_strips_accents_and_case():
    assert fold_text("ΥΠΟΚΛΟΠΈΣ") == fold_text("υποκλοπες")
    assert fold_text("υποκλοπές") == "υποκλοπεσ"


def test_normalize_hashtag_keeps_accents():
    assert normalize_hashtag("#Υποκλοπές") == "υποκλοπές"
    assert normalize_hashtag("υποκλοπες") != normalize_hashtag("υποκλοπές")


# ---------------------------------------------------------------------------
# matching: the four golden cases from the shipped default config
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def rules() -> RuleSet:
    return default_rule_set()


def test_matches_wiretap_hashtag(rules):
    t = tweet(text="σκέψεις #υποκλοπες", hashtags=["υποκλοπες"],
              ts="2022-08-05T09:00:00Z")
    assert matches(rules, t)


def test_matches_person_rule_not_yet_active(rules):
    t = tweet(text="για τον Ανδρουλάκη", hashtags=["ανδρουλακης"],
              ts="2022-07-01T09:00:00Z")
    assert not matches(rules, t)


def test_matches_person_rule_expired(rules):
    t = tweet(text="#κουκακη", hashtags=["κουκακη"],
              ts="2022-12-01T09:00:00Z")
    assert not matches(rules, t)


def test_matches_rejects_non_greek(rules):
    t = tweet(text="the predator story", lang="en",
              ts="2022-08-05T09:00:00Z")
    assert not matches(rules, t)


def test_matches_window_bounds_inclusive():
    rule = FilterRule("πεδιο", MatchMode.KEYWORD_SUBSTRING,
                      active_from=date(2022, 7, 20),
                      active_until=date(2022, 11, 28))
    rs = RuleSet(rules=[rule])
    on_from = tweet(text="πεδιο", ts="2022-07-20T00:00:00Z")
    on_until = tweet(text="πεδιο", ts="2022-11-28T23:59:59Z")
    before = tweet(text="πεδιο", ts="2022-07-19T23:59:59Z")
    after = tweet(text="πεδιο", ts="2022-11-29T00:00:00Z")
    assert matches(rs, on_from)
    assert matches(rs, on_until)
    assert not matches(rs, before)
    assert not matches(rs, after)


def test_matches_study_window(rules):
    t = tweet(text="υποκλοπές", ts="2023-02-01T09:00:00Z")
    assert not matches(rules, t)


def test_matches_keyword_accent_folded(rules):
    t = tweet(text="ΟΙ ΥΠΟΚΛΟΠΕΣ ΣΥΝΕΧΙΖΟΝΤΑΙ", ts="2022-08-05T09:00:00Z")
    assert matches(rules, t)


def test_matches_hashtag_is_exact_not_folded(rules):
    # the unaccented and accented hashtags are separate rules; a made-up
    # accented variant of a keyword-only term must not match via hashtags
    rs = RuleSet(rules=[FilterRule("pega", MatchMode.HASHTAG_EXACT)])
    assert matches(rs, tweet(text="x", hashtags=["pega"],
                             ts="2022-08-05T09:00:00Z"))
    assert not matches(rs, tweet(text="x", hashtags=["pegasus"],
                                 ts="2022-08-05T09:00:00Z"))


def test_date_offset_shifts_bucketing():
    rule = FilterRule("οροι", MatchMode.KEYWORD_SUBSTRING,
                      active_until=date(2022, 11, 28))
    rs = RuleSet(rules=[rule], date_offset_minutes=180)  # Athens summer time
    late_utc = tweet(text="οροι", ts="2022-11-28T22:30:00Z")
    assert not matches(rs, late_utc)  # 2022-11-29 01:30 local
    rs_utc = RuleSet(rules=[rule])
    assert matches(rs_utc, late_utc)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_matches_is_pure(seed):
    rules = default_rule_set()
    t = tweet(text="υποκλοπές", ts="2022-08-05T09:00:00Z")
    assert matches(rules, t) == matches(rules, t)


# ---------------------------------------------------------------------------
# filter_corpus
# ---------------------------------------------------------------------------


def test_filter_empty_corpus(rules):
    kept, report = filter_corpus(rules, [])
    assert kept == []
    assert report.total == 0
    assert report.kept == 0


def test_filter_all_match(rules):
    tweets = [tweet(f"t{i}", text="υποκλοπές", ts="2022-08-05T09:00:00Z")
              for i in range(4)]
    kept, report = filter_corpus(rules, tweets)
    assert kept == tweets
    assert report.kept == report.total == 4


def test_filter_mixed_matches_recheck(rules):
    tweets = [
        tweet("t1", text="υποκλοπές", ts="2022-08-05T09:00:00Z"),
        tweet("t2", text="άσχετο", ts="2022-08-05T09:00:00Z"),
        tweet("t3", text="predator news", lang="en",
              ts="2022-08-05T09:00:00Z"),
        tweet("t4", text="ok", hashtags=["ypoklopes"],
              ts="2022-08-05T09:00:00Z"),
        tweet("t5", text="υποκλοπές", ts="2023-03-05T09:00:00Z"),
    ]
    kept, report = filter_corpus(rules, tweets)
    oracle = [t for t in tweets if matches(rules, t)]
    assert kept == oracle
    assert report.kept == len(oracle)
    assert report.kept + report.dropped == report.total == len(tweets)
    assert report.dropped_lang == 1
    assert report.dropped_window == 1


def test_filter_idempotent(rules):
    tweets = [
        tweet("t1", text="υποκλοπές", ts="2022-08-05T09:00:00Z"),
        tweet("t2", text="no", ts="2022-08-05T09:00:00Z"),
    ]
    kept, _ = filter_corpus(rules, tweets)
    again, report = filter_corpus(rules, kept)
    assert again == kept
    assert report.kept == report.total


def test_filter_report_merge_matches_single_pass(rules):
    tweets = [
        tweet("t1", text="υποκλοπές", ts="2022-08-05T09:00:00Z"),
        tweet("t2", text="predator", ts="2022-08-06T09:00:00Z"),
        tweet("t3", text="x", lang="en", ts="2022-08-06T09:00:00Z"),
        tweet("t4", text="y", ts="2022-08-06T09:00:00Z"),
    ]
    _, whole = filter_corpus(rules, tweets)
    _, first = filter_corpus(rules, tweets[:2])
    _, second = filter_corpus(rules, tweets[2:])
    assert first.merge(second).to_dict() == whole.to_dict()


# ---------------------------------------------------------------------------
# prevalent users
# ---------------------------------------------------------------------------


def test_prevalent_small_corpus_keeps_everyone():
    tweets = [tweet("t1", author="a"), tweet("t2", author="b"),
              tweet("t3", author="c", kind=Kind.REPLY, refs=["a"])]
    assert prevalent_users(tweets) == {"a", "b", "c"}


def test_prevalent_rejects_bad_k():
    with pytest.raises(ValueError):
        prevalent_users([], top_k=0)


def test_prevalent_union_matches_hand_count():
    tweets = [
        # originals: a x3, b x1
        tweet("t1", author="a"), tweet("t2", author="a"),
        tweet("t3", author="a"), tweet("t4", author="b"),
        # replies: c x2, d x1
        tweet("t5", author="c", kind=Kind.REPLY, refs=["a"]),
        tweet("t6", author="c", kind=Kind.REPLY, refs=["b"]),
        tweet("t7", author="d", kind=Kind.REPLY, refs=["a"]),
        # quotes: e x2 (quoting a), b x1 (quoting e)
        tweet("t8", author="e", kind=Kind.QUOTE, refs=["a"]),
        tweet("t9", author="e", kind=Kind.QUOTE, refs=["a"]),
        tweet("t10", author="b", kind=Kind.QUOTE, refs=["e"]),
    ]
    # k=1 per category: posted->a, replied->c, quotes->e (2>1, ties none),
    # quoted-by-others->a (2 vs e 1), influencers->given ranking head
    got = prevalent_users(tweets, influencer_ranking=["z", "y"], top_k=1)
    assert got == {"a", "c", "e", "z"}


def test_prevalent_tie_breaks_ascending_id():
    tweets = [tweet("t1", author="b"), tweet("t2", author="a")]
    got = prevalent_users(tweets, top_k=1)
    assert got == {"a"}


def test_prevalent_order_invariant():
    tweets = [
        tweet("t1", author="b"), tweet("t2", author="a"),
        tweet("t3", author="c", kind=Kind.QUOTE, refs=["b"]),
    ]
    assert prevalent_users(tweets, top_k=2) == \
        prevalent_users(list(reversed(tweets)), top_k=2)


def test_prevalent_self_quote_not_counted():
    tweets = [tweet("t1", author="a", kind=Kind.QUOTE, refs=["a", "b"])]
    got = prevalent_users(tweets, top_k=1)
    assert "a" in got  # via quotes-posted, not via quoted-by-others
    assert "b" not in got


# ---------------------------------------------------------------------------
# companion datasets
# ---------------------------------------------------------------------------


def test_load_annotations(tmp_path):
    path = tmp_path / "ann.csv"
    path.write_text("user_id,category,side\n"
                    "p1,Political,Left\n"
                    "m1,MediaJournalist,\n"
                    "u1,Individual,\n", encoding="utf-8")
    annotations = load_annotations(path)
    assert annotations["p1"].side is Side.LEFT
    assert annotations["m1"].category is Category.MEDIA_JOURNALIST
    assert annotations["u1"].side is None


def test_load_annotations_duplicate(tmp_path):
    path = tmp_path / "ann.csv"
    path.write_text("user_id,category,side\nu1,Individual,\nu1,Bot,\n",
                    encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="duplicate"):
        load_annotations(path)


def test_annotation_side_rules():
    with pytest.raises(CorpusFormatError):
        AccountAnnotation("x", Category.POLITICAL, None)
    with pytest.raises(CorpusFormatError):
        AccountAnnotation("x", Category.BOT, Side.LEFT)


def test_load_follows_validates_targets(tmp_path):
    ann_path = tmp_path / "ann.csv"
    ann_path.write_text("user_id,category,side\np1,Political,Left\n",
                        encoding="utf-8")
    annotations = load_annotations(ann_path)
    path = tmp_path / "follows.csv"
    path.write_text("follower_id,followed_political_id\nu1,p1\nu1,p1\n",
                    encoding="utf-8")
    records = load_follows(path, annotations)
    assert records == [FollowRecord("u1", "p1")]  # duplicate collapsed

    path.write_text("follower_id,followed_political_id\nu1,ghost\n",
                    encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="ghost"):
        load_follows(path, annotations)


# ---------------------------------------------------------------------------
# rule set config
# ---------------------------------------------------------------------------


def test_default_rule_set_contents():
    rs = default_rule_set()
    assert rs.language_whitelist == {"el"}
    assert rs.study_window == (date(2022, 4, 1), date(2023, 1, 14))
    assert len(rs.rules) == 17
    person_terms = {r.term for r in rs.rules if r.active_until is not None}
    assert person_terms == {"δημητριαδης", "κοντολεων", "κουκακη",
                            "ανδρουλακης"}
    androulakis = [r for r in rs.rules if r.term == "ανδρουλακης"][0]
    assert androulakis.active_from == date(2022, 7, 20)


def test_rule_set_from_dict_round_trip():
    rs = rule_set_from_dict({
        "rules": [{"term": "#Foo", "mode": "hashtag",
                   "active_from": "2022-05-01"}],
        "language_whitelist": ["el", "en"],
        "study_window": ["2022-04-01", "2022-12-31"],
        "date_offset_minutes": 120,
    })
    assert rs.rules[0].term == "foo"  # '#' stripped, lowercased
    assert rs.rules[0].active_from == date(2022, 5, 1)
    assert rs.date_offset_minutes == 120


def test_rule_set_rejects_bad_window():
    with pytest.raises(CorpusFormatError):
        RuleSet(rules=[FilterRule("x", MatchMode.KEYWORD_SUBSTRING)],
                study_window=(date(2023, 1, 1), date(2022, 1, 1)))


def test_rule_rejects_inverted_window():
    with pytest.raises(CorpusFormatError):
        FilterRule("x", MatchMode.KEYWORD_SUBSTRING,
                   active_from=date(2022, 6, 1), active_until=date(2022, 5, 1))


def test_empty_rule_set_rejected():
    with pytest.raises(CorpusFormatError):
        RuleSet(rules=[])
