#!/usr/bin/env python3
"""Regenerate the bundled synthetic fixture under tests/data/.

Two political camps, bridged by media accounts, spread over four days in
August 2022; everything derives from a fixed seed so the fixture (and any
report bundle built from it) is reproducible.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "data"

LEFT_POL = ["pol_left_a", "pol_left_b", "pol_left_c"]
RIGHT_POL = ["pol_right_a", "pol_right_b", "pol_right_c"]
CENTER_POL = ["pol_center_a"]
MEDIA = ["media_one", "media_two"]
ORG = ["org_one"]
BOT = ["bot_one"]

N_LEFT_USERS = 14
N_RIGHT_USERS = 12
N_NEUTRAL_USERS = 4

HASHTAG_POOL = ["υποκλοπες", "predatorgate", "ypoklopes", "spyware"]
TEXTS = [
    "Νέες αποκαλύψεις για τις υποκλοπές σήμερα",
    "Το predator στο επίκεντρο της συζήτησης",
    "Συζήτηση στη Βουλή για τις παρακολουθήσεις #υποκλοπες",
    "Η κυβέρνηση απαντά για το σκάνδαλο των υποκλοπών",
    "Ποιος παρακολουθούσε ποιον; #predatorgate",
]
DAYS = ["2022-08-04", "2022-08-05", "2022-08-06", "2022-08-07"]


def main() -> None:
    rng = random.Random(20220805)
    OUT.mkdir(parents=True, exist_ok=True)

    left_users = [f"user_l{i:02d}" for i in range(N_LEFT_USERS)]
    right_users = [f"user_r{i:02d}" for i in range(N_RIGHT_USERS)]
    neutral_users = [f"user_n{i:02d}" for i in range(N_NEUTRAL_USERS)]

    # annotations ----------------------------------------------------------
    rows = ["user_id,category,side"]
    for uid in LEFT_POL:
        rows.append(f"{uid},Political,Left")
    for uid in RIGHT_POL:
        rows.append(f"{uid},Political,Right")
    for uid in CENTER_POL:
        rows.append(f"{uid},Political,Center")
    for uid in MEDIA:
        rows.append(f"{uid},MediaJournalist,")
    for uid in ORG:
        rows.append(f"{uid},Organization,")
    for uid in BOT:
        rows.append(f"{uid},Bot,")
    for uid in left_users + right_users + neutral_users:
        rows.append(f"{uid},Individual,")
    (OUT / "fixture_annotations.csv").write_text("\n".join(rows) + "\n",
                                                 encoding="utf-8")

    # follows --------------------------------------------------------------
    rows = ["follower_id,followed_political_id"]
    for uid in left_users:
        for target in rng.sample(LEFT_POL, k=rng.randint(2, 3)):
            rows.append(f"{uid},{target}")
        if rng.random() < 0.4:
            rows.append(f"{uid},{rng.choice(RIGHT_POL)}")
    for uid in right_users:
        for target in rng.sample(RIGHT_POL, k=rng.randint(2, 3)):
            rows.append(f"{uid},{target}")
        if rng.random() < 0.4:
            rows.append(f"{uid},{rng.choice(LEFT_POL)}")
        if rng.random() < 0.3:
            rows.append(f"{uid},{CENTER_POL[0]}")
    for uid in MEDIA:
        rows.append(f"{uid},{LEFT_POL[0]}")
        rows.append(f"{uid},{RIGHT_POL[0]}")
    (OUT / "fixture_follows.csv").write_text("\n".join(rows) + "\n",
                                             encoding="utf-8")

    # tweets ---------------------------------------------------------------
    tweets = []
    counter = 0

    def emit(author, kind, day, refs=(), lang="el", text=None, hashtags=None):
        nonlocal counter
        counter += 1
        hour = rng.randint(7, 22)
        minute = rng.randint(0, 59)
        tags = hashtags if hashtags is not None else rng.sample(
            HASHTAG_POOL, k=rng.randint(0, 2))
        tweets.append({
            "tweet_id": f"t{counter:05d}",
            "author_id": author,
            "timestamp": f"{day}T{hour:02d}:{minute:02d}:{rng.randint(0, 59):02d}Z",
            "text": text if text is not None else rng.choice(TEXTS),
            "lang": lang,
            "kind": kind,
            "hashtags": tags,
            "urls": (["https://example.org/a"] if rng.random() < 0.3 else []),
            "media": ([{"kind": "image", "url": "https://img.example/x.png"}]
                      if rng.random() < 0.2 else []),
            "referenced_user_ids": list(refs),
            "referenced_tweet_id": f"t{rng.randint(1, counter):05d}" if refs else None,
            "like_count": rng.randint(0, 50),
            "retweet_count": rng.randint(0, 30),
            "reply_count": rng.randint(0, 10),
        })

    for day in DAYS:
        # originals from both camps and the media
        for author in rng.sample(left_users, k=6):
            emit(author, "original", day)
        for author in rng.sample(right_users, k=5):
            emit(author, "original", day)
        for author in MEDIA:
            emit(author, "original", day)
        # intra-camp interactions
        for _ in range(18):
            a, b = rng.sample(left_users, k=2)
            emit(a, rng.choice(["retweet", "reply", "quote"]), day, [b])
        for _ in range(15):
            a, b = rng.sample(right_users, k=2)
            emit(a, rng.choice(["retweet", "reply", "quote"]), day, [b])
        # media bridges to both camps
        for _ in range(6):
            emit(rng.choice(left_users), "retweet", day, [rng.choice(MEDIA)])
            emit(rng.choice(right_users), "retweet", day, [rng.choice(MEDIA)])
        # occasional cross-camp reply and politically-referencing quote
        if rng.random() < 0.8:
            emit(rng.choice(left_users), "reply", day,
                 [rng.choice(right_users)])
        emit(rng.choice(left_users), "quote", day, [rng.choice(LEFT_POL)])
        emit(rng.choice(right_users), "quote", day, [rng.choice(RIGHT_POL)])
        # neutral lurkers post originals without references
        for author in rng.sample(neutral_users, k=2):
            emit(author, "original", day)
        # noise that the filter must drop
        emit(rng.choice(left_users), "original", day, lang="en",
             text="nothing to see here", hashtags=[])
        emit(rng.choice(right_users), "original", day,
             text="καλημέρα σε όλους", hashtags=[])

    rng.shuffle(tweets)
    with (OUT / "fixture_tweets.jsonl").open("w", encoding="utf-8") as fh:
        for t in tweets:
            fh.write(json.dumps(t, ensure_ascii=False, sort_keys=True) + "\n")

    # run config -----------------------------------------------------------
    config = {
        "tweets": "fixture_tweets.jsonl",
        "annotations": "fixture_annotations.csv",
        "follows": "fixture_follows.csv",
        "threshold": 0.0,
        "sweep_thresholds": [0.0, 0.5, 0.7],
        "k": 10,
        "drop_isolated": True,
        "top_k": 5,
    }
    with (OUT / "fixture_config.json").open("w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2)
        fh.write("\n")
    print(f"wrote fixture: {counter} tweets into {OUT}")


if __name__ == "__main__":
    main()
