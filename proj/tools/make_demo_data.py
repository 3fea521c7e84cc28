#!/usr/bin/env python3
"""Generate the synthetic demo corpus under data/demo.

Three coarse purpose classes, each with planted signal words that appear in
no lexicon or cluster resource, so only the n-gram group can pick them up.
Everything else (fillers, hashtags, emoticons, negation, casing) is drawn
independently of the class. Output is fully determined by SEED.
"""

import argparse
import json
import pathlib
import random

SEED = 20121106

FINE = {
    "favour": ["agree", "praise", "support"],
    "oppose": ["hypocrisy", "mistake", "disagree", "ridicule", "criticize", "vent"],
    "other": ["information", "none_of_above"],
}
ALL_FINE = [label for labels in FINE.values() for label in labels]
CLASS_SIZES = {"favour": 78, "oppose": 70, "other": 52}

SIGNAL = {
    "favour": ["applaud", "bravo", "inspiring", "thankful", "endorse", "backing", "champion", "respect"],
    "oppose": ["disgrace", "liar", "flipflop", "pathetic", "shameful", "hypocrite", "fraud", "phony"],
    "other": ["schedule", "announced", "coverage", "update", "reports", "details", "transcript", "livestream"],
}

# word -> POS tag (N noun, V verb, A adjective, R adverb, O pronoun, D determiner, P preposition)
FILLER = {
    "obama": "N", "romney": "N", "debate": "N", "vote": "V", "election": "N", "campaign": "N",
    "president": "N", "economy": "N", "jobs": "N", "taxes": "N", "speech": "N", "people": "N",
    "america": "N", "country": "N", "policy": "N", "plan": "N", "today": "N", "said": "V",
    "think": "V", "news": "N", "watch": "V", "candidate": "N", "party": "N", "state": "N",
    "win": "V", "lose": "V", "good": "A", "bad": "A", "big": "A", "new": "A", "really": "R",
    "just": "R", "again": "R", "we": "O", "they": "O", "he": "O", "the": "D", "this": "D",
    "about": "P", "for": "P", "on": "P", "with": "P", "money": "N", "health": "N", "care": "N",
    "war": "N", "voters": "N", "night": "N", "ohio": "N", "florida": "N", "happy": "A",
    "angry": "A", "afraid": "A", "hope": "V", "fear": "N", "trust": "V", "love": "V", "hate": "V",
}
FILLER_WORDS = sorted(FILLER)
EMOTION_HASHTAGS = ["joy", "anger", "fear", "sadness", "surprise", "disgust", "trust", "anticipation"]
TOPIC_HASHTAGS = ["election2012", "debate", "gop", "dems", "ohio"]
EMOTICONS = [":)", ":(", ":D", ":-(", ";)", ":-)"]
PUNCT = ["!!!", "?", "?!", "!", "..."]

EMOLEX = {
    "good": ["joy", "positive", "trust"], "bad": ["negative", "sadness"], "happy": ["joy", "positive"],
    "angry": ["anger", "negative"], "afraid": ["fear", "negative"], "hope": ["anticipation", "joy", "positive"],
    "fear": ["fear", "negative"], "trust": ["trust", "positive"], "love": ["joy", "positive"],
    "hate": ["anger", "disgust", "negative"], "war": ["fear", "anger", "negative", "sadness"],
    "win": ["anticipation", "joy", "positive", "surprise"], "lose": ["negative", "sadness", "anger"],
    "money": ["anticipation", "joy", "positive", "trust"], "health": ["positive"], "care": ["positive", "trust"],
    "president": ["positive", "trust"], "vote": ["anticipation"], "election": ["anticipation"],
    "taxes": ["negative", "sadness"],
}
ALL_EMOLEX_LABELS = ["anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise",
                     "trust", "positive", "negative"]


def make_tokens(rng, label):
    """Tokens (surface, tag) joined later with single spaces; one token each."""
    tokens = []
    for _ in range(rng.randint(5, 10)):
        word = rng.choice(FILLER_WORDS)
        tag = FILLER[word]
        roll = rng.random()
        if roll < 0.06:
            word = word.upper()
        elif roll < 0.10 and len(word) > 2:
            word = word[:-1] + word[-1] * 4
        tokens.append((word, tag))
    signals = []
    if rng.random() < 0.92:
        signals.append(rng.choice(SIGNAL[label]))
    if rng.random() < 0.45:
        signals.append(rng.choice(SIGNAL[label]))
    if rng.random() < 0.12:
        other = rng.choice([c for c in SIGNAL if c != label])
        signals.append(rng.choice(SIGNAL[other]))
    for s in signals:
        tokens.insert(rng.randint(0, len(tokens)), (s, "A"))
    if rng.random() < 0.25:
        tokens.insert(rng.randint(0, len(tokens) - 1), ("not", "R"))
    if rng.random() < 0.3:
        tokens.insert(rng.randint(0, len(tokens)), ("@user_%d" % rng.randint(1, 400), "@"))
    if rng.random() < 0.2:
        tokens.append(("http://t.co/%05d" % rng.randint(0, 99999), "U"))
    if rng.random() < 0.5:
        tokens.append(("#" + rng.choice(TOPIC_HASHTAGS), "#"))
    if rng.random() < 0.35:
        tokens.append(("#" + rng.choice(EMOTION_HASHTAGS), "#"))
    if rng.random() < 0.4:
        tokens.append((rng.choice(PUNCT), ","))
    if rng.random() < 0.25:
        tokens.append((rng.choice(EMOTICONS), "E"))
    return tokens


def annotate(rng, tweet_id, label, annotators, spammer, rows, truth_fine):
    panel = rng.sample(annotators, rng.choice([3, 3, 3, 3, 4, 5]))
    for annotator in panel:
        roll = rng.random()
        if roll < 0.6:
            q1 = truth_fine
        elif roll < 0.88:
            q1 = rng.choice(FINE[label])
        else:
            q1 = rng.choice(ALL_FINE)
        q2 = "political" if rng.random() < 0.93 else "not_political"
        rows.append((tweet_id, annotator, q1, q2))
    if rng.random() < 0.3:
        rows.append((tweet_id, spammer, rng.choice(ALL_FINE), rng.choice(["political", "not_political"])))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "demo"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)

    labels = [c for c, n in CLASS_SIZES.items() for _ in range(n)]
    rng.shuffle(labels)
    annotators = ["ann%02d" % i for i in range(1, 13)]
    spammer = "ann13"

    raw, pos_rows, ann_rows, emo_rows = [], [], [], []
    for i, label in enumerate(labels):
        tweet_id = "d%03d" % (i + 1)
        tokens = make_tokens(rng, label)
        text = " ".join(t for t, _ in tokens)
        raw.append({"id": tweet_id, "text": text, "lang": "en", "query": rng.choice(["obama", "romney"])})
        pos_rows.append("%s\t%s" % (tweet_id, " ".join(tag for _, tag in tokens)))
        truth_fine = rng.choice(FINE[label])
        annotate(rng, tweet_id, label, annotators, spammer, ann_rows, truth_fine)
        if rng.random() < 0.5:
            emotion = rng.choice(["admiration", "anger", "disgust", "joy", "trust", "anticipation"])
            for annotator in rng.sample(annotators, 3):
                emo_rows.append((tweet_id, annotator, emotion if rng.random() < 0.8 else "surprise"))

    # Tweets the filter must drop.
    for j in range(8):
        raw.append({"id": "rt%02d" % j, "text": "RT @user_%d : %s %s" % (j, rng.choice(FILLER_WORDS), rng.choice(FILLER_WORDS)), "lang": "en"})
    for j in range(7):
        raw.append({"id": "es%02d" % j, "text": "el debate de hoy con obama y romney", "lang": "es"})
    for j in range(5):
        raw.append({"id": "lw%02d" % j, "text": "lol omg %s !!!" % rng.choice(FILLER_WORDS), "lang": "en"})
    order = list(range(len(raw)))
    rng.shuffle(order)
    raw = [raw[k] for k in order]

    with open(out / "raw.jsonl", "w") as f:
        for t in raw:
            f.write(json.dumps(t, ensure_ascii=False) + "\n")
    (out / "pos.tsv").write_text("\n".join(pos_rows) + "\n")
    with open(out / "annotations.tsv", "w") as f:
        f.write("tweet_id\tannotator_id\tq1\tq2\n")
        for row in ann_rows:
            f.write("\t".join(row) + "\n")
    with open(out / "emotions.tsv", "w") as f:
        f.write("tweet_id\tannotator_id\temotion\n")
        for row in emo_rows:
            f.write("\t".join(row) + "\n")
    with open(out / "wordlist.txt", "w") as f:
        f.write("# demo English wordlist\n")
        for w in sorted(set(FILLER_WORDS) | {s for v in SIGNAL.values() for s in v} | {"not"}):
            f.write(w + "\n")
    with open(out / "emotion_lexicon.tsv", "w") as f:
        for word in sorted(EMOLEX):
            for lab in ALL_EMOLEX_LABELS:
                f.write("%s\t%s\t%d\n" % (word, lab, 1 if lab in EMOLEX[word] else 0))
    with open(out / "clusters.tsv", "w") as f:
        for k, word in enumerate(FILLER_WORDS):
            path = format(k % 12, "04b") + ("0" if FILLER[word] in "NO" else "1")
            f.write("%s\t%s\t%d\n" % (path, word, 10 + k))
    (out / "emotion_hashtags.txt").write_text("".join(e + "\n" for e in EMOTION_HASHTAGS))


if __name__ == "__main__":
    main()
