#!/usr/bin/env python3
"""Deterministic mini corpus: ~100k tokens of templated CoNLL-U plus word-
and phrase-similarity fixtures sized so every benchmark word clears the
strictest frequency floor (100) with margin.

Regenerate with:  python3 scripts/make_mini_corpus.py data/mini
"""
import bisect
import gzip
import random
import sys
from pathlib import Path

SEED = 20240817
TARGET_TOKENS = 103_000
MIN_BENCH_COUNT = 150

NOUNS = """cat dog horse cow sheep bird fish mouse lion tiger
car truck train boat plane bus bike ship wheel engine
house door window wall roof floor garden gate fence room
bread cheese milk apple fruit meat soup rice cake tea
king queen child man woman friend doctor teacher farmer guard
city town village street market bridge tower field river hill
stone tree leaf branch trunk flower grass seed bush vine
book page letter story song picture map clock bell rope
coat shoe hat glove scarf belt button pocket sleeve collar
knife spoon plate cup bowl jar pot pan basket tray
cloud rain snow wind storm sun moon star sky fog
iron copper silver gold glass paper cloth leather wood clay""".split()

VERBS = """chased found watched liked loved feared helped followed carried pushed
pulled opened closed built broke moved crossed reached left entered
owned sold bought made took gave kept held showed told
asked heard saw met joined visited passed filled covered painted
cleaned washed fixed planted grew cut raised fed caught threw
dropped lifted turned rolled parked sailed flew drove rode guarded""".split()

ADJS = """black white red green blue old young big small tall
short dark bright cold warm dry wet fast slow heavy
light strong weak quiet loud clean dirty rich poor happy
sad angry calm wild tame sharp dull smooth rough round""".split()

ADVS = """quickly slowly quietly loudly carefully badly well often rarely always
never soon late early easily hardly gently firmly twice once""".split()

WORDSIM_PAIRS = [
    ("cat", "dog", 8.4), ("horse", "cow", 7.9), ("lion", "tiger", 8.8),
    ("bird", "fish", 5.6), ("sheep", "cow", 7.2), ("mouse", "cat", 6.1),
    ("car", "truck", 8.6), ("train", "bus", 7.8), ("boat", "ship", 8.9),
    ("plane", "bike", 4.2), ("wheel", "engine", 6.3), ("car", "engine", 6.8),
    ("house", "door", 6.2), ("door", "window", 7.1), ("wall", "roof", 6.6),
    ("garden", "gate", 5.9), ("house", "garden", 6.0), ("room", "floor", 6.4),
    ("bread", "cheese", 6.9), ("milk", "tea", 6.1), ("apple", "fruit", 8.1),
    ("soup", "rice", 5.8), ("cat", "car", 1.3), ("dog", "bread", 1.1),
    ("horse", "window", 0.9), ("king", "queen", 8.7), ("man", "woman", 8.3),
    ("doctor", "teacher", 6.7), ("king", "truck", 0.8), ("milk", "street", 0.7),
]

PHRASE_ITEMS = [
    # type, root1, dep1, root2, dep2, rating
    ("AN", "cat", "black", "dog", "dark", 6.8),
    ("AN", "horse", "old", "cow", "young", 4.1),
    ("AN", "house", "big", "tower", "tall", 6.9),
    ("AN", "door", "red", "window", "green", 5.2),
    ("AN", "bread", "warm", "soup", "cold", 3.4),
    ("AN", "king", "rich", "queen", "poor", 3.1),
    ("AN", "street", "quiet", "market", "loud", 2.6),
    ("AN", "car", "fast", "train", "slow", 3.8),
    ("AN", "cat", "small", "mouse", "small", 7.2),
    ("AN", "river", "cold", "stone", "cold", 4.4),
    ("VO", "chased", "cat", "followed", "dog", 7.4),
    ("VO", "opened", "door", "closed", "gate", 5.5),
    ("VO", "built", "house", "built", "tower", 7.9),
    ("VO", "carried", "bread", "carried", "milk", 7.6),
    ("VO", "watched", "bird", "feared", "lion", 3.9),
    ("VO", "pushed", "car", "pulled", "truck", 6.6),
    ("VO", "liked", "cheese", "loved", "cake", 6.9),
    ("VO", "helped", "doctor", "helped", "teacher", 7.7),
    ("VO", "crossed", "bridge", "reached", "river", 5.7),
    ("VO", "sold", "horse", "bought", "cow", 5.9),
    ("NN", "door", "house", "gate", "garden", 6.7),
    ("NN", "wheel", "car", "engine", "truck", 6.2),
    ("NN", "market", "village", "street", "town", 6.5),
    ("NN", "roof", "house", "wall", "tower", 5.8),
    ("NN", "cheese", "sheep", "milk", "cow", 6.3),
    ("NN", "king", "city", "guard", "bridge", 3.2),
    ("NN", "story", "child", "song", "bird", 3.6),
    ("NN", "cup", "tea", "bowl", "soup", 7.3),
    ("NN", "field", "farmer", "garden", "house", 4.8),
    ("NN", "leaf", "tree", "branch", "tree", 7.5),
]


def promote(words, bench):
    """Benchmark words move to the head of the frequency distribution."""
    head = [w for w in words if w in bench]
    tail = [w for w in words if w not in bench]
    return head + tail


def sampler(rng, words, exponent):
    cum, acc = [], 0.0
    for k in range(len(words)):
        acc += 1.0 / (k + 1) ** exponent
        cum.append(acc)
    total = cum[-1]
    cum = [c / total for c in cum]
    return lambda: words[bisect.bisect_left(cum, rng.random())]


def token(i, form, upos, head, deprel):
    lemma = form.lower()
    return f"{i}\t{form}\t{lemma}\t{upos}\t_\t_\t{head}\t{deprel}\t_\t_"


def make_sentence(rng, draw):
    """Returns CoNLL-U lines for one templated sentence."""
    t = rng.random()
    n, v, a, d = draw["n"], draw["v"], draw["a"], draw["d"]
    det1 = rng.choice(["The", "A"])
    det2 = rng.choice(["the", "a"])
    if t < 0.30:  # The ADJ NOUN VERB the NOUN .
        return [
            token(1, det1, "DET", 3, "det"),
            token(2, a(), "ADJ", 3, "amod"),
            token(3, n(), "NOUN", 4, "nsubj"),
            token(4, v(), "VERB", 0, "root"),
            token(5, det2, "DET", 6, "det"),
            token(6, n(), "NOUN", 4, "dobj"),
            token(7, ".", "PUNCT", 4, "punct"),
        ]
    if t < 0.60:  # The NOUN VERB the ADJ NOUN .
        return [
            token(1, det1, "DET", 2, "det"),
            token(2, n(), "NOUN", 3, "nsubj"),
            token(3, v(), "VERB", 0, "root"),
            token(4, det2, "DET", 6, "det"),
            token(5, a(), "ADJ", 6, "amod"),
            token(6, n(), "NOUN", 3, "dobj"),
            token(7, ".", "PUNCT", 3, "punct"),
        ]
    if t < 0.85:  # The NOUN of the NOUN VERB ADV .
        return [
            token(1, det1, "DET", 2, "det"),
            token(2, n(), "NOUN", 6, "nsubj"),
            token(3, "of", "ADP", 5, "case"),
            token(4, det2, "DET", 5, "det"),
            token(5, n(), "NOUN", 2, "nmod"),
            token(6, v(), "VERB", 0, "root"),
            token(7, d(), "ADV", 6, "advmod"),
            token(8, ".", "PUNCT", 6, "punct"),
        ]
    # The NOUN NOUN VERB a NOUN .
    return [
        token(1, det1, "DET", 3, "det"),
        token(2, n(), "NOUN", 3, "nmod"),
        token(3, n(), "NOUN", 4, "nsubj"),
        token(4, v(), "VERB", 0, "root"),
        token(5, det2, "DET", 6, "det"),
        token(6, n(), "NOUN", 4, "dobj"),
        token(7, ".", "PUNCT", 4, "punct"),
    ]


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    bench_words = set()
    for w1, w2, _ in WORDSIM_PAIRS:
        bench_words.update((w1, w2))
    for _, r1, d1, r2, d2, _ in PHRASE_ITEMS:
        bench_words.update((r1, d1, r2, d2))
    draw = {
        "n": sampler(rng, promote(NOUNS, bench_words), 0.55),
        "v": sampler(rng, promote(VERBS, bench_words), 0.60),
        "a": sampler(rng, promote(ADJS, bench_words), 0.50),
        "d": sampler(rng, ADVS, 0.75),
    }

    counts = {}
    lines = []
    tokens = 0
    sent_id = 0
    while tokens < TARGET_TOKENS:
        sent_id += 1
        sent = make_sentence(rng, draw)
        lines.append(f"# sent_id = {sent_id}")
        lines.extend(sent)
        lines.append("")
        tokens += len(sent)
        for row in sent:
            form = row.split("\t")[1].lower()
            counts[form] = counts.get(form, 0) + 1

    short = {w: counts.get(w, 0) for w in bench_words if counts.get(w, 0) < MIN_BENCH_COUNT}
    if short:
        raise SystemExit(f"benchmark words below the frequency floor: {short}")

    corpus = out / "corpus.conllu.gz"
    payload = ("\n".join(lines) + "\n").encode()
    with open(corpus, "wb") as raw:
        with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as gz:  # reproducible bytes
            gz.write(payload)

    with open(out / "wordsim.tsv", "w") as f:
        f.write("word1\tword2\trating\n")
        for w1, w2, r in WORDSIM_PAIRS:
            f.write(f"{w1}\t{w2}\t{r}\n")

    with open(out / "phrases.tsv", "w") as f:
        f.write("type\troot1\tdep1\troot2\tdep2\trating\n")
        for t, r1, d1, r2, d2, r in PHRASE_ITEMS:
            f.write(f"{t}\t{r1}\t{d1}\t{r2}\t{d2}\t{r}\n")

    least = min(counts.get(w, 0) for w in bench_words)
    print(f"sentences={sent_id} tokens={tokens} vocab={len(counts)} "
          f"min_benchmark_count={least}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/mini")
