#!/usr/bin/env python3
"""Regenerates synthetic_200.jsonl: 4 cohorts x 2 styles x 25 utterances."""
import json
import random

rng = random.Random(20240901)
WORDS = ("de het een kat hond zit loopt op in mat huis boom fiets rood groen "
         "snel langzaam morgen gisteren school water brood kaas zon regen").split()
TAGS = ["[lach]", "<ggg>", "(uh)", "{ruis}"]
COHORTS = {"DC": 0.25, "DT": 0.12, "NnA": 0.40, "DOA": 0.18}
STYLES = {"Read": 0.8, "HMI": 1.25}


def corrupt(ref, rate):
    hyp = []
    for w in ref:
        r = rng.random()
        if r < rate * 0.5:
            hyp.append(rng.choice(WORDS))
        elif r < rate * 0.75:
            continue
        else:
            hyp.append(w)
        if rng.random() < rate * 0.2:
            hyp.append(rng.choice(WORDS))
    return hyp


def decorate(words):
    out = []
    for i, w in enumerate(words):
        if i == 0 and rng.random() < 0.5:
            w = w.capitalize()
        out.append(w)
        if rng.random() < 0.08:
            out.append(rng.choice(TAGS))
    text = " ".join(out)
    if rng.random() < 0.5:
        text += rng.choice([".", "!", "?"])
    return text


lines = []
n = 0
for cohort, base in COHORTS.items():
    for style, factor in STYLES.items():
        for k in range(25):
            n += 1
            ref = [rng.choice(WORDS) for _ in range(rng.randint(3, 12))]
            hyp = ref[:] if k % 7 == 0 else corrupt(ref, min(base * factor, 0.9))
            lines.append({
                "utt_id": f"{cohort}-{style}-{k:03d}",
                "speaker_id": f"{cohort}-spk{k % 5}",
                "cohort": cohort,
                "style": style,
                "ref": decorate(ref),
                "hyp": decorate(hyp),
            })

rng.shuffle(lines)
with open("synthetic_200.jsonl", "w", encoding="utf-8") as f:
    for rec in lines:
        f.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
