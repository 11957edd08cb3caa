#!/usr/bin/env python3
"""Regenerates the bundled fixture files under data/fixture/.

Output is deterministic (fixed seed). The Uber fixture holds 247 posts on
2016-04-28 and 180 on 2016-04-30 whose lexicon labels come out as
(82, 48, 117) and (55, 34, 91) positive/negative/neutral, plus noise records
that ingestion must reject or deduplicate.
"""
import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "fixture"

POSITIVE = [
    "Adoro a {u}, serviço excelente",
    "{u} é muito bom e barato",
    "Great ride with {u} today :)",
    "{u} rápido e barato, recomendo",
    "Love {u}, the drivers are great",
    "A {u} não é má, é ótima",
    "Viagem ótima com a {u} em {city}",
    "{u} salvou-me a noite, excelente motorista",
    "Sempre que preciso uso a {u}, é boa",
    "Good service from {u} in {city}",
]
NEGATIVE = [
    "A {u} é ilegal e concorrência desleal",
    "{u} is terrible, never again",
    "Não gosto da {u}",
    "Péssimo serviço da {u} hoje",
    "A {u} está cada vez mais cara, que vergonha",
    "Hate the surge pricing on {u} :(",
    "Motorista da {u} foi mau comigo em {city}",
    "{u} não é boa alternativa",
]
NEUTRAL = [
    "Taxistas protestam contra a {u} em {city}",
    "Marcha lenta dos táxis contra a {u}",
    "{u} chega a {city}",
    "Notícia sobre a {u} {url}",
    "@{user} o que achas da {u}?",
    "Manifestação de taxistas e a {u} no Parlamento",
    "A {u} responde aos taxistas",
    "Debate sobre a {u} na televisão",
    "Governo vai analisar a {u}",
    "{u} e táxis em {city} amanhã",
]
UBER_FORMS = ["Uber", "uber", "UBER", "#Uber", "Uber!", "#uber"]
CITIES = ["Lisboa", "Porto", "Faro", "Coimbra", "Braga"]
GEO = {
    "Lisboa": (38.7223, -9.1393),
    "Porto": (41.1579, -8.6291),
    "Faro": (37.0194, -7.9322),
    "Coimbra": (40.2033, -8.4103),
    "Braga": (41.5454, -8.4265),
}
NOISE = [
    "Taxistas em protesto em Lisboa",
    "Trânsito cortado na Avenida da Liberdade",
    "Marcha lenta de táxis no Parque das Nações",
    "Tube strike in London today",
    "Cabify chega a Portugal",
]


def make_docs(rng, day, counts, start_id):
    docs = []
    pools = [("positive", POSITIVE), ("negative", NEGATIVE), ("neutral", NEUTRAL)]
    labels = []
    for (name, pool), n in zip(pools, counts):
        labels += [(name, pool[i % len(pool)]) for i in range(n)]
    rng.shuffle(labels)
    for i, (_, template) in enumerate(labels):
        city = rng.choice(CITIES)
        text = template.format(
            u=rng.choice(UBER_FORMS),
            city=city,
            url="http://t.co/" + "".join(rng.choice("abcdefxyz0123") for _ in range(6)),
            user="utilizador%d" % rng.randrange(1000),
        )
        secs = rng.randrange(86400)
        doc = {
            "id": "t%06d" % (start_id + i),
            "text": text,
            "author": "user%03d" % rng.randrange(400),
            "timestamp": "%sT%02d:%02d:%02dZ" % (day, secs // 3600, secs // 60 % 60, secs % 60),
        }
        if rng.random() < 0.4:
            lat, lon = GEO[city]
            doc["geo"] = {"lat": lat, "lon": lon}
        doc["source"] = "twitter"
        doc["lang"] = "en" if any(w in template for w in ("ride", "Love", "terrible", "Hate", "Good")) else "pt"
        docs.append(doc)
    return docs


def write_uber(rng):
    docs = make_docs(rng, "2016-04-28", (82, 48, 117), 1)
    docs += make_docs(rng, "2016-04-30", (55, 34, 91), 1001)
    noise = []
    for i in range(20):
        secs = rng.randrange(86400)
        d = {
            "id": "n%04d" % i,
            "text": NOISE[i % len(NOISE)],
            "author": "user%03d" % rng.randrange(400),
            "timestamp": "2016-04-29T%02d:%02d:%02dZ" % (secs // 3600, secs // 60 % 60, secs % 60),
            "source": "twitter",
        }
        if i % 4 == 0:
            d["geo"] = {"lat": 40.4168, "lon": -3.7038}  # Madrid, outside the box
        noise.append(d)
    lines = [json.dumps(d, ensure_ascii=False) for d in docs + noise]
    rng.shuffle(lines)
    # three exact re-deliveries and two broken records
    lines += [json.dumps(docs[5], ensure_ascii=False), json.dumps(docs[300], ensure_ascii=False),
              json.dumps(docs[42], ensure_ascii=False)]
    lines.insert(17, '{"id": "broken", "text": "uber sem timestamp"')
    lines.insert(230, '{"id": "t999999", "text": "uber", "author": "x", "timestamp": "2016-04-31T00:00:00Z", "source": "twitter"}')
    (OUT / "uber_tweets.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_static():
    kb = {"entities": [
        {"id": "uber", "name": "Uber", "surface_forms": ["uber", "uber app", "uberx"],
         "profile": {"taxi": 1, "motorista": 1, "app": 1, "viagem": 1}},
        {"id": "cabify", "name": "Cabify", "surface_forms": ["cabify"], "profile": {}},
        {"id": "apple_inc", "name": "Apple Inc.", "surface_forms": ["apple", "apple inc"],
         "profile": {"iphone": 1, "tech": 1, "mac": 1}},
        {"id": "apple_fruit", "name": "apple (fruit)", "surface_forms": ["apple"],
         "profile": {"pie": 1, "fruit": 1, "juice": 1}},
    ]}
    (OUT / "kb.json").write_text(json.dumps(kb, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    heur = {"search": ["uber"],
            "geo": {"min_lat": 36.9, "max_lat": 42.2, "min_lon": -9.6, "max_lon": -6.2}}
    (OUT / "heuristics.json").write_text(json.dumps(heur, indent=2) + "\n", encoding="utf-8")

    lexicon = [
        "# fixture lexicon: term<TAB>score, NEG marks negation words",
        "adoro\t2", "excelente\t2", "bom\t1", "boa\t1", "ótimo\t2", "ótima\t2", "barato\t1",
        "rápido\t1", "recomendo\t2", "great\t2", "love\t2", "good\t1", "gosto\t1", ":)\t1",
        "salvou\t1",
        "ilegal\t-2", "desleal\t-2", "terrible\t-2", "péssimo\t-2", "vergonha\t-2", "cara\t-1",
        "má\t-1", "mau\t-1", "hate\t-2", ":(\t-1",
        "não\tNEG", "not\tNEG", "nunca\tNEG", "never\tNEG",
    ]
    (OUT / "lexicon.tsv").write_text("\n".join(lexicon) + "\n", encoding="utf-8")

    # Each class owns disjoint words, so the set is linearly separable.
    pos = ["adoro", "excelente", "recomendo", "fantástico", "rápido"]
    neg = ["horrível", "ilegal", "péssimo", "caro", "atraso"]
    neu = ["notícia", "lisboa", "amanhã", "reunião", "parlamento"]
    rows = []
    for label, words in (("positive", pos), ("negative", neg), ("neutral", neu)):
        for i in range(10):
            a, b = words[i % 5], words[(i + 2) % 5]
            rows.append("%s\tuber %s %s" % (label, a, b))
    (OUT / "labeled.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    rng = random.Random(7)
    left = ["the", "a", "my", "our"]
    right = ["barked", "slept", "ran", "ate"]
    other_l = ["green", "blue", "red", "wet"]
    other_r = ["grows", "falls", "shines", "fades"]
    lines = []
    for _ in range(150):
        w = rng.choice(["x", "y"])
        lines.append("%s %s %s %s" % (rng.choice(left), w, rng.choice(right), rng.choice(left)))
        lines.append("%s %s %s %s" % (rng.choice(other_l), "z", rng.choice(other_r), rng.choice(other_l)))
    (OUT / "planted_corpus.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20160429)
    write_uber(rng)
    write_static()


if __name__ == "__main__":
    main()
