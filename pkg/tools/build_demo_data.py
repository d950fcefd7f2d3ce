"""Regenerate the shipped demo data under src/surfparse/data.

Writes the full-form lexicon, the 200-sentence demo corpus, the cylinder-head
fixture with its hand annotation and the tagset registry. Output is
deterministic (fixed seed); rerun after editing the vocabulary below.

    python tools/build_demo_data.py
"""
from __future__ import annotations

import random
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "surfparse" / "data"
SEED = 1995

FMAINV = "(@+FMAINV)"
FAUXV = "(@+FAUXV)"

# lemma -> (subcat, 3sg form, past form, pcp2 form or None when equal to past)
VERBS = {
    "table": ("<SVO>", "tables", "tabled", None),
    "collapse": ("<SV> <SVO>", "collapses", "collapsed", None),
    "head": ("<SVO> <SV>", "heads", "headed", None),
    "run": ("<SV> <SVO>", "runs", "ran", "run"),
    "walk": ("<SV>", "walks", "walked", None),
    "book": ("<SVO>", "books", "booked", None),
    "plan": ("<SVO>", "plans", "planned", None),
    "work": ("<SV>", "works", "worked", None),
    "cook": ("<SVO> <SV>", "cooks", "cooked", None),
    "leak": ("<SV>", "leaks", "leaked", None),
    "crack": ("<SV> <SVO>", "cracks", "cracked", None),
    "water": ("<SVO>", "waters", "watered", None),
    "drink": ("<SVO> <SV>", "drinks", "drank", "drunk"),
    "fish": ("<SV>", "fishes", "fished", None),
    "park": ("<SVO>", "parks", "parked", None),
    "check": ("<SVO>", "checks", "checked", None),
    "house": ("<SVO>", "houses", "housed", None),
    "eat": ("<SVO> <SV>", "eats", "ate", "eaten"),
    "see": ("<SVO>", "sees", "saw", "seen"),
    "like": ("<SVO>", "likes", "liked", None),
    "want": ("<SVO>", "wants", "wanted", None),
    "fix": ("<SVO>", "fixes", "fixed", None),
    "replace": ("<SVO>", "replaces", "replaced", None),
    "remove": ("<SVO>", "removes", "removed", None),
    "inspect": ("<SVO>", "inspects", "inspected", None),
    "know": ("<SVO>", "knows", "knew", "known"),
    "think": ("<SVO>", "thinks", "thought", None),
    "clean": ("<SVO>", "cleans", "cleaned", None),
    "open": ("<SVO> <SV>", "opens", "opened", None),
}
# N/V lemmas: the noun readings come first, as in the sample listings
NOUN_VERBS = {"table", "collapse", "head", "run", "walk", "book", "plan", "work", "cook", "leak",
              "crack", "water", "drink", "fish", "park", "check", "house"}
# lemma -> plural
NOUNS = {
    "table": "tables", "collapse": "collapses", "head": "heads", "run": "runs", "walk": "walks",
    "book": "books", "plan": "plans", "work": "works", "cook": "cooks", "leak": "leaks",
    "crack": "cracks", "water": "waters", "drink": "drinks", "fish": "fish", "park": "parks",
    "check": "checks", "house": "houses",
    "cylinder": "cylinders", "engine": "engines", "gasket": "gaskets", "mechanic": "mechanics",
    "man": "men", "woman": "women", "dog": "dogs", "wife": "wives", "butcher": "butchers",
    "apple": "apples", "pie": "pies", "car": "cars", "garden": "gardens", "child": "children",
    "river": "rivers", "valve": "valves", "manual": "manuals", "driver": "drivers", "boy": "boys",
    "saw": "saws", "cold": "colds",
}
ADJECTIVES = ["old", "big", "fat", "red", "new", "small", "hot", "heavy", "quick", "cold", "clean", "open"]

CLOSED = {
    "that": [
        ("that", "<**CLB> CS (@CS)"),
        ("that", "DET CENTRAL DEM SG (@DN>)"),
        ("that", "ADV AD-A> (@AD-A>)"),
        ("that", "PRON DEM SG"),
        ("that", "<NonMod> <**CLB> <Rel> PRON SG/PL"),
    ],
    "round": [
        ("round", "<SVO> <SV> V SUBJUNCTIVE VFIN (@+FMAINV>)"),
        ("round", "<SVO> <SV> V IMP VFIN (@+FMAINV)"),
        ("round", "<SVO> <SV> V INF"),
        ("round", "<SVO> <SV> V PRES -SG3 VFIN (@+FMAINV)"),
        ("round", "PREP"),
        ("round", "N NOM SG"),
        ("round", "A ABS"),
        ("round", "ADV ADVL (@ADVL)"),
    ],
    "might": [("might", "<-Indef> N NOM SG"), ("might", "V AUXMOD VFIN (@+FAUXV)")],
    "the": [("the", "<Def> DET CENTRAL ART SG/PL (@DN>)")],
    "a": [("a", "<Indef> DET CENTRAL ART SG (@DN>)")],
    "an": [("an", "<Indef> DET CENTRAL ART SG (@DN>)")],
    "this": [("this", "DET CENTRAL DEM SG (@DN>)"), ("this", "PRON DEM SG"), ("this", "ADV AD-A> (@AD-A>)")],
    "these": [("this", "DET CENTRAL DEM PL (@DN>)"), ("this", "PRON DEM PL")],
    "every": [("every", "<Quant> DET CENTRAL SG (@DN>)")],
    "some": [("some", "<Quant> DET CENTRAL SG/PL (@DN>)"), ("some", "<Quant> PRON SG/PL")],
    "he": [("he", "PRON PERS MASC NOM SG3")],
    "she": [("she", "PRON PERS FEM NOM SG3")],
    "it": [("it", "<NonMod> PRON PERS NOM SG3"), ("it", "<NonMod> PRON PERS ACC SG3")],
    "they": [("they", "PRON PERS NOM PL3")],
    "we": [("we", "PRON PERS NOM PL1")],
    "i": [("i", "PRON PERS NOM SG1")],
    "you": [("you", "<NonMod> PRON PERS NOM SG2/PL2"), ("you", "<NonMod> PRON PERS ACC SG2/PL2")],
    "him": [("he", "PRON PERS MASC ACC SG3")],
    "them": [("they", "PRON PERS ACC PL3")],
    "her": [("she", "PRON PERS FEM GEN SG3 (@GN>)"), ("she", "PRON PERS FEM ACC SG3")],
    "in": [("in", "PREP"), ("in", "ADV ADVL (@ADVL)")],
    "on": [("on", "PREP"), ("on", "ADV ADVL (@ADVL)")],
    "under": [("under", "PREP")],
    "with": [("with", "PREP")],
    "of": [("of", "PREP")],
    "by": [("by", "PREP")],
    "near": [("near", "PREP"), ("near", "A ABS"), ("near", "ADV ADVL (@ADVL)")],
    "to": [("to", "PREP"), ("to", "INFMARK> (@INFMARK>)")],
    "often": [("often", "ADV ADVL (@ADVL)")],
    "never": [("never", "ADV ADVL (@ADVL)")],
    "soon": [("soon", "ADV ADVL (@ADVL)")],
    "now": [("now", "ADV ADVL (@ADVL)")],
    "very": [("very", "ADV AD-A> (@AD-A>)")],
    "and": [("and", "CC (@CC)")],
    "or": [("or", "CC (@CC)")],
    "but": [("but", "CC (@CC)")],
    "because": [("because", "<**CLB> CS (@CS)")],
    "if": [("if", "<**CLB> CS (@CS)")],
    "when": [("when", "<**CLB> CS (@CS)"), ("when", "<**CLB> ADV WH (@ADVL)")],
    "can": [("can", "N NOM SG"), ("can", "V AUXMOD VFIN (@+FAUXV)")],
    "will": [("will", "N NOM SG"), ("will", "V AUXMOD VFIN (@+FAUXV)")],
    "must": [("must", "N NOM SG"), ("must", "V AUXMOD VFIN (@+FAUXV)")],
    "may": [("may", "V AUXMOD VFIN (@+FAUXV)")],
    "should": [("shall", "V AUXMOD VFIN (@+FAUXV)")],
    "could": [("can", "V AUXMOD VFIN (@+FAUXV)")],
}


def verb_forms(lemma: str) -> dict[str, list[tuple[str, str]]]:
    sub, third, past, pcp2 = VERBS[lemma]
    v = f"{sub} V"
    forms = {
        lemma: [
            (lemma, f"{v} SUBJUNCTIVE VFIN {FMAINV}"),
            (lemma, f"{v} IMP VFIN {FMAINV}"),
            (lemma, f"{v} INF"),
            (lemma, f"{v} PRES -SG3 VFIN {FMAINV}"),
        ],
        third: [(lemma, f"{v} PRES SG3 VFIN {FMAINV}")],
        past: [(lemma, f"{v} PAST VFIN {FMAINV}")],
    }
    if pcp2 is None:
        forms[past].append((lemma, f"{sub} PCP2"))
    elif pcp2 == lemma:
        forms[lemma].append((lemma, f"{sub} PCP2"))
    else:
        forms[pcp2] = [(lemma, f"{sub} PCP2")]
    return forms


def build_lexicon() -> dict[str, list[tuple[str, str]]]:
    lex: dict[str, list[tuple[str, str]]] = {}

    def add(form, readings, first=False):
        cur = lex.setdefault(form, [])
        new = [r for r in readings if r not in cur]
        lex[form] = new + cur if first else cur + new

    for lemma, pl in NOUNS.items():
        add(lemma, [(lemma, "N NOM SG")])
        add(pl, [(lemma, "N NOM PL")])
    for lemma in VERBS:
        for form, readings in verb_forms(lemma).items():
            add(form, readings)
    for adj in ADJECTIVES:
        add(adj, [(adj, "A ABS")], first=adj not in NOUNS)
    for form, readings in CLOSED.items():
        lex[form] = list(readings)
    return lex


def format_lexicon(lex) -> str:
    out = []
    for form in sorted(lex):
        out.append(f'("<{form}>"')
        readings = lex[form]
        for k, (base, body) in enumerate(readings):
            close = ")" if k == len(readings) - 1 else ""
            out.append(f'  ("{base}" {body}){close}')
    for p in (".", "!", "?", ","):
        out.append(f'("<${p}>")')
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- corpus

PURE_NOUNS = ["cylinder", "engine", "gasket", "mechanic", "man", "woman", "dog", "wife", "butcher",
              "apple", "pie", "car", "garden", "child", "river", "valve", "manual", "driver", "boy"]
NV_NOUNS = sorted(NOUN_VERBS)
TRANSITIVE = ["eat", "see", "like", "fix", "replace", "remove", "inspect", "clean", "open", "check",
              "book", "plan", "water", "cook", "drink", "park", "house", "table"]
INTRANSITIVE = ["run", "walk", "work", "collapse", "leak", "fish", "crack", "cook", "drink", "head"]
AUX = ["might", "can", "will", "must", "may", "should", "could"]
PREPS = ["in", "on", "under", "with", "near", "by"]
ADVS = ["often", "never", "soon", "now"]
UNKNOWN_ADV = ["quickly", "slowly", "badly", "easily"]
UNKNOWN_VERB = ["modernize", "stabilize", "organize"]
UNKNOWN_NOUN = ["blorp", "frobnitz", "wug"]
SUBJ_PRON = {"he": "sg3", "she": "sg3", "it": "sg3", "they": "pl", "we": "pl", "i": "pl", "you": "pl"}
OBJ_PRON = ["him", "them", "her", "it", "you"]


def noun(rng, pool=None):
    return rng.choice(pool or (PURE_NOUNS * 2 + NV_NOUNS))


def np(rng, number=None):
    number = number or rng.choice(["sg", "sg", "pl"])
    n = noun(rng)
    head = NOUNS[n] if number == "pl" else n
    if number == "pl":
        det = rng.choice(["the", "some", "these", "the"])
    else:
        det = rng.choice(["the", "the", "a", "this", "that", "every"])
    words = [det]
    if rng.random() < 0.4:
        if rng.random() < 0.2:
            words.append("very")
        words.append(rng.choice(ADJECTIVES))
    elif rng.random() < 0.15:
        words.append(rng.choice(["cylinder", "engine", "garden"]))
    words.append(head)
    if det == "a" and words[1][0] in "aeiou":
        words[0] = "an"
    return words, ("sg3" if number == "sg" else "pl")


def subject(rng):
    if rng.random() < 0.3:
        p = rng.choice(list(SUBJ_PRON))
        return [p], SUBJ_PRON[p]
    return np(rng)


def obj(rng):
    if rng.random() < 0.2:
        return [rng.choice(OBJ_PRON)]
    return np(rng)[0]


def finite(rng, lemma, agr):
    sub, third, past, _ = VERBS[lemma]
    if rng.random() < 0.35:
        return past
    return third if agr == "sg3" else lemma


def predicate(rng, agr):
    r = rng.random()
    if r < 0.3:
        words = [rng.choice(AUX)]
        if rng.random() < 0.15:
            words.append(rng.choice(["never", "soon", "often"]))
        if rng.random() < 0.5:
            return words + [rng.choice(TRANSITIVE)] + obj(rng)
        return words + [rng.choice(INTRANSITIVE)]
    if r < 0.4:
        verb = "want" if rng.random() < 0.7 else "like"
        return [finite(rng, verb, agr), "to", rng.choice(TRANSITIVE)] + obj(rng)
    if r < 0.7:
        return [finite(rng, rng.choice(TRANSITIVE), agr)] + obj(rng)
    if r < 0.75:
        return [rng.choice(UNKNOWN_VERB + ["fix"]) if agr == "pl" else "fixes"] + obj(rng)
    return [finite(rng, rng.choice(INTRANSITIVE), agr)]


def adjuncts(rng):
    words = []
    if rng.random() < 0.3:
        words += [rng.choice(PREPS)] + np(rng)[0]
    if rng.random() < 0.15:
        words.append(rng.choice(ADVS + UNKNOWN_ADV))
    return words


def clause(rng):
    s, agr = subject(rng)
    if rng.random() < 0.05:
        s = ["the", rng.choice(UNKNOWN_NOUN)]
        agr = "sg3"
    return s + predicate(rng, agr) + adjuncts(rng)


def sentence(rng) -> list[str]:
    r = rng.random()
    if r < 0.55:
        words = clause(rng)
    elif r < 0.65:
        words = [rng.choice(TRANSITIVE)] + obj(rng) + adjuncts(rng)
    elif r < 0.78:
        words = clause(rng) + [rng.choice(["and", "but"])] + clause(rng)
    elif r < 0.9:
        s, agr = subject(rng)
        words = s + [finite(rng, rng.choice(["know", "think"]), agr), "that"] + clause(rng)
    else:
        words = clause(rng) + [rng.choice(["because", "when", "if"])] + clause(rng)
    words = ["I" if w == "i" else w for w in words]
    words[0] = words[0][0].upper() + words[0][1:]
    return words + [rng.choice([".", ".", ".", ".", "!", "?"])]


def build_corpus(n: int = 200) -> list[str]:
    rng = random.Random(SEED)
    lines = ["That round table might collapse ."]
    seen = set(lines)
    while len(lines) < n:
        line = " ".join(sentence(rng))
        if line not in seen:
            seen.add(line)
            lines.append(line)
    return lines


# ---------------------------------------------------------------- cylinder-head fixture
# Each token carries its intended analysis as ``form|base|body``; ``form`` alone
# means the token is unambiguous in the lexicon or punctuation.

CYLINDER = [
    "The|the|<Def> DET CENTRAL ART SG/PL (@DN>) mechanic|mechanic|N NOM SG will|will|V AUXMOD VFIN (@+FAUXV) "
    "replace|replace|<SVO> V INF the|the|<Def> DET CENTRAL ART SG/PL (@DN>) cylinder|cylinder|N NOM SG "
    "head|head|N NOM SG .",
    "The|the|<Def> DET CENTRAL ART SG/PL (@DN>) cylinder|cylinder|N NOM SG head|head|N NOM SG "
    "cracks|crack|<SV> <SVO> V PRES SG3 VFIN (@+FMAINV) .",
    "Cylinder|cylinder|N NOM SG heads|head|N NOM PL crack|crack|<SV> <SVO> V PRES -SG3 VFIN (@+FMAINV) "
    "often|often|ADV ADVL (@ADVL) .",
    "We|we|PRON PERS NOM PL1 head|head|<SVO> <SV> V PRES -SG3 VFIN (@+FMAINV) to|to|PREP "
    "the|the|<Def> DET CENTRAL ART SG/PL (@DN>) river|river|N NOM SG .",
    "The|the|<Def> DET CENTRAL ART SG/PL (@DN>) old|old|A ABS engine|engine|N NOM SG "
    "leaks|leak|<SV> V PRES SG3 VFIN (@+FMAINV) .",
    "A|a|<Indef> DET CENTRAL ART SG (@DN>) mechanic|mechanic|N NOM SG inspected|inspect|<SVO> V PAST VFIN (@+FMAINV) "
    "the|the|<Def> DET CENTRAL ART SG/PL (@DN>) cylinder|cylinder|N NOM SG head|head|N NOM SG "
    "and|and|CC (@CC) the|the|<Def> DET CENTRAL ART SG/PL (@DN>) gasket|gasket|N NOM SG .",
]
# positions (sentence, token) the collocation pipeline is expected to resolve
CYLINDER_DESIGNATED = [(1, 2), (2, 1), (5, 5)]


def build_cylinder():
    tokens, gold = [], []
    for line in CYLINDER:
        toks = []
        for form, base, body in _split_annotated(line):
            toks.append(form)
            gold.append((form, base, body))
        tokens.append(" ".join(toks))
    return tokens, gold


def _split_annotated(line: str):
    out = []
    parts = line.split(" ")
    i = 0
    while i < len(parts):
        item = parts[i]
        if "|" not in item:
            out.append((item, None, None))
            i += 1
            continue
        form, base, body = item.split("|", 2)
        i += 1
        # the body runs until the next annotated token or bare punctuation
        while i < len(parts) and "|" not in parts[i] and parts[i] not in ".!?":
            body += " " + parts[i]
            i += 1
        out.append((form, base, body))
    return out


def format_gold(items) -> str:
    out = []
    for form, base, body in items:
        if base is None:
            out.append(f'("<${form}>")')
            continue
        display = ("*" + form.lower()) if form[:1].isupper() else form
        tags = body if not form[:1].isupper() else "<*> " + body
        out.append(f'("<{display}>"\n  ("{base}" {tags}))')
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- tagset


def write_tagset() -> int:
    # imported late: the package reads the lexicon written above
    from surfparse.core import CAPITAL_TAG, classify
    from surfparse.lexicon import load_guesser, load_lexicon
    from surfparse.rules import load_grammar

    texts = {CAPITAL_TAG}
    lex = load_lexicon(DATA / "lexicon.cohorts")
    guesser = load_guesser(DATA / "guesser.txt")
    grammar = load_grammar(DATA / "grammar.cg")
    for readings in lex.entries.values():
        texts.update(t.text for r in readings for t in r.tags)
    for rule in guesser.rules:
        texts.update(t for prod in rule.productions for t in prod)
    texts.update(t for prod in guesser.default for t in prod)
    for k in grammar.constraints:
        for pat in [k.target, *(c.pattern for c in k.conditions), *(c.barrier for c in k.conditions if c.barrier)]:
            texts.update(t.text for t in pat.tags())
    for m in grammar.mappings:
        texts.update(t.text for t in m.add)
        for pat in [m.target, *(c.pattern for c in m.context)]:
            texts.update(t.text for t in pat.tags())
    lines = ["# Demo tagset: one tag per line, TEXT KIND"]
    lines += [f"{t} {classify(t).value}" for t in sorted(texts, key=lambda t: (classify(t).value, t))]
    (DATA / "tagset.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return len(texts)


def main() -> None:
    lex = build_lexicon()
    (DATA / "lexicon.cohorts").write_text(format_lexicon(lex), encoding="utf-8")
    (DATA / "demo_corpus.txt").write_text("\n".join(build_corpus()) + "\n", encoding="utf-8")
    tokens, gold = build_cylinder()
    (DATA / "cylinder.txt").write_text("\n".join(tokens) + "\n", encoding="utf-8")
    (DATA / "cylinder_gold.cohorts").write_text(format_gold(gold), encoding="utf-8")
    (DATA / "cylinder_designated.tsv").write_text(
        "".join(f"{s}\t{t}\n" for s, t in CYLINDER_DESIGNATED), encoding="utf-8")
    print(f"{len(lex)} lexicon forms, {write_tagset()} registered tags")


if __name__ == "__main__":
    main()
