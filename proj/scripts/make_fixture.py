#!/usr/bin/env python3
# Copyright 2026 The Morphoseed Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the synthetic fixture lexicon under data/fixture/.

The fixture is a small stand-in for a real morpheme lexicon: three main
POS trees (nominal, verbal, adjectival) over five semantic domains, plus
a handful of function-morpheme MCs so that all fifteen word-formation
patterns occur. Output is deterministic.

Usage: scripts/make_fixture.py [out_dir]
"""

import os
import random
import sys

GROUP_SIZE = int(os.environ.get("FIXTURE_GROUP_SIZE", 3))
WORD_SCALE = int(os.environ.get("FIXTURE_WORD_SCALE", 1))

DOMAINS = ["plant", "animal", "water", "person", "tool"]

POOLS = {
    ("nominal", "plant"): "木树李禾稻麦草花叶根枝竹松柳桃梅果苗",
    ("verbal", "plant"): "养植莳浇耕种栽灌锄割收采摘插剪培",
    ("adjectival", "plant"): "茂盛荣枯槁萎青翠绿嫩密疏秀艳芳香",
    ("nominal", "animal"): "马骏驹牛犊羊鸡鸭鹅犬狗猪鱼鸟雀虫蛇龙虎狼",
    ("verbal", "animal"): "牧放喂饲驯骑驾宰杀捕猎钓孵圈拴遛",
    ("adjectival", "animal"): "猛凶驯温肥壮瘦野灵笨狡乖",
    ("nominal", "water"): "水河江湖海溪泉雨雪冰浪潮波池潭渠",
    ("verbal", "water"): "流淌涌滴溅浸泡淹渗漂游泳渡汲舀洗",
    ("adjectival", "water"): "清浊深浅湿润凉冷寒暖急缓",
    ("nominal", "person"): "人民众友朋师徒兄弟姐妹父母子孙客",
    ("verbal", "person"): "说讲谈问答教学读写看听想思念爱恨",
    ("adjectival", "person"): "善良仁慈勇敢聪慧愚懒勤诚忠孝贤恶",
    ("nominal", "tool"): "刀剑斧锤锯犁铲锄针线绳车船桥门窗",
    ("verbal", "tool"): "砍劈切削锤锯磨缝织编造修补拆装拉",
    ("adjectival", "tool"): "利锋钝快尖锐坚硬软重轻巧精粗",
}

DOMAIN_GLOSS = {
    "plant": "植物", "animal": "动物", "water": "水", "person": "人", "tool": "器具",
}
POS_GLOSS = {"nominal": "名物", "verbal": "动作", "adjectival": "性状"}

# Encodings that appear in the published examples, with their fixed
# entry/sememe-count fields.
ANCHOR_ENTRIES = {
    "养": (1, 11), "植": (1, 4), "莳": (1, 3), "浇": (1, 4), "耕": (1, 2),
    "木": (1, 7), "树": (1, 4), "李": (1, 3), "禾": (1, 3),
}

TREE_DEFINITIONS = [
    ("树1_04_01", "nominal", "木本植物的通称"),
    ("树1_04_02", "verbal", "移植，栽培"),
    ("树1_04_03", "verbal", "树立，建立"),
    ("树1_04_04", "nominal", "姓氏"),
]


class Allocator:
    """Hands out unique H<X1>_<X2>_<X3> encodings per host character."""

    def __init__(self, rng):
        self.rng = rng
        self.used = {}  # host -> {x1: set(x3)}
        self.count = {}  # (host, x1) -> x2

    def reserve(self, host, x1, x2, x3):
        self.used.setdefault(host, {}).setdefault(x1, set()).add(x3)
        self.count[(host, x1)] = x2
        return f"{host}{x1}_{x2:02d}_{x3:02d}"

    def fresh(self, host):
        entries = self.used.setdefault(host, {})
        if host in ANCHOR_ENTRIES:
            x1, x2 = ANCHOR_ENTRIES[host]
            self.count[(host, x1)] = x2
            taken = entries.setdefault(x1, set())
            for x3 in range(1, x2 + 1):
                if x3 not in taken:
                    taken.add(x3)
                    return (host, x1, x3)
            x1 = 2
        else:
            x1 = 1
        while True:
            taken = entries.setdefault(x1, set())
            if len(taken) < 6:
                x3 = len(taken) + 1
                while x3 in taken:
                    x3 += 1
                taken.add(x3)
                return (host, x1, x3)
            x1 += 1

    def render(self, spec):
        host, x1, x3 = spec
        if (host, x1) not in self.count:
            n = len(self.used[host][x1])
            self.count[(host, x1)] = n + self.rng.randint(0, 2)
        x2 = max(self.count[(host, x1)], x3)
        self.count[(host, x1)] = x2
        return f"{host}{x1}_{x2:02d}_{x3:02d}"


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "data", "fixture")
    os.makedirs(out, exist_ok=True)
    rng = random.Random(20180205)
    alloc = Allocator(rng)

    morphemes = []  # (encoding-spec or literal, pos, definition)
    mcs = []  # dict(id_spec, pos, members, gloss, parent, domain)
    edges = [("ROOT", "-")]
    mc_domain = {}

    def lit(enc):
        return ("lit", enc)

    for enc, pos, definition in TREE_DEFINITIONS:
        host = enc[0]
        x1, x3 = 1, int(enc[-2:])
        alloc.reserve(host, x1, 4, x3)
    alloc.reserve("养", 1, 11, 2)
    alloc.reserve("植", 1, 4, 1)
    alloc.reserve("莳", 1, 3, 1)
    alloc.reserve("浇", 1, 4, 3)
    alloc.reserve("耕", 1, 2, 1)
    alloc.reserve("木", 1, 7, 1)
    alloc.reserve("李", 1, 3, 1)
    alloc.reserve("禾", 1, 3, 2)

    anchor_members = {
        ("verbal", "plant", 0, 0): [lit("养1_11_02"), lit("植1_04_01"), lit("莳1_03_01"), lit("树1_04_02")],
        ("verbal", "plant", 0, 1): [lit("浇1_04_03")],
        ("verbal", "plant", 0, 2): [lit("耕1_02_01")],
        ("nominal", "plant", 0, 0): [lit("木1_07_01"), lit("树1_04_01")],
        ("nominal", "plant", 0, 1): [lit("李1_03_01")],
        ("nominal", "plant", 0, 2): [lit("禾1_03_02")],
    }
    literal_defs = {
        "养1_11_02": "种植，栽培", "植1_04_01": "栽种", "莳1_03_01": "移植，栽种",
        "树1_04_02": "移植，栽培", "浇1_04_03": "灌溉", "耕1_02_01": "用犁翻松土地",
        "木1_07_01": "树木", "树1_04_01": "木本植物的通称", "李1_03_01": "李子树，果木",
        "禾1_03_02": "谷类作物的总称",
    }

    def new_mc(pos, domain, parent, key, gloss, members=None):
        if members is None:
            pool = POOLS.get((pos, domain))
            size = rng.choice([1, 2, 2, 3, 3, 4])
            hosts = rng.sample(pool, size)
            members = [alloc.fresh(h) for h in hosts]
        mcs.append(dict(pos=pos, members=members, gloss=gloss, parent=parent, domain=domain,
                        key=key))

    for pos in ["nominal", "verbal", "adjectival"]:
        edges.append((f"cat:{pos}", "ROOT"))
        for domain in DOMAINS:
            dnode = f"cat:{pos}.{domain}"
            edges.append((dnode, f"cat:{pos}"))
            for g in range(2):
                n3 = f"{dnode}.g{g}"
                n4 = f"{n3}.a"
                n5 = f"{n4}.b"
                edges += [(n3, dnode), (n4, n3), (n5, n4)]
                for i in range(GROUP_SIZE):
                    gloss = f"{DOMAIN_GLOSS[domain]}{POS_GLOSS[pos]}{g}{i}"
                    new_mc(pos, domain, n5, (pos, domain, g, i), gloss,
                           anchor_members.get((pos, domain, g, i)))
            shallow = f"{dnode}.s"
            edges.append((shallow, dnode))
            for i in range(2):
                new_mc(pos, domain, shallow, (pos, domain, "s", i),
                       f"{DOMAIN_GLOSS[domain]}{POS_GLOSS[pos]}s{i}")

    # Function morphemes, one small tree each.
    def function_mcs(pos, groups):
        edges.append((f"cat:{pos}", "ROOT"))
        made = []
        for gname, hostsets in groups.items():
            node = f"cat:{pos}.{gname}"
            edges.append((node, f"cat:{pos}"))
            for hosts in hostsets:
                members = [alloc.fresh(h) for h in hosts]
                new_mc(pos, None, node, (pos, gname, hosts), f"{gname}:{hosts}", members)
                made.append(mcs[-1])
        return made

    suffixes = function_mcs("affix", {"suffix": ["子", "头", "儿"], "prefix": ["老", "阿"]})
    adverbs = function_mcs("adverbial", {"manner": ["广", "常", "久"]})
    numerals = function_mcs("numeral", {"cardinal": ["一", "三", "百"]})
    classifiers = function_mcs("classifier", {"unit": ["张", "只", "次", "天", "匹", "头"]})
    preps = function_mcs("prepositional", {"relation": ["从", "在", "向"]})
    # Noncompound words: one MC whose members carry the two syllables.
    edges.append(("cat:nominal.loan", "cat:nominal"))
    noncompound = []
    for a, b, gloss in [("葡", "萄", "葡萄"), ("蝴", "蝶", "蝴蝶"), ("玻", "璃", "玻璃"),
                        ("骆", "驼", "骆驼")]:
        new_mc("nominal", None, "cat:nominal.loan", ("loan", a + b), gloss,
               [alloc.fresh(a), alloc.fresh(b)])
        noncompound.append(mcs[-1])
    # Remaining senses of 树 that the examples list.
    edges.append(("cat:verbal.tool.set", "cat:verbal.tool"))
    new_mc("verbal", "tool", "cat:verbal.tool.set", ("verbal", "set-up"), "树立，建立",
           [lit("树1_04_03"), alloc.fresh("建")])
    edges.append(("cat:nominal.person.name", "cat:nominal.person"))
    new_mc("nominal", "person", "cat:nominal.person.name", ("nominal", "surname"), "姓氏",
           [lit("树1_04_04"), alloc.fresh("姓")])
    literal_defs["树1_04_03"] = "树立，建立"
    literal_defs["树1_04_04"] = "姓氏"

    # Render encodings and ids.
    def render(spec):
        return spec[1] if spec[0] == "lit" else alloc.render(spec)

    for mc in mcs:
        mc["members"] = [render(s) for s in mc["members"]]
        mc["id"] = mc["members"][0]
        mc["hosts"] = [m[0] for m in mc["members"]]
        edges.append((mc["id"], mc["parent"]))
        for m in mc["members"]:
            morphemes.append((m, mc["pos"], literal_defs.get(m, mc["gloss"])))

    def pick(pos, domain):
        return [mc for mc in mcs if mc["pos"] == pos and mc["domain"] == domain]

    words = []
    surfaces = set()

    def add_word(pos, pattern, a, b, same_char=False):
        for _ in range(20):
            ca = rng.choice(a["hosts"])
            cb = ca if same_char else rng.choice(b["hosts"])
            if same_char and cb not in b["hosts"]:
                return False
            surface = ca + cb
            if surface not in surfaces:
                surfaces.add(surface)
                words.append((surface, pos, pattern, a["id"], b["id"]))
                return True
        return False

    words.append(("植树", "verbal", "Verb-Object", "养1_11_02", "木1_07_01"))
    surfaces.add("植树")

    for domain in DOMAINS:
        N, V, A = pick("nominal", domain), pick("verbal", domain), pick("adjectival", domain)
        for _ in range(14 * WORD_SCALE):
            add_word("verbal", "Verb-Object", rng.choice(V), rng.choice(N))
        for _ in range(12 * WORD_SCALE):
            add_word("nominal", "Modifier-Head", rng.choice(A), rng.choice(N))
        for _ in range(5 * WORD_SCALE):
            add_word("nominal", "Modifier-Head", rng.choice(N), rng.choice(N))
        for _ in range(4 * WORD_SCALE):
            x = rng.choice(N)
            sib = [m for m in N if m["parent"] == x["parent"]]
            add_word("nominal", "Parallel", x, rng.choice(sib))
        for _ in range(3 * WORD_SCALE):
            x = rng.choice(V)
            sib = [m for m in V if m["parent"] == x["parent"]]
            add_word("verbal", "Parallel", x, rng.choice(sib))
        for _ in range(3 * WORD_SCALE):
            x = rng.choice(A)
            sib = [m for m in A if m["parent"] == x["parent"]]
            add_word("adjectival", "Parallel", x, rng.choice(sib))
        for _ in range(4 * WORD_SCALE):
            add_word("adjectival", "Subject-Predicate", rng.choice(N), rng.choice(A))
        for _ in range(4 * WORD_SCALE):
            add_word("verbal", "Verb-Complement", rng.choice(V), rng.choice(A))
        for _ in range(3 * WORD_SCALE):
            add_word("verbal", "Verb-Verb", rng.choice(V), rng.choice(V))
        for _ in range(3 * WORD_SCALE):
            add_word("verbal", "Adverb-Verb", rng.choice(adverbs), rng.choice(V))
        for _ in range(3 * WORD_SCALE):
            add_word("nominal", "Suffixation", rng.choice(N), rng.choice(suffixes[:3]))
        for _ in range(2 * WORD_SCALE):
            add_word("nominal", "Prefixation", rng.choice(suffixes[3:]), rng.choice(N))
        for _ in range(2 * WORD_SCALE):
            x = rng.choice(N)
            add_word("nominal", "Overlapping", x, x, same_char=True)
        for _ in range(2 * WORD_SCALE):
            add_word("prepositional", "Preposition-Object", rng.choice(preps), rng.choice(N))
        for _ in range(2 * WORD_SCALE):
            add_word("nominal", "Noun-Classifier", rng.choice(N), rng.choice(classifiers))
    for _ in range(5 * WORD_SCALE):
        add_word("numeral", "Quantifier", rng.choice(numerals), rng.choice(classifiers))
    for _ in range(3):
        add_word("classifier", "Classifier-Classifier", rng.choice(classifiers),
                 rng.choice(classifiers))
    # Every MC must seed at least one word.
    used = {w[3] for w in words} | {w[4] for w in words}
    for mc in mcs:
        if mc["id"] in used or mc in noncompound:
            continue
        d = mc["domain"]
        if mc["pos"] == "nominal" and d:
            ok = add_word("nominal", "Modifier-Head", rng.choice(pick("adjectival", d)), mc)
        elif mc["pos"] == "verbal" and d:
            ok = add_word("verbal", "Verb-Object", mc, rng.choice(pick("nominal", d)))
        elif mc["pos"] == "adjectival":
            ok = add_word("nominal", "Modifier-Head", mc, rng.choice(pick("nominal", d)))
        elif mc in suffixes[:3]:
            ok = add_word("nominal", "Suffixation", rng.choice(pick("nominal", "tool")), mc)
        elif mc in suffixes[3:]:
            ok = add_word("nominal", "Prefixation", mc, rng.choice(pick("nominal", "animal")))
        elif mc in adverbs:
            ok = add_word("verbal", "Adverb-Verb", mc, rng.choice(pick("verbal", "person")))
        elif mc in numerals:
            ok = add_word("numeral", "Quantifier", mc, rng.choice(classifiers))
        elif mc in classifiers:
            ok = add_word("nominal", "Noun-Classifier", rng.choice(pick("nominal", "animal")), mc)
        elif mc in preps:
            ok = add_word("prepositional", "Preposition-Object", mc,
                          rng.choice(pick("nominal", "water")))
        else:
            ok = False
        if not ok:
            raise SystemExit(f"could not cover MC {mc['id']}")

    for mc in noncompound:
        surface = mc["hosts"][0] + mc["hosts"][1]
        surfaces.add(surface)
        words.append((surface, "nominal", "Noncompound", mc["id"], mc["id"]))

    with open(os.path.join(out, "morphemes.tsv"), "w", encoding="utf-8") as f:
        f.write("# encoding\tpos\tdefinition\n")
        for enc, pos, d in morphemes:
            f.write(f"{enc}\t{pos}\t{d}\n")
    with open(os.path.join(out, "mcs.tsv"), "w", encoding="utf-8") as f:
        f.write("# mc_id\tpos\tmembers\tgloss\n")
        for mc in mcs:
            f.write(f"{mc['id']}\t{mc['pos']}\t{','.join(mc['members'])}\t{mc['gloss']}\n")
    with open(os.path.join(out, "words.tsv"), "w", encoding="utf-8") as f:
        f.write("# surface\tpos\tpattern\tfirst_mc\tsecond_mc\n")
        for w in words:
            f.write("\t".join(w) + "\n")
    with open(os.path.join(out, "hierarchy.tsv"), "w", encoding="utf-8") as f:
        f.write("# child\tparent\n")
        for c, p in edges:
            f.write(f"{c}\t{p}\n")

    # Word-pair dataset with graded gold scores: pairs that share MCs or
    # tree regions score high, unrelated pairs low, plus rater noise.
    parent = dict(edges)

    def path(n):
        p = []
        while n != "-":
            p.append(n)
            n = parent[n]
        return p

    def sim(a, b):
        pa, pb = set(path(a)), set(path(b))
        return 2 * len(pa & pb) / (len(pa) + len(pb))

    pairs = []
    seen = set()
    content = [w for w in words if w[2] in ("Verb-Object", "Modifier-Head", "Parallel",
                                            "Subject-Predicate", "Verb-Complement")]
    while len(pairs) < 160:
        a, b = rng.sample(content, 2)
        key = tuple(sorted((a[0], b[0])))
        if key in seen:
            continue
        seen.add(key)
        g = 10 * (0.5 * sim(a[3], b[3]) + 0.5 * sim(a[4], b[4])) + rng.gauss(0, 0.8)
        pairs.append((a[0], b[0], round(min(10, max(0, g)), 2)))
    # A few pairs with words outside the lexicon exercise skip handling.
    pairs += [("电脑", "木马", 3.1), ("手机", "电话", 8.2)]
    with open(os.path.join(out, "pairs.tsv"), "w", encoding="utf-8") as f:
        f.write("# word1\tword2\tgold\n")
        for a, b, g in pairs:
            f.write(f"{a}\t{b}\t{g}\n")

    # Tokenized running text for the corpus-trained baseline: each line
    # mostly draws words from one domain.
    by_domain = {d: [] for d in DOMAINS}
    for w in words:
        for mc in mcs:
            if mc["id"] == w[3] and mc["domain"] in by_domain:
                by_domain[mc["domain"]].append(w[0])
    fillers = ["的", "了", "在", "和", "是", "有", "很", "也"]
    all_words = [w[0] for w in words]
    with open(os.path.join(out, "text.txt"), "w", encoding="utf-8") as f:
        for _ in range(6000):
            d = rng.choice(DOMAINS)
            toks = []
            for _ in range(rng.randint(6, 12)):
                r = rng.random()
                if r < 0.6:
                    toks.append(rng.choice(by_domain[d]))
                elif r < 0.8:
                    toks.append(rng.choice(fillers))
                else:
                    toks.append(rng.choice(all_words))
            f.write(" ".join(toks) + "\n")

    print(f"{len(morphemes)} morphemes, {len(mcs)} MCs, {len(words)} words, "
          f"{len(edges)} hierarchy rows, {len(pairs)} pairs")


if __name__ == "__main__":
    main()
