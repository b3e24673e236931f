"""Random closure instances shared by the property tests and the
acceptance gate."""

import random

from twopres.congruence import RelationSet
from twopres.terms import GeneratingData, enumerate_free


def random_data(rng):
    X = GeneratingData()
    objs = [f"o{i}" for i in range(rng.randint(1, 3))]
    for o in objs:
        X.add_object(o)
    arrows = []
    for i in range(rng.randint(1, 4)):
        arrows.append(X.add_arrow(f"x{i}", rng.choice(objs), rng.choice(objs)))
    for i in range(rng.randint(0, 3)):
        a = rng.choice(arrows)
        par = [b for b in arrows if b.src(0) is a.src(0) and b.tgt(0) is a.tgt(0)]
        X.add_cell(f"c{i}", a, rng.choice(par))
    return X


def random_instance(seed, max_terms=200, max_pairs=20):
    """(universe, relations) with at most max_terms terms and max_pairs pairs."""
    rng = random.Random(seed)
    X = random_data(rng)
    pool = enumerate_free(X, rng.randint(2, 4), 2)
    keep = rng.uniform(0.4, 1.0)
    universe = [t for t in pool if rng.random() < keep][:max_terms]
    if len(universe) < 2:
        universe = pool[:max_terms]
    C = RelationSet()
    by_grade = {}
    for t in universe:
        by_grade.setdefault(t.grade, []).append(t)
    for _ in range(rng.randint(0, max_pairs)):
        g = rng.choice(sorted(by_grade))
        ts = by_grade[g]
        C.add(rng.choice(ts), rng.choice(ts))
    return universe, C


def fixture_fragments(data_bound=3, action_bound=2):
    """(label, fragment) for every presentation and fragment in the corpus."""
    from twopres import presio
    from twopres.action import build_quotient
    from twopres.bicat import build_2cat
    from twopres.fixtures import names, path

    for name in names(".2pres"):
        doc = presio.read(path(name))
        for d in doc.names("data"):
            rels = [s.name for s in doc.sections if s.kind == "relations" and s.refs["on"] == d]
            R = doc.relations(rels[0]) if rels else None
            yield f"{name}:{d}", build_2cat(doc.data(d), R, data_bound)
        for a in doc.names("action"):
            yield f"{name}:{a}", build_quotient(doc.action(a), action_bound)
    for name in names(".2frag"):
        yield name, presio.load_fragment(presio.read(path(name)))
