"""Deterministic random corpus of small finite systems."""
from __future__ import annotations

import random

from boolsys.dynamics import finite_system

ATOM_NAMES = "pqrs"
LABEL_NAMES = "abc"


def random_system(rng: random.Random, atoms: int, labels: int):
    names = list(ATOM_NAMES[:atoms])
    actions = {}
    for label in LABEL_NAMES[:labels]:
        table: dict[str, list[str]] = {}
        # each target atom has at most one source, so images stay disjoint
        for target in names:
            source = rng.choice(names + [None, None])
            if source is not None:
                table.setdefault(source, []).append(target)
        actions[label] = table
    return finite_system(names, actions)


def corpus(count: int, max_atoms: int, max_labels: int = 3, seed: int = 20240611):
    rng = random.Random(seed)
    return [
        random_system(rng, rng.randint(1, max_atoms), rng.randint(1, max_labels))
        for _ in range(count)
    ]


def words_upto(labels, depth: int):
    out = [()]
    frontier = [()]
    for _ in range(depth):
        frontier = [w + (l,) for w in frontier for l in labels]
        out.extend(frontier)
    return out


def cores(sys, limit: int | None = None):
    """Nonempty cores: every element on the finite backend, small window sets otherwise."""
    if sys.is_finite:
        return [e for e in sys.backend.elements() if not e.is_empty]
    b = sys.backend
    radius = limit if limit is not None else sys.window() + sys.max_shift() + 1
    band = b.band(radius)
    picks = [b.point(i) for i in band] + [b.finite(band[:2]), b.finite(band[-2:]), b.top(), b.cofinite([0])]
    return picks


def idempotents_upto(sys, depth: int):
    from boolsys.semigroup import ZERO, conjugate_projection

    found = {conjugate_projection(sys, w, c) for w in words_upto(sys.labels, depth) for c in cores(sys)}
    found.discard(ZERO)
    return sorted(found, key=repr)


def elements_upto(sys, depth: int):
    from boolsys.semigroup import ZERO, triple

    ws = words_upto(sys.labels, depth)
    found = {triple(sys, a, c, b) for a in ws for b in ws for c in cores(sys)}
    found.discard(ZERO)
    return sorted(found, key=repr)
