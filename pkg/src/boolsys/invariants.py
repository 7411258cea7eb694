from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Union

from .boolean_core import (
    BoolElem,
    DefinableIdeal,
    FiniteAtoms,
    Height,
    IdealDesc,
    PrincipalIdeal,
    check_ideal,
    definable_ideal,
    diff,
    ideal_contains,
    ideal_key,
    ideal_leq,
    join,
    join_all,
    leq,
    meet,
    principal_ideal,
    quotient,
    whole_ideal,
    zero_ideal,
)
from .dynamics import (
    AtomAction,
    BooleanDynamicalSystem,
    Shift,
    TailAction,
    Word,
    apply_word,
    is_regular,
    out_labels,
)
from .errors import (
    ClosureBoundExceeded,
    EmptyArgument,
    NotHereditary,
    SearchBoundExceeded,
    Unsupported,
)
from .limits import resolve_bound


@dataclass(frozen=True)
class HSReport:
    ideal: IdealDesc
    hereditary: bool
    saturated: bool


@dataclass(frozen=True)
class CycleWitness:
    word: Word
    base: BoolElem
    trace: tuple


@dataclass(frozen=True)
class SimplicityReport:
    simple: bool
    lb: bool
    hs_trivial: bool
    witness: Union[CycleWitness, IdealDesc, None] = None


@dataclass(frozen=True)
class Verified:
    witness: BoolElem


@dataclass(frozen=True)
class Counterexample:
    word: Word


@dataclass(frozen=True)
class Inconclusive:
    bound: int


# -- helpers shared by the cofinite paths ---------------------------------


def _reach(sys: BooleanDynamicalSystem) -> int:
    return sys.window() + sys.max_shift()


def _default_bound(sys: BooleanDynamicalSystem) -> int:
    return max(10 * (sys.window() + sys.max_shift()), 10)


def _probe_radius(sys: BooleanDynamicalSystem, support: BoolElem) -> int:
    # beyond this radius every point behaves like the tail and misses support's exceptions
    return _reach(sys) + max((abs(m) for m in support.members), default=0) + 1


def _point_images(sys: BooleanDynamicalSystem, p) -> list[BoolElem]:
    return [sys.atom_image(l, p) for l in sys.labels]


def _point_regular(sys: BooleanDynamicalSystem, p) -> bool:
    return any(not img.is_empty for img in _point_images(sys, p))


def _outside_points(sys: BooleanDynamicalSystem, support: BoolElem) -> list:
    """Points not under ``support`` that can matter for saturation."""
    if sys.is_finite:
        return [a for a in sys.backend.atoms if a not in support.members]
    if support.cofinite:
        return support.sorted_members()
    radius = _probe_radius(sys, support)
    return [i for i in sys.backend.band(radius) if i not in support.members]


def _support(ideal: IdealDesc) -> BoolElem:
    return ideal.generator if isinstance(ideal, PrincipalIdeal) else ideal.support


# -- hereditary / saturated -----------------------------------------------


def is_hereditary(sys: BooleanDynamicalSystem, ideal: IdealDesc) -> bool:
    return _heredity_witness(sys, ideal) is None


def _heredity_witness(sys: BooleanDynamicalSystem, ideal: IdealDesc):
    check_ideal(sys.backend, ideal)
    support = _support(ideal)
    finite_only = isinstance(ideal, DefinableIdeal) and ideal.height is Height.FINITE_ONLY
    if not finite_only:
        for label in sys.labels:
            image = sys.apply(label, support)
            if not leq(image, support):
                return support, label, image
        return None
    # finite-only ideals: every point of the support must map into finite subsets of it
    radius = _probe_radius(sys, support)
    for i in sys.backend.band(radius):
        if not support.has_point(i):
            continue
        for label in sys.labels:
            image = sys.atom_image(label, i)
            if not ideal_contains(ideal, image):
                return sys.backend.point(i), label, image
    return None


def is_saturated(sys: BooleanDynamicalSystem, ideal: IdealDesc) -> bool:
    """Checked on atoms: a regular atom outside the ideal must send some label outside it."""
    check_ideal(sys.backend, ideal)
    support = _support(ideal)
    for p in _outside_points(sys, support):
        images = _point_images(sys, p)
        if any(not i.is_empty for i in images) and all(ideal_contains(ideal, i) for i in images):
            return False
    return True


def hs_report(sys: BooleanDynamicalSystem, ideal: IdealDesc) -> HSReport:
    return HSReport(ideal, is_hereditary(sys, ideal), is_saturated(sys, ideal))


# -- closures -------------------------------------------------------------


def hereditary_closure(sys: BooleanDynamicalSystem, seed: BoolElem, bound: int | None = None) -> BoolElem:
    """Generator of the smallest hereditary ideal containing ``seed``."""
    limit = None if sys.is_finite else resolve_bound(bound, _default_bound(sys))
    current, steps = seed, 0
    while True:
        grown = join_all(sys.backend, [current] + [sys.apply(l, current) for l in sys.labels])
        if grown == current:
            return current
        current = grown
        steps += 1
        if limit is not None and steps > limit and not current.cofinite:
            raise ClosureBoundExceeded(definable_ideal(current), limit)


def _saturate_once(sys: BooleanDynamicalSystem, support: BoolElem, height: Height = Height.FULL) -> BoolElem:
    ideal = principal_ideal(support) if height is Height.FULL else definable_ideal(support, height)
    added = [
        p
        for p in _outside_points(sys, support)
        if _point_regular(sys, p) and all(ideal_contains(ideal, i) for i in _point_images(sys, p))
    ]
    if not added:
        return support
    return join(support, join_all(sys.backend, (sys.point_elem(p) for p in added)))


def _grow(sys: BooleanDynamicalSystem, support: BoolElem) -> BoolElem:
    grown = join_all(sys.backend, [support] + [sys.apply(l, support) for l in sys.labels])
    return _saturate_once(sys, grown)


def hs_closure(sys: BooleanDynamicalSystem, seed: BoolElem, bound: int | None = None) -> IdealDesc:
    """Smallest hereditary and saturated ideal containing ``seed``.

    Images and saturation are added together until nothing changes.  On the
    cofinite backend a seed whose orbit never becomes cofinite is tracked
    point-by-point on a band; the tails of the band decide whether the
    closure is the ideal of all finite subsets of a cofinite set.
    """
    if seed.backend != sys.backend:
        raise EmptyArgument("seed belongs to another backend")
    current = seed
    if sys.is_finite:
        while (grown := _grow(sys, current)) != current:
            current = grown
        return PrincipalIdeal(current)

    limit = resolve_bound(bound, _default_bound(sys))
    for _ in range(limit):
        grown = _grow(sys, current)
        if grown == current:
            return definable_ideal(current)
        current = grown
        if current.cofinite:
            # cofinite supports only lose exceptions, so this terminates
            while (grown := _grow(sys, current)) != current:
                current = grown
            return definable_ideal(current)
    return _band_closure(sys, seed, current, limit)


def _band_closure(sys: BooleanDynamicalSystem, seed: BoolElem, partial: BoolElem, limit: int) -> IdealDesc:
    backend = sys.backend
    reach = _reach(sys)
    radius = max(limit, 4 * reach + 4)
    band = backend.band(radius)
    inside = set(seed.members)
    changed = True
    while changed:
        changed = False
        for p in sorted(inside):
            for label in sys.labels:
                image = sys.atom_image(label, p)
                if image.cofinite:
                    return hs_closure(sys, join(backend.finite(inside), image), limit)
                fresh = {i for i in image.members if abs(i) <= radius} - inside
                if fresh:
                    inside |= fresh
                    changed = True
        for q in band:
            if q in inside or not _point_regular(sys, q):
                continue
            images = _point_images(sys, q)
            if all(not i.cofinite and i.members <= inside for i in images):
                inside.add(q)
                changed = True

    half = radius // 2
    sides = [range(reach + 1, half + 1)]
    if backend.universe == "Z":
        sides.append(range(-half, -reach))
    full = [all(i in inside for i in side) for side in sides]
    empty = [not any(i in inside for i in side) for side in sides]
    if all(full):
        exceptions = [i for i in backend.band(half) if i not in inside]
        candidate = definable_ideal(backend.cofinite(exceptions), Height.FINITE_ONLY)
    elif all(empty):
        candidate = definable_ideal(backend.finite(i for i in inside if abs(i) <= half))
    else:
        raise ClosureBoundExceeded(definable_ideal(partial), limit)
    if (
        ideal_contains(candidate, seed)
        and is_hereditary(sys, candidate)
        and is_saturated(sys, candidate)
    ):
        return candidate
    raise ClosureBoundExceeded(definable_ideal(partial), limit)


# -- lattice --------------------------------------------------------------


def _ideal_meet(sys, first: IdealDesc, second: IdealDesc) -> IdealDesc:
    if sys.is_finite:
        return PrincipalIdeal(meet(first.generator, second.generator))
    height = Height.FULL
    if Height.FINITE_ONLY in (first.height, second.height):
        height = Height.FINITE_ONLY
    return definable_ideal(meet(first.support, second.support), height)


def _ideal_join(sys, first: IdealDesc, second: IdealDesc, bound: int | None) -> IdealDesc:
    if sys.is_finite:
        return hs_closure(sys, join(first.generator, second.generator))
    support = join(first.support, second.support)
    full_parts = [i for i in (first, second) if i.height is Height.FULL and i.support.cofinite]
    if full_parts or not support.cofinite:
        return hs_closure(sys, support, bound)
    current = support
    while (grown := _saturate_once(sys, current, Height.FINITE_ONLY)) != current:
        current = grown
    return definable_ideal(current, Height.FINITE_ONLY)


def hs_lattice(sys: BooleanDynamicalSystem, bound: int | None = None) -> tuple[list[IdealDesc], bool]:
    """All hereditary and saturated ideals, plus a completeness flag.

    The finite backend tests every principal ideal, so the list is always
    complete.  The cofinite backend closes the closures of window points,
    tail representatives and the top under joins and meets; the flag is
    False when tail representatives on different sides disagree.
    """
    if sys.is_finite:
        found = [
            PrincipalIdeal(g)
            for g in sys.backend.elements()
            if is_hereditary(sys, PrincipalIdeal(g)) and is_saturated(sys, PrincipalIdeal(g))
        ]
        return sorted(found, key=ideal_key), True

    backend = sys.backend
    reach = _reach(sys)
    seeds = [backend.point(i) for i in backend.band(reach)]
    tail_points = [reach + 1, 2 * reach + 3]
    if backend.universe == "Z":
        tail_points += [-(reach + 1), -(2 * reach + 3)]
    tail_closures = [hs_closure(sys, backend.point(i), bound) for i in tail_points]
    complete = all(c == tail_closures[0] for c in tail_closures)

    found = {zero_ideal(backend), whole_ideal(backend)}
    found.update(hs_closure(sys, s, bound) for s in seeds)
    found.update(tail_closures)
    while True:
        extra = set()
        for first, second in combinations(sorted(found, key=ideal_key), 2):
            extra.add(_ideal_meet(sys, first, second))
            extra.add(_ideal_join(sys, first, second, bound))
        if extra <= found:
            break
        found |= extra
    return sorted(found, key=ideal_key), complete


def enumerate_hs_ideals(sys: BooleanDynamicalSystem, bound: int | None = None) -> list[IdealDesc]:
    return hs_lattice(sys, bound)[0]


def nontrivial_ideals(sys: BooleanDynamicalSystem, bound: int | None = None) -> list[IdealDesc]:
    zero, whole = zero_ideal(sys.backend), whole_ideal(sys.backend)
    return [i for i in enumerate_hs_ideals(sys, bound) if i not in (zero, whole)]


def is_cofinal(sys: BooleanDynamicalSystem, bound: int | None = None) -> bool:
    lattice, complete = hs_lattice(sys, bound)
    if len(lattice) > 2:
        return False
    if not complete:
        raise Unsupported("tail closures disagree; the ideal lattice may be incomplete")
    return True


def check_condition2(sys: BooleanDynamicalSystem, a: BoolElem, b: BoolElem, depth: int):
    """Search for C with B - C in H(A) whose every label path eventually enters H(A).

    C = B - H(A) is the smallest admissible choice, and both requirements only
    get harder for larger C, so it is the only candidate tested.
    """
    if a.is_empty or b.is_empty:
        raise EmptyArgument("condition (2) needs nonempty A and B")
    generator = hereditary_closure(sys, a)
    candidate = diff(b, generator)
    if candidate.is_empty:
        return Verified(candidate)
    if not is_regular(sys, candidate):
        return Counterexample(())

    exhausted = False

    def explore(node: BoolElem, word: Word, on_path: set):
        nonlocal exhausted
        for label in sys.labels:
            image = sys.apply(label, node)
            if image.is_empty or leq(image, generator):
                continue
            step = word + (label,)
            if image in on_path:
                return step
            if len(step) >= depth:
                exhausted = True
                continue
            found = explore(image, step, on_path | {image})
            if found is not None:
                return found
        return None

    bad = explore(candidate, (), {candidate})
    if bad is not None:
        return Counterexample(bad)
    if exhausted:
        return Inconclusive(depth)
    return Verified(candidate)


# -- cycles ---------------------------------------------------------------


def _forced_path(sys: BooleanDynamicalSystem, start: BoolElem, limit: int | None):
    """Follow the unique outgoing label while it exists; return (word, trace) on return to start."""
    current, word, trace, seen = start, (), [start], {start}
    reach = _reach(sys)
    while True:
        if not is_regular(sys, current):
            return None
        labels = out_labels(sys, current)
        if len(labels) != 1:
            return None
        label = labels[0]
        action = sys.actions[label]
        if (
            isinstance(action, TailAction)
            and isinstance(action.tail, Shift)
            and action.tail.offset != 0
            and not current.cofinite
            and all(abs(i) > reach and (i > 0) == (action.tail.offset > 0) for i in current.members)
        ):
            return None  # drifting outward forever
        current = sys.apply(label, current)
        word = word + (label,)
        if current == start:
            return word, tuple(trace)
        if current in seen:
            return None
        if limit is not None and len(word) > limit:
            raise SearchBoundExceeded(limit)
        seen.add(current)
        trace.append(current)


def find_cycle_no_exit(sys: BooleanDynamicalSystem, bound: int | None = None) -> CycleWitness | None:
    if sys.is_finite:
        starts, limit = [sys.point_elem(a) for a in sys.backend.atoms], None
    else:
        reach = _reach(sys)
        points = sys.backend.band(reach) + [reach + 1]
        if sys.backend.universe == "Z":
            points.append(-(reach + 1))
        starts = [sys.backend.point(i) for i in points]
        limit = resolve_bound(bound, _default_bound(sys))
    for start in starts:
        found = _forced_path(sys, start, limit)
        if found is not None:
            word, trace = found
            return CycleWitness(word, start, trace)
    return None


def condition_LB(sys: BooleanDynamicalSystem, bound: int | None = None) -> bool:
    return find_cycle_no_exit(sys, bound) is None


def is_simple(sys: BooleanDynamicalSystem, bound: int | None = None) -> SimplicityReport:
    cycle = find_cycle_no_exit(sys, bound)
    lattice, complete = hs_lattice(sys, bound)
    hs_trivial = len(lattice) <= 2
    if hs_trivial and not complete:
        raise Unsupported("tail closures disagree; the ideal lattice may be incomplete")
    lb = cycle is None
    witness = None
    if not lb:
        witness = cycle
    elif not hs_trivial:
        zero, whole = zero_ideal(sys.backend), whole_ideal(sys.backend)
        witness = next(i for i in lattice if i not in (zero, whole))
    return SimplicityReport(lb and hs_trivial, lb, hs_trivial, witness)


# -- quotient systems -----------------------------------------------------


def quotient_system(sys: BooleanDynamicalSystem, ideal: IdealDesc) -> BooleanDynamicalSystem:
    """The system induced on B/I; the ideal must be hereditary."""
    check_ideal(sys.backend, ideal)
    bad = _heredity_witness(sys, ideal)
    if bad is not None:
        raise NotHereditary(*bad)
    q = quotient(sys.backend, ideal)
    if q.backend == sys.backend:
        return sys
    new = q.backend
    actions = {}
    for label in sys.labels:
        images = {}
        for atom in new.atoms:
            image = q.class_of(sys.apply(label, q.representative(atom)))
            if not image.is_empty:
                images[atom] = image
        actions[label] = AtomAction(new, images)
    return BooleanDynamicalSystem(new, actions)
