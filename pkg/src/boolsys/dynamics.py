"""Actions, words and regularity data of a Boolean dynamical system.

Words are tuples of labels applied left to right: ``apply_word(sys, ("a", "b"), A)``
is ``theta_b(theta_a(A))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Union

from .boolean_core import (
    BoolElem,
    FiniteAtoms,
    FiniteCofinite,
    diff,
    join_all,
    meet,
)
from .errors import BackendMismatch, EmptyArgument, InputError

Word = tuple


# -- action descriptions ----------------------------------------------------


@dataclass(frozen=True)
class Shift:
    offset: int


@dataclass(frozen=True)
class Kill:
    pass


KILL = Kill()
TailRule = Union[Shift, Kill]


class AtomAction:
    """An action on a finite atom backend, given by the image of each atom."""

    def __init__(self, backend: FiniteAtoms, images: Mapping[str, BoolElem]):
        self.backend = backend
        self.images = {str(a): img for a, img in images.items() if not img.is_empty}

    def point_image(self, atom: str) -> BoolElem:
        return self.images.get(atom, self.backend.bottom())

    def apply(self, a: BoolElem) -> BoolElem:
        return join_all(self.backend, (self.point_image(m) for m in a.members))

    def canonical(self):
        return {a: img.sorted_members() for a, img in sorted(self.images.items())}

    def __eq__(self, other):
        return isinstance(other, AtomAction) and self.canonical() == other.canonical()

    def __repr__(self):
        return f"AtomAction({self.canonical()})"


class TailAction:
    """An action on the finite/cofinite backend.

    ``exceptions`` lists explicit point images (possibly empty) for points with
    |i| <= window; every other point follows ``tail``.
    """

    def __init__(self, backend: FiniteCofinite, exceptions: Mapping[int, BoolElem], tail: TailRule, window: int):
        if window < 0:
            raise InputError("window must be non-negative")
        self.backend = backend
        self.tail = tail
        self.window = int(window)
        self.exceptions: dict[int, BoolElem] = {}
        for i, img in exceptions.items():
            # entries that agree with the tail rule are dropped to keep one canonical form
            if img != self._rule_image(int(i)):
                self.exceptions[int(i)] = img

    def _rule_image(self, i: int) -> BoolElem:
        if isinstance(self.tail, Kill) or not self.backend.in_universe(i + self.tail.offset):
            return self.backend.bottom()
        return self.backend.point(i + self.tail.offset)

    def in_window(self, i: int) -> bool:
        return abs(i) <= self.window

    def point_image(self, i: int) -> BoolElem:
        if i in self.exceptions:
            return self.exceptions[i]
        return self._rule_image(i)

    def tail_image(self) -> BoolElem:
        """Image of the set of all points without an explicit image."""
        if isinstance(self.tail, Kill):
            return self.backend.bottom()
        t = self.tail.offset
        missed = {k + t for k in self.exceptions}
        if self.backend.universe == "N":
            missed |= set(range(0, t))
        return self.backend.cofinite(j for j in missed if self.backend.in_universe(j))

    def top_image(self) -> BoolElem:
        return join_all(self.backend, list(self.exceptions.values()) + [self.tail_image()])

    def apply(self, a: BoolElem) -> BoolElem:
        if not a.cofinite:
            return join_all(self.backend, (self.point_image(i) for i in a.members))
        removed = join_all(self.backend, (self.point_image(i) for i in a.members))
        return diff(self.top_image(), removed)

    def canonical(self):
        tail = "kill" if isinstance(self.tail, Kill) else {"shift": self.tail.offset}
        return {
            "exceptions": {str(i): elem_payload(img) for i, img in sorted(self.exceptions.items())},
            "tail": tail,
            "window": self.window,
        }

    def __eq__(self, other):
        return isinstance(other, TailAction) and self.canonical() == other.canonical()

    def __repr__(self):
        return f"TailAction({self.canonical()})"


Action = Union[AtomAction, TailAction]


def elem_payload(a: BoolElem):
    """JSON-friendly form of an element."""
    if isinstance(a.backend, FiniteAtoms):
        return a.sorted_members()
    if a.cofinite:
        return {"cofinite": a.sorted_members()}
    return a.sorted_members()


def compose_actions(first: TailAction, second: TailAction) -> TailAction:
    """The action ``second o first`` in normalised window+tail form."""
    if first.backend != second.backend:
        raise BackendMismatch("actions over different backends")
    if isinstance(first.tail, Shift) and isinstance(second.tail, Shift):
        tail: TailRule = Shift(first.tail.offset + second.tail.offset)
        shift = abs(first.tail.offset)
    else:
        tail = KILL
        shift = abs(first.tail.offset) if isinstance(first.tail, Shift) else 0
    window = max(first.window, second.window + shift)
    exceptions = {i: second.apply(first.point_image(i)) for i in first.backend.band(window)}
    return TailAction(first.backend, exceptions, tail, window)


# -- systems ----------------------------------------------------------------


class BooleanDynamicalSystem:
    def __init__(self, backend, actions: Mapping[str, Action]):
        self.backend = backend
        self.labels: tuple[str, ...] = tuple(sorted(str(k) for k in actions))
        if len(self.labels) != len(actions):
            raise InputError("labels must be distinct")
        self.actions = {str(k): v for k, v in actions.items()}
        for label, action in self.actions.items():
            if action.backend != backend:
                raise BackendMismatch(f"action {label} is over another backend")
            if isinstance(backend, FiniteAtoms) != isinstance(action, AtomAction):
                raise BackendMismatch(f"action {label} does not match the backend kind")
        self._cache: dict = {}

    @property
    def is_finite(self) -> bool:
        return isinstance(self.backend, FiniteAtoms)

    def apply(self, label: str, a: BoolElem) -> BoolElem:
        if a.backend != self.backend:
            raise BackendMismatch("element from another backend")
        key = (label, a)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.actions[label].apply(a)
            self._cache[key] = hit
        return hit

    def atom_image(self, label: str, atom) -> BoolElem:
        return self.actions[label].point_image(atom)

    def window(self) -> int:
        """Largest window over all labels (0 on the finite backend)."""
        return max((a.window for a in self.actions.values() if isinstance(a, TailAction)), default=0)

    def max_shift(self) -> int:
        return max(
            (abs(a.tail.offset) for a in self.actions.values() if isinstance(a, TailAction) and isinstance(a.tail, Shift)),
            default=0,
        )

    def tail_labels(self) -> tuple[str, ...]:
        """Labels acting nontrivially on points far beyond every window."""
        return tuple(l for l in self.labels if isinstance(self.actions[l].tail, Shift)) if not self.is_finite else ()

    def domain(self, label: str) -> BoolElem:
        """The canonical domain: the join of atoms with nonempty image."""
        action = self.actions[label]
        if isinstance(action, AtomAction):
            return self.backend.element(action.images)
        if isinstance(action.tail, Kill):
            return self.backend.finite(i for i, img in action.exceptions.items() if not img.is_empty)
        return self.backend.cofinite(i for i, img in action.exceptions.items() if img.is_empty)

    def range(self, word: Iterable[str]) -> BoolElem:
        return apply_word(self, word, self.backend.top())

    def points(self) -> list:
        """Atoms, or window points of the cofinite backend, in canonical order."""
        if self.is_finite:
            return list(self.backend.atoms)
        return self.backend.band(self.window())

    def point_elem(self, p) -> BoolElem:
        return self.backend.element((p,)) if self.is_finite else self.backend.point(p)

    def tail_rep(self) -> int:
        """A point beyond every window, standing for the whole tail class."""
        return self.window() + self.max_shift() + 1

    def canonical(self) -> dict:
        if self.is_finite:
            return {
                "backend": "finite",
                "atoms": list(self.backend.atoms),
                "labels": list(self.labels),
                "actions": {l: self.actions[l].canonical() for l in self.labels},
            }
        return {
            "backend": "cofinite",
            "universe": self.backend.universe,
            "window": self.window(),
            "labels": list(self.labels),
            "actions": {l: self.actions[l].canonical() for l in self.labels},
        }

    def __eq__(self, other):
        return isinstance(other, BooleanDynamicalSystem) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(repr(self.canonical()))

    def __repr__(self):
        return f"BooleanDynamicalSystem({self.canonical()})"


def finite_system(atoms: Iterable[str], actions: Mapping[str, Mapping[str, Iterable[str]]]) -> BooleanDynamicalSystem:
    """Convenience constructor: ``actions[label][atom]`` lists the atoms of the image."""
    backend = FiniteAtoms(tuple(atoms))
    built = {
        label: AtomAction(backend, {a: backend.element(img) for a, img in table.items()})
        for label, table in actions.items()
    }
    return BooleanDynamicalSystem(backend, built)


# -- words ------------------------------------------------------------------


def as_word(word) -> Word:
    return tuple(word)


def apply_word(sys: BooleanDynamicalSystem, word: Iterable[str], a: BoolElem) -> BoolElem:
    for label in word:
        if a.is_empty:
            return a
        a = sys.apply(label, a)
    return a


def is_prefix(prefix: Word, word: Word) -> bool:
    return len(prefix) <= len(word) and tuple(word[: len(prefix)]) == tuple(prefix)


def strip_prefix(prefix: Word, word: Word) -> Word:
    if not is_prefix(prefix, word):
        raise ValueError(f"{prefix} is not a prefix of {word}")
    return tuple(word[len(prefix):])


# -- delta, lambda, regularity --------------------------------------------


def out_labels(sys: BooleanDynamicalSystem, a: BoolElem) -> tuple[str, ...]:
    return tuple(l for l in sys.labels if not sys.apply(l, a).is_empty)


def delta(sys: BooleanDynamicalSystem, a: BoolElem, n: int = 1) -> tuple[Word, ...]:
    if a.is_empty:
        raise EmptyArgument("delta of the empty set")
    if n < 1:
        raise InputError("word length must be positive")
    frontier = [((), a)]
    for _ in range(n):
        frontier = [
            (word + (l,), image)
            for word, elem in frontier
            for l in sys.labels
            if not (image := sys.apply(l, elem)).is_empty
        ]
    return tuple(sorted(word for word, _ in frontier))


def lambda_count(sys: BooleanDynamicalSystem, a: BoolElem) -> int:
    if a.is_empty:
        raise EmptyArgument("lambda of the empty set")
    return len(out_labels(sys, a))


def _point_lambda(sys: BooleanDynamicalSystem, p) -> int:
    return sum(1 for l in sys.labels if not sys.atom_image(l, p).is_empty)


def singular_part(sys: BooleanDynamicalSystem, a: BoolElem) -> BoolElem:
    """The largest part of ``a`` made of atoms (points) with no outgoing label."""
    if sys.is_finite:
        return sys.backend.element(m for m in a.members if _point_lambda(sys, m) == 0)
    band = sys.backend.band(sys.window())
    if a.cofinite and not sys.tail_labels():
        alive = [i for i in band if _point_lambda(sys, i) > 0]
        return diff(a, sys.backend.finite(alive))
    candidates = a.members if not a.cofinite else [i for i in band if a.has_point(i)]
    return sys.backend.finite(i for i in candidates if _point_lambda(sys, i) == 0)


def is_regular(sys: BooleanDynamicalSystem, a: BoolElem) -> bool:
    """Every nonempty part of ``a`` has an outgoing label; the empty set counts as regular."""
    return singular_part(sys, a).is_empty


def regular_atoms(sys: BooleanDynamicalSystem) -> BoolElem:
    return diff(sys.backend.top(), singular_part(sys, sys.backend.top()))


def is_locally_finite(sys: BooleanDynamicalSystem) -> bool:
    # the label set is always finite here
    return True


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    label: str
    witness: tuple

    def __str__(self):
        return f"{self.kind} [{self.label}]: {self.witness}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_system(sys: BooleanDynamicalSystem) -> ValidationReport:
    report = ValidationReport()
    for label in sys.labels:
        action = sys.actions[label]
        try:
            if isinstance(action, AtomAction):
                _validate_atoms(sys, label, action, report)
            else:
                _validate_tail(sys, label, action, report)
            dom = sys.domain(label)
            if sys.apply(label, dom) != sys.range((label,)):
                report.violations.append(Violation("domain-range", label, (dom, sys.range((label,)))))
        except Exception as exc:  # the report must never raise
            report.violations.append(Violation("malformed", label, (str(exc),)))
    if not sys.is_finite and not report.violations:
        _validate_composition(sys, report)
    return report


def _validate_atoms(sys, label, action: AtomAction, report: ValidationReport) -> None:
    known = set(sys.backend.atoms)
    for atom, img in action.images.items():
        if atom not in known:
            report.violations.append(Violation("unknown-atom", label, (atom,)))
        if not set(img.members) <= known:
            report.violations.append(Violation("unknown-atom", label, (atom, img)))
    for (x, ix), (y, iy) in combinations(sorted(action.images.items()), 2):
        if not meet(ix, iy).is_empty:
            report.violations.append(Violation("overlapping-images", label, (x, y)))


def _validate_tail(sys, label, action: TailAction, report: ValidationReport) -> None:
    backend = sys.backend
    for i in action.exceptions:
        if not action.in_window(i) or not backend.in_universe(i):
            report.violations.append(Violation("exception-outside-window", label, (i,)))
    if isinstance(action.tail, Shift) and backend.universe == "N":
        for i in range(0, -action.tail.offset):
            if i not in action.exceptions:
                report.violations.append(Violation("tail-leaves-universe", label, (i,)))
    items = sorted(action.exceptions.items())
    for (x, ix), (y, iy) in combinations(items, 2):
        if not meet(ix, iy).is_empty:
            report.violations.append(Violation("overlapping-images", label, (x, y)))
    tail = action.tail_image()
    for x, ix in items:
        if not meet(ix, tail).is_empty:
            report.violations.append(Violation("exception-meets-tail", label, (x, meet(ix, tail))))


def _validate_composition(sys, report: ValidationReport) -> None:
    probe_radius = 2 * (sys.window() + sys.max_shift()) + 2
    band = sys.backend.band(probe_radius)
    probes = [sys.backend.point(i) for i in band] + [sys.backend.top(), sys.backend.cofinite(band[:3])]
    for first in sys.labels:
        for second in sys.labels:
            composite = compose_actions(sys.actions[first], sys.actions[second])
            for p in probes:
                if composite.apply(p) != apply_word(sys, (first, second), p):
                    report.violations.append(Violation("composition", first + second, (p,)))
                    break
