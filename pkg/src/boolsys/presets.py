"""Builders for directed graphs, labelled graphs, partial bijections and shifts of finite type."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .boolean_core import BoolElem, FiniteAtoms
from .dynamics import BooleanDynamicalSystem, finite_system, is_regular, validate_system
from .errors import (
    InputError,
    MemoryTooSmall,
    NotBijective,
    NotWeaklyLeftResolving,
    SftSyntaxError,
)


def _checked(sys: BooleanDynamicalSystem) -> BooleanDynamicalSystem:
    report = validate_system(sys)
    if not report.ok:
        raise InputError(f"preset produced an invalid system: {report.violations[0]}")
    return sys


# -- graphs -----------------------------------------------------------------


def from_directed_graph(vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]) -> BooleanDynamicalSystem:
    """One label per edge ``(source, target, id)``; the label sends ``{source}`` to ``{target}``."""
    names = [str(v) for v in vertices]
    known = set(names)
    actions: dict[str, dict[str, list[str]]] = {}
    for source, target, ident in edges:
        ident = str(ident)
        if ident in actions:
            raise InputError(f"duplicate edge id {ident!r}")
        for end in (source, target):
            if str(end) not in known:
                raise InputError(f"edge {ident!r} uses unknown vertex {end!r}")
        actions[ident] = {str(source): [str(target)]}
    return _checked(finite_system(names, actions))


def _range_of(edges: list[tuple[str, str, str]], sources: frozenset, label: str) -> frozenset:
    return frozenset(t for s, t, l in edges if l == label and s in sources)


def _partition(vertices: list[str], blocks: Iterable[frozenset]) -> list[frozenset]:
    """Atoms of the field of sets generated by ``blocks``."""
    blocks = list(blocks)
    classes: dict[tuple, set] = {}
    for v in vertices:
        classes.setdefault(tuple(v in b for b in blocks), set()).add(v)
    return sorted((frozenset(c) for c in classes.values()), key=sorted)


def _atom_name(atom: frozenset) -> str:
    return "+".join(sorted(atom))


def from_labelled_graph(
    vertices: Iterable[str],
    edges: Iterable[tuple[str, str, str]],
    generators: Iterable[Iterable[str]] = (),
) -> BooleanDynamicalSystem:
    """Labels act by ``r(A, label)``, the set of targets of edges with that label leaving ``A``.

    The Boolean algebra is the smallest field of vertex sets containing the
    generators and closed under every ``r(-, label)``.  Atoms are named by their
    vertices joined with ``+``.
    """
    names = sorted({str(v) for v in vertices})
    known = set(names)
    edge_list = [(str(s), str(t), str(l)) for s, t, l in edges]
    for s, t, l in edge_list:
        if s not in known or t not in known:
            raise InputError(f"edge labelled {l!r} uses an unknown vertex")
    labels = sorted({l for _, _, l in edge_list})
    blocks = {frozenset(str(v) for v in g) for g in generators}
    if any(not b <= known for b in blocks):
        raise InputError("generator mentions an unknown vertex")

    while True:
        atoms = _partition(names, blocks)
        images = {_range_of(edge_list, atom, l) for atom in atoms for l in labels}
        images.discard(frozenset())
        if images <= blocks:
            break
        blocks |= images

    # intersection law on atoms is enough: r is additive over unions
    for label in labels:
        for i, first in enumerate(atoms):
            for second in atoms[i + 1:]:
                if _range_of(edge_list, first, label) & _range_of(edge_list, second, label):
                    raise NotWeaklyLeftResolving(_atom_name(first), _atom_name(second), label)

    actions = {}
    for label in labels:
        table = {}
        for atom in atoms:
            image = _range_of(edge_list, atom, label)
            table[_atom_name(atom)] = [_atom_name(b) for b in atoms if b <= image]
        actions[label] = table
    return _checked(finite_system([_atom_name(a) for a in atoms], actions))


# -- partial bijections -----------------------------------------------------


def from_partial_homeo(
    backend: FiniteAtoms,
    domain: BoolElem,
    codomain: BoolElem,
    phi: Mapping[str, str],
    label: str = "a",
) -> BooleanDynamicalSystem:
    """Single label acting by ``A -> phi^-1(A & codomain)``; its range is ``domain``."""
    if domain.backend != backend or codomain.backend != backend:
        raise InputError("domain and codomain must live on the given backend")
    if set(phi) != set(domain.members):
        raise NotBijective("phi must be defined exactly on the atoms of the domain")
    targets = list(phi.values())
    if set(targets) != set(codomain.members) or len(set(targets)) != len(targets):
        raise NotBijective("phi must hit every atom of the codomain exactly once")
    table = {z: [y] for y, z in phi.items()}
    return _checked(finite_system(backend.atoms, {label: table}))


# -- shifts of finite type ----------------------------------------------------


@dataclass(frozen=True)
class SftInput:
    alphabet: tuple[str, ...]
    forbidden: tuple[str, ...]
    memory: int


def parse_sft(alphabet: Sequence[str], forbidden: Sequence[str], memory: int) -> SftInput:
    letters = tuple(str(a) for a in alphabet)
    if not letters or any(len(a) != 1 for a in letters) or len(set(letters)) != len(letters):
        raise SftSyntaxError("alphabet must be distinct single characters")
    words = tuple(str(w) for w in forbidden)
    for w in words:
        if not w:
            raise SftSyntaxError("forbidden words must be nonempty")
        bad = next((i for i, ch in enumerate(w) if ch not in letters), None)
        if bad is not None:
            raise SftSyntaxError(f"forbidden word {w!r} has {w[bad]!r} at column {bad + 1}, outside the alphabet")
    if not isinstance(memory, int) or memory < 0:
        raise SftSyntaxError("memory must be a natural number")
    return SftInput(letters, words, memory)


class _Shift:
    """The one-sided shift as a graph on essential blocks of length ``k``."""

    def __init__(self, shift_input: SftInput):
        self.shift_input = shift_input
        longest = max((len(w) for w in shift_input.forbidden), default=0)
        self.k = max(longest - 1, 0)
        blocks = [w for w in ("".join(p) for p in product(shift_input.alphabet, repeat=self.k)) if self.allowed(w)]
        # keep only blocks that start an infinite point
        while True:
            alive = [w for w in blocks if any(self.step(w, a) in blocks for a in shift_input.alphabet if self.allowed(w + a))]
            if len(alive) == len(blocks):
                break
            blocks = alive
        self.states = blocks

    def allowed(self, word: str) -> bool:
        return not any(f in word for f in self.shift_input.forbidden)

    def step(self, state: str, letter: str) -> str:
        return (state + letter)[1:] if self.k else ""

    def successors(self, state: str) -> list[tuple[str, str]]:
        return [
            (a, self.step(state, a))
            for a in self.shift_input.alphabet
            if self.allowed(state + a) and self.step(state, a) in self.states
        ]

    def past(self, state: str, length: int) -> frozenset:
        """Words ``z`` of length at most ``length`` with ``z x`` a point, for ``x`` starting at ``state``."""
        found = set()
        for n in range(length + 1):
            for z in product(self.shift_input.alphabet, repeat=n):
                if self.allowed("".join(z) + state):
                    found.add("".join(z))
        return frozenset(found)

    def classes(self, length: int) -> list[frozenset]:
        groups: dict[frozenset, set] = {}
        for s in self.states:
            groups.setdefault(self.past(s, length), set()).add(s)
        return sorted((frozenset(g) for g in groups.values()), key=sorted)


def _class_name(cls: frozenset, total: int) -> str:
    return "X" if len(cls) == total else "+".join(sorted(cls))


def from_sft(shift_input: SftInput) -> BooleanDynamicalSystem:
    """Atoms are the past-equivalence classes at the given memory; ``theta_a(A) = {x : a x in A}``."""
    shift = _Shift(shift_input)
    if not shift.states:
        raise InputError("the shift space is empty")
    longest = max((len(w) for w in shift_input.forbidden), default=0)
    if shift_input.memory < longest - 1:
        raise MemoryTooSmall(f"memory {shift_input.memory} is below {longest - 1}")
    classes = shift.classes(shift_input.memory)
    if classes != shift.classes(shift_input.memory + 1):
        raise MemoryTooSmall(f"past classes still split at memory {shift_input.memory + 1}")

    total = len(shift.states)
    actions: dict[str, dict[str, list[str]]] = {}
    for letter in shift_input.alphabet:
        table = {}
        for cls in classes:
            # x lands in theta_letter(cls) when letter.x is a point whose leading block is in cls
            hit = frozenset(
                s for s in shift.states
                if shift.allowed(letter + s) and (letter + s)[: shift.k] in cls
            )
            image = [c for c in classes if c <= hit]
            if frozenset().union(*image) != hit:
                raise MemoryTooSmall(f"theta_{letter} of {_class_name(cls, total)} is not a union of classes")
            table[_class_name(cls, total)] = [_class_name(c, total) for c in image]
        actions[letter] = table
    sys = _checked(finite_system([_class_name(c, total) for c in classes], actions))
    if not is_regular(sys, sys.backend.top()):
        raise InputError("every element of a shift system must be regular")
    return sys


@dataclass(frozen=True)
class SftCriterion:
    isolated_cyclic_point: bool
    cofinal: bool

    @property
    def simple(self) -> bool:
        return self.cofinal and not self.isolated_cyclic_point


def sft_simplicity_criterion(shift_input: SftInput) -> SftCriterion:
    """Decide simplicity from the shift alone, without building the system.

    A class of past equivalence is a union of blocks; it isolates a cyclic
    point when exactly one infinite path leaves it and that path is periodic.
    Cofinality asks every class to reach every strongly connected part that
    carries a cycle.
    """
    shift = _Shift(shift_input)
    succ = {s: shift.successors(s) for s in shift.states}
    classes = shift.classes(shift_input.memory)

    def reach(start: Iterable[str]) -> set:
        seen, todo = set(start), list(start)
        while todo:
            for _, t in succ[todo.pop()]:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return seen

    isolated = False
    for cls in classes:
        if len(cls) != 1:
            continue
        (state,) = cls
        path, current = [state], state
        while len(succ[current]) == 1:
            current = succ[current][0][1]
            if current == state:
                isolated = True
                break
            if current in path:
                break
            path.append(current)

    on_cycle = {s for s in shift.states if s in reach(t for _, t in succ[s])}
    cofinal = all(on_cycle <= reach(cls) for cls in classes)
    return SftCriterion(isolated, cofinal)
