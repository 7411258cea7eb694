"""Boolean algebras realised as fields of sets.

Two backends are supported:

* ``FiniteAtoms``: the powerset of a finite, lexicographically ordered atom set.
* ``FiniteCofinite``: finite and cofinite subsets of the integers (``"Z"``) or
  of the naturals (``"N"``).

Every value is an immutable :class:`BoolElem`; equality is equality of
canonical forms.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, count
from typing import Callable, Iterable, Iterator, Union

from .errors import BackendMismatch, NotAnIdeal, UnsupportedQuotient


@dataclass(frozen=True)
class FiniteAtoms:
    atoms: tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(a) for a in self.atoms)
        ordered = tuple(sorted(set(names)))
        if len(ordered) != len(names):
            raise ValueError("atom identifiers must be distinct")
        object.__setattr__(self, "atoms", ordered)

    def bottom(self) -> BoolElem:
        return BoolElem(self, False, frozenset())

    def top(self) -> BoolElem:
        return BoolElem(self, False, frozenset(self.atoms))

    def element(self, members: Iterable[str]) -> BoolElem:
        chosen = frozenset(str(m) for m in members)
        unknown = chosen.difference(self.atoms)
        if unknown:
            raise ValueError(f"unknown atoms: {sorted(unknown)}")
        return BoolElem(self, False, chosen)

    def atom(self, name: str) -> BoolElem:
        return self.element((name,))

    def elements(self) -> Iterator[BoolElem]:
        """All 2^n elements, by size and then lexicographically."""
        for size in range(len(self.atoms) + 1):
            for combo in combinations(self.atoms, size):
                yield BoolElem(self, False, frozenset(combo))

    def __repr__(self):
        return f"FiniteAtoms({list(self.atoms)})"


@dataclass(frozen=True)
class FiniteCofinite:
    universe: str = "Z"

    def __post_init__(self):
        if self.universe not in ("Z", "N"):
            raise ValueError("universe must be 'Z' or 'N'")

    def in_universe(self, index: int) -> bool:
        return self.universe == "Z" or index >= 0

    def _check(self, indices: Iterable[int]) -> frozenset[int]:
        values = frozenset(int(i) for i in indices)
        bad = [i for i in values if not self.in_universe(i)]
        if bad:
            raise ValueError(f"indices outside {self.universe}: {sorted(bad)}")
        return values

    def bottom(self) -> BoolElem:
        return BoolElem(self, False, frozenset())

    def top(self) -> BoolElem:
        return BoolElem(self, True, frozenset())

    def finite(self, indices: Iterable[int]) -> BoolElem:
        return BoolElem(self, False, self._check(indices))

    def cofinite(self, exceptions: Iterable[int] = ()) -> BoolElem:
        return BoolElem(self, True, self._check(exceptions))

    def point(self, index: int) -> BoolElem:
        return self.finite((index,))

    def band(self, radius: int) -> list[int]:
        """Indices i of the universe with |i| <= radius, in integer order."""
        low = -radius if self.universe == "Z" else 0
        return list(range(low, radius + 1))

    def indices(self) -> Iterator[int]:
        """Every index, lazily: 0, 1, 2, ... on N and 0, 1, -1, 2, -2, ... on Z."""
        if self.universe == "N":
            yield from count()
            return
        yield 0
        for n in count(1):
            yield n
            yield -n


Backend = Union[FiniteAtoms, FiniteCofinite]


@dataclass(frozen=True)
class BoolElem:
    """An element in canonical form.

    On ``FiniteAtoms`` the element is ``members`` and ``cofinite`` is always
    False.  On ``FiniteCofinite`` the element is ``members`` when finite and the
    complement of ``members`` when ``cofinite`` is True.
    """

    backend: Backend
    cofinite: bool
    members: frozenset

    @property
    def is_empty(self) -> bool:
        return not self.cofinite and not self.members

    def has_point(self, point) -> bool:
        return (point in self.members) != self.cofinite

    def sorted_members(self) -> list:
        return sorted(self.members)

    def __and__(self, other: BoolElem) -> BoolElem:
        return meet(self, other)

    def __or__(self, other: BoolElem) -> BoolElem:
        return join(self, other)

    def __sub__(self, other: BoolElem) -> BoolElem:
        return diff(self, other)

    def __le__(self, other: BoolElem) -> bool:
        return leq(self, other)

    def __repr__(self):
        inner = ",".join(str(m) for m in self.sorted_members())
        if isinstance(self.backend, FiniteAtoms):
            return "{" + inner + "}"
        return ("Cofinite{" if self.cofinite else "Finite{") + inner + "}"


def _same_backend(a: BoolElem, b: BoolElem) -> None:
    if a.backend != b.backend:
        raise BackendMismatch(f"{a.backend!r} vs {b.backend!r}")


def meet(a: BoolElem, b: BoolElem) -> BoolElem:
    _same_backend(a, b)
    if a.cofinite and b.cofinite:
        return BoolElem(a.backend, True, a.members | b.members)
    if a.cofinite:
        return BoolElem(a.backend, False, b.members - a.members)
    if b.cofinite:
        return BoolElem(a.backend, False, a.members - b.members)
    return BoolElem(a.backend, False, a.members & b.members)


def join(a: BoolElem, b: BoolElem) -> BoolElem:
    _same_backend(a, b)
    if a.cofinite and b.cofinite:
        return BoolElem(a.backend, True, a.members & b.members)
    if a.cofinite:
        return BoolElem(a.backend, True, a.members - b.members)
    if b.cofinite:
        return BoolElem(a.backend, True, b.members - a.members)
    return BoolElem(a.backend, False, a.members | b.members)


def complement(a: BoolElem) -> BoolElem:
    if isinstance(a.backend, FiniteAtoms):
        return BoolElem(a.backend, False, frozenset(a.backend.atoms) - a.members)
    return BoolElem(a.backend, not a.cofinite, a.members)


def diff(a: BoolElem, b: BoolElem) -> BoolElem:
    _same_backend(a, b)
    return meet(a, complement(b))


def leq(a: BoolElem, b: BoolElem) -> bool:
    return meet(a, b) == a


def join_all(backend: Backend, elements: Iterable[BoolElem]) -> BoolElem:
    result = backend.bottom()
    for e in elements:
        result = join(result, e)
    return result


class BoolOp(Enum):
    MEET = "meet"
    JOIN = "join"
    DIFF = "diff"
    LEQ = "leq"


def boolean_ops(a: BoolElem, b: BoolElem, op: BoolOp) -> BoolElem | bool:
    if op is BoolOp.MEET:
        return meet(a, b)
    if op is BoolOp.JOIN:
        return join(a, b)
    if op is BoolOp.DIFF:
        return diff(a, b)
    return leq(a, b)


def atoms_of(a: BoolElem) -> list[BoolElem]:
    """Atoms below a finite-backend element, in canonical order."""
    if not isinstance(a.backend, FiniteAtoms):
        raise BackendMismatch("atoms_of needs the finite-atoms backend")
    return [BoolElem(a.backend, False, frozenset((m,))) for m in a.sorted_members()]


# -- ultrafilters ----------------------------------------------------------


@dataclass(frozen=True)
class Principal:
    point: Union[str, int]

    def __repr__(self):
        return f"Principal({self.point!r})"


@dataclass(frozen=True)
class AtInfinity:
    def __repr__(self):
        return "AtInfinity"


Ultrafilter = Union[Principal, AtInfinity]
AT_INFINITY = AtInfinity()


def ultrafilters(backend: Backend) -> Iterator[Ultrafilter]:
    """Stone spectrum of the backend.

    The cofinite backend yields ``AtInfinity`` first and then every principal
    ultrafilter in the order of :meth:`FiniteCofinite.indices`; the stream is
    infinite and restartable.
    """
    if isinstance(backend, FiniteAtoms):
        for a in backend.atoms:
            yield Principal(a)
        return
    yield AT_INFINITY
    for i in backend.indices():
        yield Principal(i)


def contains(xi: Ultrafilter, a: BoolElem) -> bool:
    if isinstance(xi, AtInfinity):
        return a.cofinite
    return a.has_point(xi.point)


def ultrafilter_key(xi: Ultrafilter):
    """Sort key: principal points in index order, the point at infinity last."""
    if isinstance(xi, AtInfinity):
        return (1, 0, "")
    if isinstance(xi.point, int):
        return (0, xi.point, "")
    return (0, 0, xi.point)


def classify_ultrafilter(backend: FiniteCofinite, member: Callable[[BoolElem], bool], radius: int) -> Ultrafilter:
    """Identify an ultrafilter of the cofinite backend from a membership oracle.

    An ultrafilter holding some finite set holds exactly one singleton inside
    it; one holding no finite set holds every cofinite set.  Singletons are
    probed on the band |i| <= radius; the oracle is trusted to be an
    ultrafilter whose principal point, if any, lies in that band.
    """
    for i in backend.band(radius):
        if member(backend.point(i)):
            return Principal(i)
    if member(backend.finite(backend.band(radius))):
        raise ValueError("principal point lies outside the probed band")
    return AT_INFINITY


# -- ideals ----------------------------------------------------------------


class Height(Enum):
    FINITE_ONLY = "finite-only"
    FULL = "full"


@dataclass(frozen=True)
class PrincipalIdeal:
    generator: BoolElem

    @property
    def backend(self):
        return self.generator.backend

    def __repr__(self):
        return f"I_{self.generator!r}"


@dataclass(frozen=True)
class DefinableIdeal:
    support: BoolElem
    height: Height

    @property
    def backend(self):
        return self.support.backend

    def __repr__(self):
        if self.height is Height.FULL:
            return f"I_{self.support!r}"
        return f"Fin({self.support!r})"


IdealDesc = Union[PrincipalIdeal, DefinableIdeal]


def definable_ideal(support: BoolElem, height: Height = Height.FULL) -> DefinableIdeal:
    """Canonical Definable ideal; a finite support makes both heights coincide."""
    if not isinstance(support.backend, FiniteCofinite):
        raise NotAnIdeal("definable ideals live on the cofinite backend")
    if height is Height.FINITE_ONLY and not support.cofinite:
        height = Height.FULL
    return DefinableIdeal(support, height)


def principal_ideal(generator: BoolElem) -> IdealDesc:
    if isinstance(generator.backend, FiniteCofinite):
        return definable_ideal(generator, Height.FULL)
    return PrincipalIdeal(generator)


def zero_ideal(backend: Backend) -> IdealDesc:
    return principal_ideal(backend.bottom())


def whole_ideal(backend: Backend) -> IdealDesc:
    return principal_ideal(backend.top())


def ideal_contains(ideal: IdealDesc, a: BoolElem) -> bool:
    if isinstance(ideal, PrincipalIdeal):
        return leq(a, ideal.generator)
    if ideal.height is Height.FINITE_ONLY and a.cofinite:
        return False
    return leq(a, ideal.support)


def ideal_leq(first: IdealDesc, second: IdealDesc) -> bool:
    """Inclusion of ideals."""
    if isinstance(first, PrincipalIdeal):
        return ideal_contains(second, first.generator)
    if first.height is Height.FULL:
        return ideal_contains(second, first.support)
    return leq(first.support, second.support)


def ideal_key(ideal: IdealDesc):
    """A linear extension of inclusion, used for deterministic listings."""
    if isinstance(ideal, PrincipalIdeal):
        g = ideal.generator
        return (0, len(g.members), g.sorted_members())
    s = ideal.support
    if not s.cofinite:
        return (0, len(s.members), s.sorted_members())
    rank = 1 if ideal.height is Height.FINITE_ONLY else 2
    return (rank, -len(s.members), s.sorted_members())


def check_ideal(backend: Backend, ideal: IdealDesc) -> None:
    if ideal.backend != backend:
        raise NotAnIdeal("ideal belongs to a different backend")
    if isinstance(backend, FiniteAtoms) != isinstance(ideal, PrincipalIdeal):
        raise NotAnIdeal("finite backends use principal ideals, cofinite ones definable ideals")


# -- quotients -------------------------------------------------------------

TAIL_ATOM = "tail"


@dataclass(frozen=True)
class Quotient:
    """B/I together with the class map and a representative for each new atom."""

    source: Backend
    ideal: IdealDesc
    backend: Backend

    def __iter__(self):
        yield self.backend
        yield self.class_of

    def class_of(self, a: BoolElem) -> BoolElem:
        if a.backend != self.source:
            raise BackendMismatch("element is not from the quotiented algebra")
        if isinstance(self.source, FiniteAtoms):
            return self.backend.element(a.members - self.ideal.generator.members)
        if self.backend == self.source:
            return a
        kept = [int(x) for x in self.backend.atoms if x != TAIL_ATOM]
        names = [str(i) for i in kept if a.has_point(i)]
        if a.cofinite and TAIL_ATOM in self.backend.atoms:
            names.append(TAIL_ATOM)
        return self.backend.element(names)

    def representative(self, atom: str) -> BoolElem:
        if isinstance(self.source, FiniteAtoms):
            return self.source.atom(atom)
        if atom == TAIL_ATOM:
            return self.source.cofinite(self.ideal.support.members)
        return self.source.point(int(atom))


def quotient(backend: Backend, ideal: IdealDesc) -> Quotient:
    check_ideal(backend, ideal)
    if isinstance(backend, FiniteAtoms):
        survivors = [a for a in backend.atoms if a not in ideal.generator.members]
        return Quotient(backend, ideal, FiniteAtoms(tuple(survivors)))
    support = ideal.support
    if not support.cofinite:
        if not support.members:
            return Quotient(backend, ideal, backend)
        raise UnsupportedQuotient(
            f"quotient by {ideal!r} is the cofinite algebra on the complement of a finite set; "
            "reindex the system instead"
        )
    outside = sorted(support.members)
    names = [str(i) for i in outside]
    if ideal.height is Height.FINITE_ONLY:
        names.append(TAIL_ATOM)
    return Quotient(backend, ideal, FiniteAtoms(tuple(names)))
