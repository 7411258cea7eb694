"""The inverse semigroup of words and projections ``s_a p_A s_b*``.

Elements are ``ZERO`` or a :class:`Triple` kept in normal form: the core is
intersected with the ranges of both words, and an empty core collapses to
zero, so structural equality is semigroup equality.

Idempotents are triples with equal words.  Covers, complete expansions and
the refinement procedure work on idempotents; path filters give a
bounded-depth model of tight filters on the finite backend.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from .boolean_core import BoolElem, FiniteAtoms, diff, join_all, leq as set_leq, meet
from .dynamics import (
    BooleanDynamicalSystem,
    Word,
    apply_word,
    is_prefix,
    is_regular,
    out_labels,
    singular_part,
    strip_prefix,
)
from .errors import DepthExhausted, InputError, NotInDomain, NotRegular
from .limits import resolve_bound


@dataclass(frozen=True)
class Zero:
    def __repr__(self):
        return "0"


ZERO = Zero()


@dataclass(frozen=True)
class Triple:
    left: Word
    core: BoolElem
    right: Word

    def __repr__(self):
        return format_element(self)


SemiElem = Union[Zero, Triple]


def triple(sys: BooleanDynamicalSystem, left: Iterable[str], core: BoolElem, right: Iterable[str]) -> SemiElem:
    left, right = tuple(left), tuple(right)
    core = meet(meet(core, sys.range(left)), sys.range(right))
    if core.is_empty:
        return ZERO
    return Triple(left, core, right)


def projection(sys: BooleanDynamicalSystem, core: BoolElem) -> SemiElem:
    return triple(sys, (), core, ())


def conjugate_projection(sys: BooleanDynamicalSystem, word: Iterable[str], core: BoolElem) -> SemiElem:
    """``s_w p_C s_w*``."""
    word = tuple(word)
    return triple(sys, word, core, word)


def star(s: SemiElem) -> SemiElem:
    if isinstance(s, Zero):
        return s
    return Triple(s.right, s.core, s.left)


def mul(sys: BooleanDynamicalSystem, s: SemiElem, t: SemiElem) -> SemiElem:
    if isinstance(s, Zero) or isinstance(t, Zero):
        return ZERO
    alpha, a, beta = s.left, s.core, s.right
    gamma, b, delta = t.left, t.core, t.right
    if is_prefix(beta, gamma):
        rest = strip_prefix(beta, gamma)
        return triple(sys, alpha + rest, meet(apply_word(sys, rest, a), b), delta)
    if is_prefix(gamma, beta):
        rest = strip_prefix(gamma, beta)
        return triple(sys, alpha, meet(a, apply_word(sys, rest, b)), delta + rest)
    return ZERO


def product(sys: BooleanDynamicalSystem, factors: Iterable[SemiElem]) -> SemiElem:
    factors = list(factors)
    if not factors:
        raise InputError("empty product")
    result = factors[0]
    for f in factors[1:]:
        result = mul(sys, result, f)
    return result


def is_idempotent(s: SemiElem) -> bool:
    return isinstance(s, Zero) or s.left == s.right


def depth(s: SemiElem) -> int:
    return 0 if isinstance(s, Zero) else max(len(s.left), len(s.right))


def leq(sys: BooleanDynamicalSystem, s: SemiElem, t: SemiElem) -> bool:
    """Natural partial order: s = t s*s and s = s s* t."""
    return s == mul(sys, t, mul(sys, star(s), s)) and s == mul(sys, mul(sys, s, star(s)), t)


def orthogonal(sys: BooleanDynamicalSystem, e: SemiElem, f: SemiElem) -> bool:
    return mul(sys, e, f) == ZERO


def idempotent_leq_by_cases(sys: BooleanDynamicalSystem, e: SemiElem, f: SemiElem) -> bool:
    """The case characterisation of ``e <= f`` for idempotents.

    Case 1 (e has a nonempty word, or both words are empty): the word of e
    extends the word of f and the core of e sits under the image of f's core.
    Case 2 (only f has a word): f's word is a single label, it is the only
    label leaving e's core, and it carries that core into f's core.
    """
    if not (is_idempotent(e) and is_idempotent(f)):
        raise InputError("both arguments must be idempotent")
    if isinstance(e, Zero):
        return True
    if isinstance(f, Zero):
        return False
    alpha, a, beta, b = e.left, e.core, f.left, f.core
    if alpha or not beta:
        if not is_prefix(beta, alpha):
            return False
        return set_leq(a, apply_word(sys, strip_prefix(beta, alpha), b))
    return len(beta) == 1 and out_labels(sys, a) == beta and set_leq(apply_word(sys, beta, a), b)


# -- complete expansions ---------------------------------------------------


def complete_expansion(sys: BooleanDynamicalSystem, core: BoolElem, k: int) -> list[Word]:
    """Words of the depth-k expansion of ``p_core``; every intermediate image must be regular."""
    if core.is_empty:
        raise InputError("expansion of the empty set")
    words: list[Word] = [()]
    for _ in range(k):
        nxt = []
        for w in words:
            image = apply_word(sys, w, core)
            if not is_regular(sys, image):
                raise NotRegular(singular_part(sys, image))
            nxt.extend(w + (l,) for l in out_labels(sys, image))
        words = nxt
    return sorted(words)


def expansion_idempotents(sys: BooleanDynamicalSystem, core: BoolElem, k: int) -> list[SemiElem]:
    return [conjugate_projection(sys, w, apply_word(sys, w, core)) for w in complete_expansion(sys, core, k)]


# -- covers ---------------------------------------------------------------


@dataclass(frozen=True)
class OrthogonalCover:
    members: tuple


@dataclass(frozen=True)
class NotACover:
    witness: SemiElem


@dataclass(frozen=True)
class Inconclusive:
    bound: int


def element_key(s: SemiElem):
    if isinstance(s, Zero):
        return ((), (), ())
    return (s.left, s.right, (s.core.cofinite, s.core.sorted_members()))


def refine_cover(sys: BooleanDynamicalSystem, x: SemiElem, cover: Iterable[SemiElem], bound: int | None = None):
    """Decide whether ``cover`` covers ``x`` and, if so, refine it to a pairwise-orthogonal cover.

    Members are first cut down to ``x``.  Conjugating by ``s_w p_A`` moves
    ``x = s_w p_A s_w*`` to ``p_A``; there the plain projections are split into
    disjoint pieces, the remainder must be regular, and each label leaving the
    remainder is handled recursively on the members whose word starts with it.
    """
    if not is_idempotent(x):
        raise InputError("x must be an idempotent")
    members = list(cover)
    if any(not is_idempotent(z) for z in members):
        raise InputError("cover members must be idempotents")
    if isinstance(x, Zero):
        return OrthogonalCover(())
    limit = resolve_bound(bound, 3 * max(1, _atom_count(sys)) * max(1, len(sys.labels)))
    to_base = Triple((), x.core, x.left)      # s* for s = s_w p_A
    from_base = star(to_base)
    based = []
    for z in members:
        cut = mul(sys, z, x)
        if cut != ZERO:
            based.append(mul(sys, mul(sys, to_base, cut), from_base))
    outcome = _refine(sys, x.core, based, 0, limit)
    if isinstance(outcome, Inconclusive):
        return outcome
    if isinstance(outcome, NotACover):
        return NotACover(mul(sys, mul(sys, from_base, outcome.witness), to_base))
    lifted = [mul(sys, mul(sys, from_base, piece), to_base) for piece in outcome.members]
    return OrthogonalCover(tuple(sorted(lifted, key=element_key)))


def _atom_count(sys: BooleanDynamicalSystem) -> int:
    return len(sys.backend.atoms) if isinstance(sys.backend, FiniteAtoms) else 2 * sys.window() + 2


def _refine(sys, base: BoolElem, members: list[Triple], level: int, limit: int):
    if level > limit:
        return Inconclusive(limit)
    pieces = []
    covered = sys.backend.bottom()
    for z in members:
        if z.left:
            continue
        piece = diff(meet(z.core, base), covered)
        if not piece.is_empty:
            pieces.append(projection(sys, piece))
            covered = join_all(sys.backend, [covered, piece])
    rest = diff(base, covered)
    if rest.is_empty:
        return OrthogonalCover(tuple(pieces))
    if not is_regular(sys, rest):
        return NotACover(projection(sys, singular_part(sys, rest)))
    for label in out_labels(sys, rest):
        image = sys.apply(label, rest)
        branch = []
        for z in members:
            if z.left and z.left[0] == label:
                shifted = Triple(z.left[1:], z.core, z.right[1:])
                cut = mul(sys, shifted, projection(sys, image))
                if cut != ZERO:
                    branch.append(cut)
        if not branch:
            return NotACover(conjugate_projection(sys, (label,), image))
        outcome = _refine(sys, image, branch, level + 1, limit)
        if isinstance(outcome, Inconclusive):
            return outcome
        if isinstance(outcome, NotACover):
            w = outcome.witness
            return NotACover(triple(sys, (label,) + w.left, w.core, (label,) + w.right))
        pieces.extend(triple(sys, (label,) + p.left, p.core, (label,) + p.right) for p in outcome.members)
    return OrthogonalCover(tuple(pieces))


def is_cover(sys: BooleanDynamicalSystem, x: SemiElem, cover: Iterable[SemiElem], candidates: Iterable[SemiElem]) -> bool:
    """Direct check against an explicit list of idempotents below ``x``."""
    cover = list(cover)
    for e in candidates:
        if e == ZERO or not leq(sys, e, x):
            continue
        if all(mul(sys, e, z) == ZERO for z in cover):
            return False
    return True


# -- path filters and germs -----------------------------------------------


@dataclass(frozen=True)
class Closed:
    pass


@dataclass(frozen=True)
class Periodic:
    period: Word


@dataclass(frozen=True)
class Truncated:
    pass


CLOSED = Closed()
TRUNCATED = Truncated()


@dataclass(frozen=True)
class PathFilter:
    """Filter generated by ``s_{w[:k]} p_{a_k} s_{w[:k]}*`` along a path of atoms.

    ``terminal`` is the atom reached after ``word``.  For ``Periodic`` filters
    ``word`` is a prefix followed by the period forever and ``terminal`` is
    the anchor atom where the period starts.
    """

    word: Word
    terminal: str
    kind: Union[Closed, Periodic, Truncated]


@dataclass(frozen=True)
class Germ:
    element: SemiElem
    at: PathFilter


def _preimage_atom(sys: BooleanDynamicalSystem, label: str, atom: str) -> str:
    for a in sys.backend.atoms:
        if atom in sys.atom_image(label, a).members:
            return a
    raise InputError(f"atom {atom} is not in the range of {label}")


def _require_finite(sys: BooleanDynamicalSystem) -> None:
    if not sys.is_finite:
        raise InputError("path filters are modelled on the finite backend only")


def _cycle_atoms(sys: BooleanDynamicalSystem, f: PathFilter) -> list[str]:
    """Atoms at the anchor and after each letter of one period (anchor excluded at the end)."""
    period = f.kind.period
    atoms = [f.terminal]
    for label in reversed(period):
        atoms.append(_preimage_atom(sys, label, atoms[-1]))
    if atoms[-1] != f.terminal:
        raise InputError("period does not return to its anchor atom")
    return list(reversed(atoms))[:-1]


def path_atoms(sys: BooleanDynamicalSystem, f: PathFilter, length: int) -> tuple[Word, list[str]]:
    """The first ``length`` letters of the path and the atoms a_0..a_length."""
    _require_finite(sys)
    anchor = len(f.word)
    word = tuple(f.word)
    if isinstance(f.kind, Periodic):
        cycle = _cycle_atoms(sys, f)
        while len(word) < length:
            word += f.kind.period
        forward = [cycle[j % len(cycle)] for j in range(max(length - anchor, 0) + 1)]
    elif length > len(word):
        raise DepthExhausted(f"filter known only to depth {len(word)}")
    else:
        forward = [f.terminal]
    backward = [f.terminal]
    for k in range(anchor, 0, -1):
        backward.append(_preimage_atom(sys, word[k - 1], backward[-1]))
    atoms = list(reversed(backward)) + forward[1:]
    return word[:length], atoms[: length + 1]


def canonical_filter(sys: BooleanDynamicalSystem, f: PathFilter) -> PathFilter:
    if not isinstance(f.kind, Periodic):
        return f
    period = f.kind.period
    if not period:
        raise InputError("empty period")
    for size in range(1, len(period) + 1):
        if len(period) % size == 0 and period[:size] * (len(period) // size) == period:
            period = period[:size]
            break
    word, terminal = tuple(f.word), f.terminal
    while word and word[-1] == period[-1]:
        terminal = _preimage_atom(sys, word[-1], terminal)
        word = word[:-1]
        period = period[-1:] + period[:-1]
    return PathFilter(word, terminal, Periodic(period))


def chain_element(sys: BooleanDynamicalSystem, f: PathFilter, k: int) -> SemiElem:
    word, atoms = path_atoms(sys, f, k)
    return conjugate_projection(sys, word, sys.backend.atom(atoms[k]))


def filter_contains(sys: BooleanDynamicalSystem, f: PathFilter, e: SemiElem) -> bool | None:
    """Membership of an idempotent; None when a truncated filter cannot tell."""
    if isinstance(e, Zero) or not is_idempotent(e):
        return False
    n = len(e.left)
    if not isinstance(f.kind, Periodic) and n > len(f.word):
        return None if isinstance(f.kind, Truncated) else False
    word, atoms = path_atoms(sys, f, n)
    return word == e.left and atoms[n] in e.core.members


def beta(sys: BooleanDynamicalSystem, s: SemiElem, f: PathFilter) -> PathFilter:
    """Action of ``s = s_a p_A s_b*`` on a filter containing ``s*s``: the b-prefix becomes a."""
    if isinstance(s, Zero):
        raise NotInDomain("zero has empty domain")
    member = filter_contains(sys, f, mul(sys, star(s), s))
    if member is None:
        raise DepthExhausted("domain membership undecided at this depth")
    if not member:
        raise NotInDomain(f"{format_element(star(s))}{format_element(s)} is not in the filter")
    if isinstance(f.kind, Periodic):
        word, period = tuple(f.word), f.kind.period
        while len(word) < len(s.right):
            word += period
        # the anchor only moves by whole periods, so the rotation of the period is unchanged
        moved = PathFilter(s.left + word[len(s.right):], f.terminal, Periodic(period))
        return canonical_filter(sys, moved)
    return PathFilter(s.left + tuple(f.word)[len(s.right):], f.terminal, f.kind)


def germ_eq(sys: BooleanDynamicalSystem, first: Germ, second: Germ) -> bool | None:
    """Equality of germs; None when a truncated filter is too short to decide."""
    if canonical_filter(sys, first.at) != canonical_filter(sys, second.at):
        return False
    for g in (first, second):
        inside = filter_contains(sys, g.at, mul(sys, star(g.element), g.element))
        if inside is None:
            return None
        if not inside:
            raise NotInDomain("germ base point outside the domain")
    k = max(len(first.element.right), len(second.element.right))
    try:
        e = chain_element(sys, first.at, k)
    except DepthExhausted:
        return None
    return mul(sys, first.element, e) == mul(sys, second.element, e)


# -- expression syntax ----------------------------------------------------


class ExprSyntaxError(InputError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


_TOKEN = re.compile(r"\s*(?:(?P<s>s\()|(?P<p>p\{)|(?P<zero>0)|(?P<star>\*))")


def split_word(sys: BooleanDynamicalSystem, text: str, column: int = 1) -> Word:
    text = text.strip()
    if not text:
        return ()
    if "." in text or "," in text:
        parts = tuple(p.strip() for p in re.split(r"[.,]", text))
    elif all(len(l) == 1 for l in sys.labels):
        parts = tuple(text)
    else:
        parts, rest = [], text
        by_length = sorted(sys.labels, key=len, reverse=True)
        while rest:
            hit = next((l for l in by_length if rest.startswith(l)), None)
            if hit is None:
                raise ExprSyntaxError(f"cannot split {rest!r} into labels", column)
            parts.append(hit)
            rest = rest[len(hit):]
        parts = tuple(parts)
    unknown = [p for p in parts if p not in sys.labels]
    if unknown:
        raise ExprSyntaxError(f"unknown labels {unknown}", column)
    return parts


def _parse_core(sys: BooleanDynamicalSystem, text: str, column: int) -> BoolElem:
    text = text.strip()
    backend = sys.backend
    try:
        if text == "*":
            return backend.top()
        if isinstance(backend, FiniteAtoms):
            names = [t.strip() for t in text.split(",") if t.strip()]
            return backend.element(names)
        if text.startswith("~"):
            return backend.cofinite(int(t) for t in text[1:].split(",") if t.strip())
        return backend.finite(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ExprSyntaxError(str(exc), column) from None


def parse_expression(sys: BooleanDynamicalSystem, text: str) -> SemiElem:
    """Parse ``s(ab) p{u,v} s(c)* * p{w} * 0`` into a single element."""
    pos, factors = 0, []

    def col() -> int:
        return pos + 1

    def closing(opener: str, closer: str) -> str:
        nonlocal pos
        end = text.find(closer, pos)
        if end < 0:
            raise ExprSyntaxError(f"unclosed {opener}", col())
        body = text[pos:end]
        pos = end + 1
        return body

    def peek():
        return _TOKEN.match(text, pos)

    while True:
        m = peek()
        if m is None:
            raise ExprSyntaxError("expected an element", col())
        if m.group("zero"):
            pos = m.end()
            factors.append(ZERO)
        else:
            if not (m.group("s") or m.group("p")):
                raise ExprSyntaxError("expected an element", col())
            left: Word = ()
            if m.group("s"):
                pos = m.end()
                start = col()
                left = split_word(sys, closing("s(", ")"), start)
                m = peek()
            core = sys.backend.top()
            if m is not None and m.group("p"):
                pos = m.end()
                start = col()
                core = _parse_core(sys, closing("p{", "}"), start)
                m = peek()
            right: Word = ()
            if m is not None and m.group("s"):
                pos = m.end()
                start = col()
                right = split_word(sys, closing("s(", ")"), start)
                m = peek()
                if m is None or not m.group("star"):
                    raise ExprSyntaxError("right-hand s(...) must be starred", col())
                pos = m.end()
            factors.append(triple(sys, left, core, right))
        rest = text[pos:]
        if not rest.strip():
            break
        m = peek()
        if m is None or not m.group("star"):
            raise ExprSyntaxError("expected '*' between factors", col() + len(rest) - len(rest.lstrip()))
        pos = m.end()
    return product(sys, factors)


def format_word(word: Word) -> str:
    if any(len(l) != 1 for l in word):
        return ".".join(word)
    return "".join(word)


def format_core(core: BoolElem) -> str:
    if isinstance(core.backend, FiniteAtoms):
        return "p{" + ",".join(core.sorted_members()) + "}"
    if core.cofinite:
        if not core.members:
            return "p{*}"
        return "p{~" + ",".join(str(i) for i in core.sorted_members()) + "}"
    return "p{" + ",".join(str(i) for i in core.sorted_members()) + "}"


def format_element(s: SemiElem) -> str:
    if isinstance(s, Zero):
        return "0"
    parts = []
    if s.left:
        parts.append(f"s({format_word(s.left)})")
    parts.append(format_core(s.core))
    if s.right:
        parts.append(f"s({format_word(s.right)})*")
    return " ".join(parts)
