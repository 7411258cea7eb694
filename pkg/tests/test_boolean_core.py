from itertools import islice

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolsys.boolean_core import (
    AT_INFINITY,
    BoolOp,
    FiniteAtoms,
    FiniteCofinite,
    Height,
    Principal,
    PrincipalIdeal,
    boolean_ops,
    complement,
    contains,
    definable_ideal,
    diff,
    ideal_contains,
    join,
    leq,
    meet,
    quotient,
)
from boolsys.errors import BackendMismatch, UnsupportedQuotient

ATOMS = FiniteAtoms(("p", "q", "r", "s"))
ZB = FiniteCofinite("Z")
NB = FiniteCofinite("N")

finite_elems = st.frozensets(st.sampled_from(ATOMS.atoms)).map(ATOMS.element)
cofinite_elems = st.builds(
    lambda co, members: ZB.cofinite(members) if co else ZB.finite(members),
    st.booleans(),
    st.frozensets(st.integers(-6, 6), max_size=5),
)


def test_meet_of_subset():
    assert meet(ATOMS.element("p"), ATOMS.element("pq")) == ATOMS.element("p")


def test_diff_top_point():
    assert diff(ZB.top(), ZB.finite([0])) == ZB.cofinite([0])


def test_join_finite_with_cofinite():
    assert join(ZB.finite([1]), ZB.cofinite([1, 2])) == ZB.cofinite([2])


def test_canonical_empty_and_top():
    assert ZB.finite([]) == ZB.bottom()
    assert ZB.cofinite([]) == ZB.top()
    assert ATOMS.element(ATOMS.atoms) == ATOMS.top()


def test_mismatched_backends_rejected():
    with pytest.raises(BackendMismatch):
        meet(ZB.top(), NB.top())


def test_leq_op_matches_meet():
    a, b = ATOMS.element("p"), ATOMS.element("pq")
    assert boolean_ops(a, b, BoolOp.LEQ) is True
    assert boolean_ops(b, a, BoolOp.LEQ) is False


@settings(max_examples=300)
@given(finite_elems, finite_elems, finite_elems)
def test_lattice_laws_finite(a, b, c):
    assert complement(join(a, b)) == meet(complement(a), complement(b))
    assert complement(meet(a, b)) == join(complement(a), complement(b))
    assert meet(a, join(b, c)) == join(meet(a, b), meet(a, c))
    assert join(a, meet(b, c)) == meet(join(a, b), join(a, c))
    assert leq(a, b) == (meet(a, b) == a)


@settings(max_examples=300)
@given(cofinite_elems, cofinite_elems, cofinite_elems)
def test_lattice_laws_cofinite(a, b, c):
    assert complement(join(a, b)) == meet(complement(a), complement(b))
    assert complement(meet(a, b)) == join(complement(a), complement(b))
    assert meet(a, join(b, c)) == join(meet(a, b), meet(a, c))
    assert diff(a, b) == meet(a, complement(b))
    for i in range(-8, 9):
        assert join(a, b).has_point(i) == (a.has_point(i) or b.has_point(i))


def test_finite_ultrafilters_are_atoms():
    from boolsys.boolean_core import ultrafilters

    assert list(ultrafilters(ATOMS)) == [Principal(a) for a in ATOMS.atoms]


def test_cofinite_spectrum_starts_with_infinity_then_points():
    from boolsys.boolean_core import ultrafilters

    head = list(islice(ultrafilters(NB), 5))
    assert AT_INFINITY in head
    assert [u for u in head if u != AT_INFINITY] == [Principal(i) for i in range(4)]


def test_point_at_infinity_membership():
    assert contains(AT_INFINITY, NB.finite([3, 5])) is False
    assert contains(AT_INFINITY, NB.cofinite([0])) is True
    assert contains(Principal(3), NB.finite([3, 5])) is True
    assert contains(Principal(0), NB.cofinite([0])) is False


@settings(max_examples=200)
@given(finite_elems)
def test_stone_separation(a):
    from boolsys.boolean_core import ultrafilters

    if not a.is_empty:
        assert any(contains(xi, a) for xi in ultrafilters(ATOMS))


@settings(max_examples=200)
@given(finite_elems, finite_elems, finite_elems)
def test_principal_ideal_closure(gen, a, b):
    ideal = PrincipalIdeal(gen)
    if ideal_contains(ideal, a) and leq(b, a):
        assert ideal_contains(ideal, b)
    if ideal_contains(ideal, a) and ideal_contains(ideal, b):
        assert ideal_contains(ideal, join(a, b))


@settings(max_examples=200)
@given(cofinite_elems, cofinite_elems)
def test_finite_only_ideal_closure(a, b):
    fin = definable_ideal(ZB.top(), Height.FINITE_ONLY)
    assert ideal_contains(fin, a) == (not a.cofinite)
    if ideal_contains(fin, a) and ideal_contains(fin, b):
        assert ideal_contains(fin, join(a, b))


def test_quotient_drops_atoms_under_generator():
    backend = FiniteAtoms(("u", "v", "w"))
    q = quotient(backend, PrincipalIdeal(backend.element("v")))
    assert q.backend.atoms == ("u", "w")
    assert q.class_of(backend.element("uv")) == q.backend.element("u")


def test_quotient_by_finite_sets_has_one_atom():
    q = quotient(ZB, definable_ideal(ZB.top(), Height.FINITE_ONLY))
    assert q.backend.atoms == ("tail",)
    assert q.class_of(ZB.finite([5])).is_empty
    assert q.class_of(ZB.cofinite([1])) == q.backend.top()


def test_quotient_by_finite_support_is_unsupported():
    with pytest.raises(UnsupportedQuotient):
        quotient(ZB, definable_ideal(ZB.finite([1, 2])))


@settings(max_examples=200)
@given(finite_elems, finite_elems, finite_elems)
def test_class_map_is_a_homomorphism(gen, a, b):
    q = quotient(ATOMS, PrincipalIdeal(gen))
    for op in (meet, join, diff):
        assert q.class_of(op(a, b)) == op(q.class_of(a), q.class_of(b))


@settings(max_examples=200)
@given(cofinite_elems, cofinite_elems)
def test_class_map_mod_finite_is_a_homomorphism(a, b):
    q = quotient(ZB, definable_ideal(ZB.top(), Height.FINITE_ONLY))
    for op in (meet, join, diff):
        assert q.class_of(op(a, b)) == op(q.class_of(a), q.class_of(b))
