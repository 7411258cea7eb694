import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from boolsys.dynamics import finite_system
from boolsys.errors import UnsupportedBackend
from boolsys.ktheory import (
    Group,
    IntMatrix,
    KGroups,
    determinant,
    invariant_factors,
    k_groups,
    matmul,
    smith_normal_form,
    stable_matrix,
)

from conftest import make_s4, o_n
from corpus import corpus


def test_stable_matrices(s1, s2, s3):
    assert stable_matrix(s2).as_lists() == [[-1]]
    assert stable_matrix(s3).as_lists() == [[0]]
    assert stable_matrix(s1).as_lists() == [[0], [-1]]


def test_cofinite_input_rejected():
    with pytest.raises(UnsupportedBackend):
        stable_matrix(make_s4())


@pytest.mark.parametrize(
    "rows, diagonal",
    [([[-1]], [1]), ([[2, 0], [0, 3]], [1, 6]), ([[0, 0], [0, 0]], [0, 0])],
)
def test_snf_examples(rows, diagonal):
    _, d, _ = smith_normal_form(IntMatrix.from_rows(rows))
    assert [d[i][i] for i in range(len(diagonal))] == diagonal


def test_known_groups(s2, s3):
    assert k_groups(s2) == KGroups(Group(0), Group(0))
    assert k_groups(s3) == KGroups(Group(1), Group(1))
    for n in range(2, 7):
        expected = Group(0, (n - 1,)) if n > 2 else Group(0)
        assert k_groups(o_n(n)) == KGroups(expected, Group(0))


def test_group_rendering():
    assert str(Group(0)) == "0"
    assert str(Group(2, (3,))) == "Z^2 + Z/3"
    assert KGroups(Group(1), Group(0)).to_json() == {"k0": {"rank": 1, "torsion": []}, "k1": {"rank": 0, "torsion": []}}


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=300, deadline=None)
@given(matrices)
def test_snf_against_sympy(rows):
    m = IntMatrix.from_rows(rows)
    u, d, v = smith_normal_form(m)
    assert matmul(matmul(u, rows, m.rows, m.cols), v, m.cols, m.cols) == d
    assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
    ours = invariant_factors(m)
    for a, b in zip(ours, ours[1:]):
        assert b % a == 0
    ref = sympy_snf(Matrix(rows))
    theirs = [abs(int(ref[i, i])) for i in range(min(m.rows, m.cols)) if ref[i, i] != 0]
    assert ours == theirs


def test_invariant_under_relabelling():
    rng = random.Random(2)
    for sys in corpus(80, max_atoms=4):
        atoms = list(sys.backend.atoms)
        renamed = dict(zip(atoms, rng.sample([f"n{i}" for i in range(10)], len(atoms))))
        table = {
            l: {renamed[a]: [renamed[b] for b in sys.atom_image(l, a).members] for a in atoms}
            for l in sys.labels
        }
        assert k_groups(finite_system(renamed.values(), table)) == k_groups(sys)


def test_rank_nullity():
    for sys in corpus(80, max_atoms=4):
        m = stable_matrix(sys)
        assert k_groups(sys).k1.rank + len(invariant_factors(m)) == m.cols
