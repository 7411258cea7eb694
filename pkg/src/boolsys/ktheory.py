from __future__ import annotations

from dataclasses import dataclass

from .dynamics import BooleanDynamicalSystem, out_labels
from .errors import UnsupportedBackend


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    @classmethod
    def from_rows(cls, rows: list[list[int]], cols: int | None = None) -> IntMatrix:
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), width, tuple(tuple(int(x) for x in r) for r in rows))

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: list[list[int]], b: list[list[int]], inner: int, cols: int) -> list[list[int]]:
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def determinant(m: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def stable_matrix(sys: BooleanDynamicalSystem) -> IntMatrix:
    """Matrix of Id - [pi_r]: rows are all atoms, columns the regular atoms."""
    if not sys.is_finite:
        raise UnsupportedBackend("K-theory needs a finite system; quotient the cofinite one first")
    atoms = list(sys.backend.atoms)
    index = {a: i for i, a in enumerate(atoms)}
    regular = [a for a in atoms if out_labels(sys, sys.point_elem(a))]
    rows = [[0] * len(regular) for _ in atoms]
    for col, atom in enumerate(regular):
        rows[index[atom]][col] += 1
        for label in sys.labels:
            for target in sys.atom_image(label, atom).members:
                rows[index[target]][col] -= 1
    return IntMatrix.from_rows(rows, len(regular))


def smith_normal_form(m: IntMatrix) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, D, V) with U*M*V = D diagonal, a divisibility chain on a nonnegative diagonal."""
    rows, cols = m.rows, m.cols
    d = m.as_lists()
    u, v = identity(rows), identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):  # col dst += k * col src
        for r in d:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(d[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if d[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # the pivot must divide the rest of the matrix
            offender = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i][j] % d[t][t]),
                None,
            )
            if offender is None:
                break
            add_row(offender[0], t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    if matmul(matmul(u, m.as_lists(), rows, cols), v, cols, cols) != d:
        raise ArithmeticError("Smith normal form failed verification")
    if abs(determinant(u)) != 1 or abs(determinant(v)) != 1:
        raise ArithmeticError("Smith normal form transforms are not unimodular")
    return u, d, v


def invariant_factors(m: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(m.rows, m.cols)) if d[i][i]]


@dataclass(frozen=True)
class Group:
    rank: int
    torsion: tuple = ()

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = [f"Z^{self.rank}" if self.rank > 1 else "Z"] if self.rank else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class KGroups:
    k0: Group
    k1: Group

    def to_json(self) -> dict:
        return {"k0": self.k0.to_json(), "k1": self.k1.to_json()}


def groups_from_matrix(m: IntMatrix) -> KGroups:
    """K0 = coker, K1 = ker of the matrix viewed as Z^cols -> Z^rows."""
    factors = invariant_factors(m)
    r = len(factors)
    return KGroups(
        Group(m.rows - r, tuple(f for f in factors if f > 1)),
        Group(m.cols - r, ()),
    )


def k_groups(sys: BooleanDynamicalSystem) -> KGroups:
    return groups_from_matrix(stable_matrix(sys))
