"""Exact integer and rational linear algebra substrate.

Integer matrices with Hermite and Smith normal forms (including the
unimodular transforms that witness them), integer linear solving with
canonical kernel bases, bounded enumeration of lattice points, and an
exact rational feasibility solver: a two-phase simplex over
``fractions.Fraction`` with Bland's pivoting rule, returning either an
exact feasible point or an exact Farkas certificate of infeasibility.

Everything runs on Python ints and Fractions; there is no floating
point on any verdict path. All outputs are deterministic functions of
their inputs, so certificates built on top of this module are
byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b == g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major, immutable."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows*cols")

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[int]]) -> "IntMatrix":
        data = [list(row) for row in data]
        m = len(data)
        n = len(data[0]) if m else 0
        for row in data:
            if len(row) != n:
                raise ValueError("ragged rows")
        return cls(m, n, tuple(x for row in data for x in row))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls(m, n, (0,) * (m * n))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        a, b = self.entries, other.entries
        p, q = self.cols, other.cols
        out = []
        for i in range(self.rows):
            arow = a[i * p : (i + 1) * p]
            for j in range(q):
                acc = 0
                for k, x in enumerate(arow):
                    if x:
                        acc += x * b[k * q + j]
                out.append(acc)
        return IntMatrix(self.rows, q, tuple(out))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        e = self.entries
        n = self.cols
        out = []
        base = 0
        for _ in range(self.rows):
            acc = 0
            for k in range(n):
                x = e[base + k]
                if x:
                    acc += x * vec[k]
            out.append(acc)
            base += n
        return tuple(out)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.entries)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)


def determinant(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = a.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_unimodular(u: IntMatrix) -> bool:
    return u.rows == u.cols and abs(determinant(u)) == 1


def hermite_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite form: returns (H, U) with U @ a == H and U unimodular.

    H is in row echelon form with positive pivots; every entry above a
    pivot is reduced into [0, pivot). This convention is fixed so that
    certificates derived from H are byte-reproducible.
    """
    m, n = a.rows, a.cols
    h = a.to_rows()
    u = IntMatrix.identity(m).to_rows()

    def row_combine(r1: int, r2: int, x: int, y: int, z: int, w: int) -> None:
        # (row r1, row r2) <- (x*r1 + y*r2, z*r1 + w*r2), det [[x,y],[z,w]] = +-1
        for mat in (h, u):
            a1, a2 = mat[r1], mat[r2]
            for j in range(len(a1)):
                a1[j], a2[j] = x * a1[j] + y * a2[j], z * a1[j] + w * a2[j]

    def row_sub(dst: int, src: int, q: int) -> None:
        for mat in (h, u):
            d, s = mat[dst], mat[src]
            for j in range(len(d)):
                d[j] -= q * s[j]

    r = 0
    for c in range(n):
        pivot_row = next((i for i in range(r, m) if h[i][c]), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            h[r], h[pivot_row] = h[pivot_row], h[r]
            u[r], u[pivot_row] = u[pivot_row], u[r]
        for i in range(r + 1, m):
            if h[i][c] == 0:
                continue
            aa, bb = h[r][c], h[i][c]
            if bb % aa == 0:
                row_sub(i, r, bb // aa)
            else:
                g, x, y = xgcd(aa, bb)
                row_combine(r, i, x, y, -(bb // g), aa // g)
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        piv = h[r][c]
        for i in range(r):
            q = h[i][c] // piv
            if q:
                row_sub(i, r, q)
        r += 1
        if r == m:
            break
    return IntMatrix.from_rows(h) if m else IntMatrix.zeros(0, n), IntMatrix.from_rows(u) if m else IntMatrix.identity(0)


def rank(a: IntMatrix) -> int:
    """Rank over the rationals, read off the Hermite form."""
    h, _ = hermite_normal_form(a)
    return sum(1 for i in range(h.rows) if any(h.row(i)))


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith form: returns (S, U, V) with U @ a @ V == S.

    S is diagonal with nonnegative entries d_1 | d_2 | ...; U and V are
    unimodular.
    """
    m, n = a.rows, a.cols
    d = a.to_rows()
    u = IntMatrix.identity(m).to_rows()
    v = IntMatrix.identity(n).to_rows()

    def row_sub(dst: int, src: int, q: int) -> None:
        for mat in (d, u):
            dr, sr = mat[dst], mat[src]
            for j in range(len(dr)):
                dr[j] -= q * sr[j]

    def row_add(dst: int, src: int) -> None:
        for mat in (d, u):
            dr, sr = mat[dst], mat[src]
            for j in range(len(dr)):
                dr[j] += sr[j]

    def row_combine(r1: int, r2: int, x: int, y: int, z: int, w: int) -> None:
        for mat in (d, u):
            a1, a2 = mat[r1], mat[r2]
            for j in range(len(a1)):
                a1[j], a2[j] = x * a1[j] + y * a2[j], z * a1[j] + w * a2[j]

    def col_sub(dst: int, src: int, q: int) -> None:
        for row in d:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    def col_combine(c1: int, c2: int, x: int, y: int, z: int, w: int) -> None:
        for mat in (d, v):
            for row in mat:
                row[c1], row[c2] = x * row[c1] + y * row[c2], z * row[c1] + w * row[c2]

    lim = min(m, n)
    for k in range(lim):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                e = d[i][j]
                if e and (best is None or abs(e) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        if bi != k:
            d[k], d[bi] = d[bi], d[k]
            u[k], u[bi] = u[bi], u[k]
        if bj != k:
            for row in d:
                row[k], row[bj] = row[bj], row[k]
            for row in v:
                row[k], row[bj] = row[bj], row[k]
        while True:
            for i in range(k + 1, m):
                if d[i][k] == 0:
                    continue
                aa, bb = d[k][k], d[i][k]
                if bb % aa == 0:
                    row_sub(i, k, bb // aa)
                else:
                    g, x, y = xgcd(aa, bb)
                    row_combine(k, i, x, y, -(bb // g), aa // g)
            for j in range(k + 1, n):
                if d[k][j] == 0:
                    continue
                aa, bb = d[k][k], d[k][j]
                if bb % aa == 0:
                    col_sub(j, k, bb // aa)
                else:
                    g, x, y = xgcd(aa, bb)
                    col_combine(k, j, x, y, -(bb // g), aa // g)
            if any(d[i][k] for i in range(k + 1, m)):
                continue  # column reduction disturbed by a gcd column op
            # divisibility: the pivot must divide the trailing block
            piv = d[k][k]
            offender = None
            for i in range(k + 1, m):
                if any(d[i][j] % piv for j in range(k + 1, n)):
                    offender = i
                    break
            if offender is None:
                break
            row_add(k, offender)
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]
    return IntMatrix.from_rows(d), IntMatrix.from_rows(u), IntMatrix.from_rows(v)


def solve_in_lattice(
    a: IntMatrix, b: Sequence[int]
) -> tuple[tuple[int, ...], list[tuple[int, ...]]] | None:
    """Solve a @ x == b over the integers.

    Returns (x0, kernel_basis) where kernel_basis is the canonical
    (Hermite-reduced) basis of the integer kernel, or None when no
    integer solution exists.
    """
    if len(b) != a.rows:
        raise ValueError("right-hand side length mismatch")
    s, u, v = smith_normal_form(a)
    c = u.apply(b)
    r = min(a.rows, a.cols)
    y = [0] * a.cols
    for i in range(a.rows):
        di = s.at(i, i) if i < r else 0
        if di:
            if c[i] % di:
                return None
            y[i] = c[i] // di
        elif c[i]:
            return None
    x0 = v.apply(y)
    kernel = [v.column(j) for j in range(a.cols) if j >= r or s.at(j, j) == 0]
    return tuple(x0), row_basis(kernel, a.cols)


def integer_kernel(a: IntMatrix) -> list[tuple[int, ...]]:
    """Canonical basis of {x : a @ x == 0} over the integers."""
    solved = solve_in_lattice(a, (0,) * a.rows)
    assert solved is not None
    return solved[1]


def row_basis(vectors: Iterable[Sequence[int]], width: int) -> list[tuple[int, ...]]:
    """Canonical basis (Hermite rows) of the lattice spanned by ``vectors``."""
    vecs = [list(v) for v in vectors]
    for v in vecs:
        if len(v) != width:
            raise ValueError("vector width mismatch")
    if not vecs:
        return []
    h, _ = hermite_normal_form(IntMatrix.from_rows(vecs))
    return [h.row(i) for i in range(h.rows) if any(h.row(i))]


def enumerate_lattice_points(
    basis_rows: Sequence[Sequence[int]],
    radius: int,
    offset: Sequence[int] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield every vector offset + sum(c_i * b_i) with max |coordinate| <= radius.

    ``basis_rows`` must be Hermite rows (echelon, positive pivots): the
    echelon structure turns the sup-norm ball into exact per-coefficient
    integer ranges, pruned on pivot columns and filtered exactly at the
    leaves. Enumeration order is deterministic.
    """
    rows = [tuple(r) for r in basis_rows]
    if offset is None:
        if not rows:
            return
        offset = (0,) * len(rows[0])
    off = tuple(offset)
    pivots = [next(j for j, x in enumerate(r) if x) for r in rows]

    def rec(i: int, current: list[int]) -> Iterator[tuple[int, ...]]:
        if i == len(rows):
            if all(abs(x) <= radius for x in current):
                yield tuple(current)
            return
        p = pivots[i]
        piv = rows[i][p]
        cur = current[p]
        lo = -((radius + cur) // piv)
        hi = (radius - cur) // piv
        for c in range(lo, hi + 1):
            nxt = [x + c * y for x, y in zip(current, rows[i])]
            yield from rec(i + 1, nxt)

    yield from rec(0, list(off))


# ---------------------------------------------------------------------------
# Exact rational linear programming (feasibility with certificates)
# ---------------------------------------------------------------------------

Rational = Fraction | int

def _frac_row(coeffs: Sequence[Rational], n: int) -> tuple[Fraction, ...]:
    row = tuple(Fraction(c) for c in coeffs)
    if len(row) != n:
        raise ValueError("constraint row length mismatch")
    return row


@dataclass(frozen=True)
class LinearProgram:
    """Exact rational program: equalities a.x == b, inequalities a.x >= b.

    The optional objective row is carried for callers that extend the
    solver; the feasibility decision below does not use it.
    """

    num_vars: int
    equalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    inequalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    objective: tuple[Fraction, ...] | None = None

    @classmethod
    def build(
        cls,
        num_vars: int,
        equalities: Iterable[tuple[Sequence[Rational], Rational]] = (),
        inequalities: Iterable[tuple[Sequence[Rational], Rational]] = (),
        objective: Sequence[Rational] | None = None,
    ) -> "LinearProgram":
        eqs = tuple((_frac_row(a, num_vars), Fraction(b)) for a, b in equalities)
        ins = tuple((_frac_row(a, num_vars), Fraction(b)) for a, b in inequalities)
        obj = _frac_row(objective, num_vars) if objective is not None else None
        return cls(num_vars, eqs, ins, obj)


@dataclass(frozen=True)
class Feasible:
    point: tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    """Farkas certificate: the multipliers combine the constraints into
    0 == sum(eq_multipliers * eq_rows) + sum(ineq_multipliers * ineq_rows)
    coefficient-wise while the combined right-hand side is positive, so
    no point can satisfy the system. Inequality multipliers are >= 0."""

    eq_multipliers: tuple[Fraction, ...]
    ineq_multipliers: tuple[Fraction, ...]


def _pivot(tab: list[list[Fraction]], z: list[Fraction], basis: list[int], row: int, col: int) -> None:
    piv = tab[row][col]
    tab[row] = [x / piv for x in tab[row]]
    for i in range(len(tab)):
        if i != row and tab[i][col]:
            f = tab[i][col]
            tab[i] = [x - f * y for x, y in zip(tab[i], tab[row])]
    if z[col]:
        f = z[col]
        for j in range(len(z)):
            z[j] -= f * tab[row][j]
    basis[row] = col


def _phase_one(
    rows: list[list[Fraction]], rhs: list[Fraction], width: int
) -> tuple[bool, list[Fraction] | None, list[Fraction] | None]:
    """Minimise the sum of artificial variables over rows @ x == rhs, x >= 0.

    rhs must be >= 0. Returns (feasible, structural point, phase-1 duals).
    Bland's rule (smallest entering index; smallest basis index on ratio
    ties) guarantees termination.
    """
    m = len(rows)
    ncols = width + m
    tab = [
        [Fraction(x) for x in rows[i]]
        + [Fraction(1 if t == i else 0) for t in range(m)]
        + [Fraction(rhs[i])]
        for i in range(m)
    ]
    basis = [width + i for i in range(m)]
    z = [Fraction(0)] * (ncols + 1)
    for j in range(ncols + 1):
        cj = Fraction(1) if width <= j < ncols else Fraction(0)
        z[j] = cj - sum(tab[i][j] for i in range(m))
    while True:
        enter = next((j for j in range(ncols) if z[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            aij = tab[i][enter]
            if aij > 0:
                ratio = tab[i][ncols] / aij
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise RuntimeError("phase-1 objective unbounded; input corrupted")
        _pivot(tab, z, basis, leave, enter)
    objective = -z[ncols]
    if objective > 0:
        duals = [Fraction(1) - z[width + i] for i in range(m)]
        return False, None, duals
    point = [Fraction(0)] * width
    for i, b in enumerate(basis):
        if b < width:
            point[b] = tab[i][ncols]
    return True, point, None


def _point_satisfies(program: LinearProgram, x: Sequence[Fraction]) -> bool:
    for coeffs, b in program.equalities:
        if sum(c * v for c, v in zip(coeffs, x)) != b:
            return False
    for coeffs, b in program.inequalities:
        if sum(c * v for c, v in zip(coeffs, x)) < b:
            return False
    return True


def verify_farkas(program: LinearProgram, cert: Infeasible) -> bool:
    """Exactly re-check a Farkas certificate by substitution."""
    if any(t < 0 for t in cert.ineq_multipliers):
        return False
    combo = [Fraction(0)] * program.num_vars
    total = Fraction(0)
    for mult, (coeffs, b) in zip(cert.eq_multipliers, program.equalities):
        for j, c in enumerate(coeffs):
            combo[j] += mult * c
        total += mult * b
    for mult, (coeffs, b) in zip(cert.ineq_multipliers, program.inequalities):
        for j, c in enumerate(coeffs):
            combo[j] += mult * c
        total += mult * b
    return all(c == 0 for c in combo) and total > 0


def lp_feasible(program: LinearProgram) -> Feasible | Infeasible:
    """Exact feasibility verdict for an equality/inequality system.

    A Feasible result carries a point satisfying every constraint
    exactly; an Infeasible result carries a Farkas certificate that
    re-verifies exactly. Both are checked before returning.
    """
    n = program.num_vars
    n_ineq = len(program.inequalities)
    width = 2 * n + n_ineq  # x+ | x- | surplus
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    signs: list[int] = []
    for coeffs, b in program.equalities:
        row = list(coeffs) + [-c for c in coeffs] + [Fraction(0)] * n_ineq
        sign = 1 if b >= 0 else -1
        rows.append([sign * c for c in row])
        rhs.append(sign * b)
        signs.append(sign)
    for idx, (coeffs, b) in enumerate(program.inequalities):
        row = list(coeffs) + [-c for c in coeffs] + [Fraction(0)] * n_ineq
        row[2 * n + idx] = Fraction(-1)
        sign = 1 if b >= 0 else -1
        rows.append([sign * c for c in row])
        rhs.append(sign * b)
        signs.append(sign)
    feasible, point, duals = _phase_one(rows, rhs, width)
    n_eq = len(program.equalities)
    if feasible:
        assert point is not None
        x = tuple(point[j] - point[n + j] for j in range(n))
        if not _point_satisfies(program, x):
            raise AssertionError("simplex returned a non-feasible point")
        return Feasible(x)
    assert duals is not None
    eq_mult = tuple(signs[i] * duals[i] for i in range(n_eq))
    ineq_mult = tuple(signs[n_eq + i] * duals[n_eq + i] for i in range(n_ineq))
    cert = Infeasible(eq_mult, ineq_mult)
    if not verify_farkas(program, cert):
        raise AssertionError("simplex returned an invalid Farkas certificate")
    return cert
