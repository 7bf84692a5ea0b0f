"""Exact linear algebra over Q and Z.

Everything here works on plain Python lists of ``int`` or ``Fraction`` so that
no intermediate value is ever rounded.  Matrices are lists of rows.

The integer routines are built on one primitive, :func:`_echelonize`, which
brings an integer matrix to row echelon form using only unimodular row
operations.  From it we get the Hermite normal form, integer kernels and
integer solvability of linear systems.
"""

from fractions import Fraction
from math import gcd, lcm


def solve_rational(matrix, rhs):
    """Solve ``matrix @ x = rhs`` over Q for a square matrix.

    Returns the solution as a list of Fractions, or ``None`` when the matrix
    is singular.
    """
    n = len(matrix)
    aug = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def rational_rank(rows):
    """Rank over Q of a matrix with rational entries."""
    mat = [[Fraction(v) for v in row] for row in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for r in range(rank + 1, len(mat)):
            if mat[r][col] != 0:
                f = mat[r][col] / mat[rank][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def clear_denominators(row):
    """Scale a rational row to a primitive integer row with the same kernel."""
    row = [Fraction(v) for v in row]
    den = lcm(1, *(v.denominator for v in row))
    ints = [int(v * den) for v in row]
    g = gcd(*ints)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _echelonize(rows, ncols, reduce_above=False):
    """In-place unimodular row reduction of the first ``ncols`` columns.

    Rows may be longer than ``ncols``; the extra columns are carried along
    (this is how transforms are recorded).  Returns the list of pivot
    columns; rows ``0..len(pivots)-1`` are the nonzero echelon rows.
    """
    pivots = []
    r = 0
    for col in range(ncols):
        if r == len(rows):
            break
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(rows[i][col]))
            rows[r], rows[best] = rows[best], rows[r]
            piv_row = rows[r]
            p = piv_row[col]
            done = True
            for i in range(r + 1, len(rows)):
                a = rows[i][col]
                if a:
                    q = a // p
                    rows[i] = [x - q * y for x, y in zip(rows[i], piv_row)]
                    if rows[i][col]:
                        done = False
            if done:
                break
        if rows[r][col] == 0:
            continue
        if rows[r][col] < 0:
            rows[r] = [-x for x in rows[r]]
        if reduce_above:
            p = rows[r][col]
            for i in range(r):
                q = rows[i][col] // p
                if q:
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    return pivots


def hermite_normal_form(rows):
    """Row-style Hermite normal form; zero rows are dropped.

    Two integer matrices span the same row lattice exactly when their HNFs
    agree, which makes this the canonical form for lattice comparison.
    """
    if not rows:
        return []
    work = [list(map(int, row)) for row in rows]
    pivots = _echelonize(work, len(work[0]), reduce_above=True)
    return work[: len(pivots)]


def integer_kernel(matrix, ncols):
    """Basis of ``{x in Z^ncols : matrix @ x = 0}`` in Hermite normal form.

    The matrix is transposed and augmented with the identity; echelonizing
    the transposed part with unimodular row operations leaves the kernel in
    the identity block of the rows that became zero.  Because the transform
    is unimodular the resulting lattice is saturated.
    """
    m = len(matrix)
    work = [[matrix[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(ncols)]
            for j in range(ncols)]
    pivots = _echelonize(work, m)
    kernel = [row[m:] for row in work[len(pivots):]]
    return hermite_normal_form(kernel)


def solve_integer(matrix, rhs, ncols):
    """Find an integer vector ``x`` with ``matrix @ x = rhs``, or ``None``.

    With ``U`` unimodular and ``U @ matrix.T = [H; 0]`` (H in echelon form)
    the system becomes ``H.T @ y = rhs`` with ``x = U.T @ y``.  The triangular
    system is solved by forward substitution, where any non-integral
    quotient proves that no integer solution exists.
    """
    m = len(matrix)
    work = [[matrix[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(ncols)]
            for j in range(ncols)]
    pivots = _echelonize(work, m)
    y = []
    for k, p in enumerate(pivots):
        acc = rhs[p] - sum(work[kk][p] * y[kk] for kk in range(k))
        if acc % work[k][p]:
            return None
        y.append(acc // work[k][p])
    for j in range(m):
        if sum(work[k][j] * y[k] for k in range(len(pivots))) != rhs[j]:
            return None
    x = [0] * ncols
    for k, yk in enumerate(y):
        if yk:
            x = [a + yk * b for a, b in zip(x, work[k][m:])]
    return x


def smith_invariants(rows):
    """Nonzero invariant factors of an integer matrix.

    Alternates row and column Hermite reductions until the matrix is
    diagonal, then fixes the divisibility chain with gcd/lcm swaps.
    """
    mat = hermite_normal_form(rows)
    while True:
        if not mat:
            return []
        diagonal = all(mat[i][j] == 0 for i in range(len(mat)) for j in range(len(mat[0])) if i != j)
        if diagonal:
            break
        mat = hermite_normal_form([list(col) for col in zip(*mat)])
    diag = [abs(mat[i][i]) for i in range(min(len(mat), len(mat[0]))) if mat[i][i]]
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            diag[i], diag[j] = gcd(a, b), lcm(a, b)
    return diag


def is_saturated(basis):
    """True when the row lattice equals its rational span intersected with Z^n."""
    return all(d == 1 for d in smith_invariants(basis))


def in_row_lattice(basis, vector):
    """Decide whether ``vector`` is an integer combination of ``basis`` rows."""
    if not basis:
        return all(v == 0 for v in vector)
    transposed = [[row[j] for row in basis] for j in range(len(vector))]
    return solve_integer(transposed, list(vector), len(basis)) is not None
