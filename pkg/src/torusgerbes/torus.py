"""Period matrices and the real complex-structure matrix J.

A torus is ``C^g / Lambda`` with period matrix ``Pi = (tau, 1_g)`` and lattice
``Lambda = Z^{2g}``.  Basis vector ``e_s`` maps to column ``s`` of ``Pi``, so
``e_0..e_{g-1}`` are the columns of ``tau`` and ``e_g..e_{2g-1}`` the identity
block.  Multiplication by ``i`` on ``V = R^{2g}`` is the matrix

    J = [[y^-1 x, y^-1], [-y - x y^-1 x, -x y^-1]],   x = Re tau, y = Im tau,

acting on column vectors; it satisfies ``J^2 = -1`` and ``i Pi = Pi J``.
"""

from fractions import Fraction
from functools import cached_property

from .errors import NotInvertible, SingularImaginaryPart, ValidationError
from .exact_algebra import AlgebraElement, ComplexElement, alg_inv, as_complex
from .tensors import ExactTensor, algebra_coords, mult_array, safe_einsum


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), 0) for j in range(len(b[0]))]
            for i in range(len(a))]


def invert_matrix(mat, spec):
    """Gauss-Jordan inverse of a square matrix over the algebra.

    Pivots are chosen among the remaining rows as the first entry that has
    an inverse in the algebra (the algebra need not be a field).  Raises
    :class:`NotInvertible` if no usable pivot exists in some column.
    """
    n = len(mat)
    aug = [[spec.coerce(x) for x in row] + [spec.rational(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not aug[r][col]:
                continue
            try:
                inv = alg_inv(aug[r][col])
            except NotInvertible:
                continue
            pivot = r
            break
        if pivot is None:
            raise NotInvertible(f"no invertible pivot in column {col}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def build_complex_structure(spec):
    """Return the :class:`ComplexStructure` of a torus spec.

    Raises :class:`SingularImaginaryPart` when ``Im tau`` has no inverse.
    """
    alg, g = spec.algebra, spec.g
    x = [[spec.tau[i][j].re for j in range(g)] for i in range(g)]
    y = [[spec.tau[i][j].im for j in range(g)] for i in range(g)]
    try:
        yi = invert_matrix(y, alg)
    except NotInvertible as exc:
        raise SingularImaginaryPart(f"imaginary part of tau is not invertible ({exc})") from None
    yix = _matmul(yi, x)
    xyi = _matmul(x, yi)
    xyix = _matmul(x, yix)
    n = 2 * g
    J = [[alg.zero()] * n for _ in range(n)]
    for i in range(g):
        for j in range(g):
            J[i][j] = yix[i][j]
            J[i][g + j] = yi[i][j]
            J[g + i][j] = -y[i][j] - xyix[i][j]
            J[g + i][g + j] = -xyi[i][j]
    cs = ComplexStructure(J)
    problems = complex_structure_defects(spec, cs)
    if problems:
        raise ValidationError("; ".join(problems), "complex structure")
    return cs


class ComplexStructure:
    """The 2g x 2g matrix J over the algebra, ``J[t][s]`` = coefficient of e_t in J e_s."""

    def __init__(self, matrix):
        self.matrix = tuple(tuple(row) for row in matrix)
        self.n = len(self.matrix)

    @property
    def spec(self):
        return self.matrix[0][0].spec

    def apply(self, v):
        return apply_J(self, v)

    @cached_property
    def dense(self):
        """``(num, den)`` with J[t][s] = num[t, s] / den as coordinate arrays."""
        t = ExactTensor.from_algebra_matrix(self.matrix)
        return t.num, t.den

    def column(self, s):
        """J e_s as a tuple of algebra elements."""
        return tuple(self.matrix[t][s] for t in range(self.n))

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.matrix)
        return f"ComplexStructure([{rows}])"


def apply_J(J, v):
    """Matrix-vector product ``J v``; entries of ``v`` may be ints, Fractions or
    algebra elements."""
    if len(v) != J.n:
        raise ValueError(f"vector has length {len(v)}, expected {J.n}")
    spec = J.spec
    jnum, jden = J.dense
    vnum, vden = algebra_coords(v, spec)
    mult, mden = mult_array(spec)
    out = safe_einsum("tsa,sb,abe->te", jnum, vnum, mult)
    den = jden * vden * mden
    return tuple(AlgebraElement(spec, [Fraction(int(x), den) for x in row]) for row in out)


def complex_structure_defects(spec, cs):
    """List the failed invariants of J (empty list when J is valid)."""
    alg, g, n = spec.algebra, spec.g, 2 * spec.g
    out = []
    J = cs.matrix
    J2 = _matmul(J, J)
    if any(J2[i][j] != (-1 if i == j else 0) for i in range(n) for j in range(n)):
        out.append("J^2 != -1")
    pi = spec.period_matrix()
    for s in range(n):
        lhs = [pi[r][s].times_i() for r in range(g)]
        rhs = [sum((pi[r][t] * J[t][s] for t in range(n)), ComplexElement.zero(alg))
               for r in range(g)]
        if lhs != rhs:
            out.append(f"i*Pi e_{s} != Pi J e_{s}")
            break
    return out


class TorusSpec:
    """Dimension ``g``, algebra and period matrix ``tau`` (g x g over A_C).

    The complex structure is computed on construction, so an instance is
    always valid: ``Im tau`` is invertible and J satisfies its invariants.
    """

    def __init__(self, g, algebra, tau, name=None):
        if g < 1:
            raise ValidationError("g must be positive", "g")
        if len(tau) != g or any(len(row) != g for row in tau):
            raise ValidationError(f"tau must be {g}x{g}", "tau shape")
        self.g = g
        self.n = 2 * g
        self.algebra = algebra
        self.tau = tuple(tuple(as_complex(x, algebra) for x in row) for row in tau)
        self.name = name
        self.J = build_complex_structure(self)

    def period_matrix(self):
        """``Pi = (tau, 1_g)`` as a g x 2g matrix of ComplexElement."""
        alg = self.algebra
        rows = []
        for r in range(self.g):
            row = list(self.tau[r])
            row += [as_complex(int(r == c), alg) for c in range(self.g)]
            rows.append(row)
        return rows

    def apply_J(self, v):
        return apply_J(self.J, v)

    @cached_property
    def j_tensor(self):
        """J as an exact integer tensor, used by the vectorised evaluators."""
        return ExactTensor.from_algebra_matrix(self.J.matrix)

    def __eq__(self, other):
        return (isinstance(other, TorusSpec) and self.g == other.g
                and self.algebra == other.algebra and self.tau == other.tau)

    def __hash__(self):
        return hash((self.g, self.algebra, self.tau))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<TorusSpec{label} g={self.g} algebra={list(self.algebra.basis_names)}>"


def g2_minor_identity(J):
    """The quantity J00 J11 + J11 J22 + J00 J22 - J01 J10 - J12 J21 - J02 J20."""
    m = J.matrix
    return (m[0][0] * m[1][1] + m[1][1] * m[2][2] + m[0][0] * m[2][2]
            - m[0][1] * m[1][0] - m[1][2] * m[2][1] - m[0][2] * m[2][0])


def standard_basis(n):
    return [tuple(int(i == k) for i in range(n)) for k in range(n)]


__all__ = ["TorusSpec", "ComplexStructure", "build_complex_structure", "apply_J",
           "complex_structure_defects", "invert_matrix", "g2_minor_identity",
           "standard_basis"]
