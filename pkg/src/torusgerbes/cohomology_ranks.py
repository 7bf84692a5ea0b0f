"""Neron-Severi and holomorphic topological Brauer lattices of a torus.

Both groups are kernels of Q-linear conditions on integral alternating
forms:

* NS:  E in Alt^2(Z^{2g}, Z) with E(Jx, Jy) = E(x, y);
* HTB: E in Alt^3(Z^{2g}, Z) with E(Jx,Jy,z) + E(x,Jy,Jz) + E(Jx,y,Jz) = E(x,y,z).

The conditions have coefficients in the algebra A; each algebra coordinate
gives one rational equation.  Denominators are cleared and the integer
kernel is computed with unimodular elimination, so the returned lattice is
saturated and its basis (in Hermite normal form) is canonical.

A second, independent formulation of HTB uses the period matrix directly:
E lies in HTB exactly when its C-trilinear extension kills every triple of
vectors from the (0,1) directions.  With zeta = (1_g; -tau) spanning the
-i eigenspace of J, this is the vanishing of

    sum_{a<b<c} E_abc * det(zeta[(a,b,c), (s,t,u)])   for all s < t < u,

which for g = 3 is a single cubic polynomial identity in the entries of tau.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .alt_forms import AltForm, hodge_proj_2form, index_tuples, is_02_form, p12_21_projection
from .errors import InvalidForm
from .exact_algebra import ComplexElement, as_complex
from .form_tensors import tensors_for
from .linalg import (clear_denominators, hermite_normal_form, in_row_lattice, integer_kernel,
                     is_saturated, rational_rank, solve_integer)

__all__ = [
    "IntegerKernel", "GerbeClass", "ns_group", "htb_group", "htb_via_tau",
    "htb_via_tau_g3", "gerbe_classes_equivalent", "same_lattice", "diagonal_htb_excess",
    "diagonal_ns_counts",
]


@dataclass(frozen=True)
class IntegerKernel:
    """Saturated sublattice of Z^N (N = number of sorted index tuples).

    ``basis`` is in Hermite normal form, so two kernels describe the same
    lattice exactly when their bases are equal.  ``constraints`` is the
    integer matrix whose kernel this is.
    """

    degree: int
    rank_of_lattice: int
    basis: tuple
    constraints: tuple = field(default=(), compare=False, repr=False)

    @property
    def rank(self):
        return len(self.basis)

    @property
    def ambient_dim(self):
        return comb(self.rank_of_lattice, self.degree)

    def contains(self, vector):
        return in_row_lattice([list(b) for b in self.basis], list(vector))

    def satisfies_constraints(self, vector):
        return all(sum(r * v for r, v in zip(row, vector)) == 0 for row in self.constraints)

    def forms(self):
        return [AltForm.from_vector(self.degree, self.rank_of_lattice, list(b)) for b in self.basis]

    def is_saturated(self):
        return is_saturated([list(b) for b in self.basis]) if self.basis else True

    def combination(self, coeffs):
        """The form sum_k coeffs[k] * basis[k]."""
        vec = [sum(c * b[j] for c, b in zip(coeffs, self.basis)) for j in range(self.ambient_dim)]
        return AltForm.from_vector(self.degree, self.rank_of_lattice, vec)


def _rows_from_defect(defect, tuples):
    """Turn a (forms, slots..., 2, d) defect tensor into integer equations.

    One equation per (sorted slot tuple, real/imag part, algebra coordinate);
    unknowns are the coefficients of the basis forms.
    """
    num = defect.num
    nforms = num.shape[0]
    rows = []
    for idx in tuples:
        block = num[(slice(None),) + tuple(idx)]
        for part in range(block.shape[-2]):
            for c in range(block.shape[-1]):
                row = [int(block[u, part, c]) for u in range(nforms)]
                if any(row):
                    rows.append(clear_denominators(row))
    return rows


def _kernel(degree, n, rows):
    ncols = comb(n, degree)
    basis = integer_kernel(rows, ncols) if rows else [
        [int(i == j) for j in range(ncols)] for i in range(ncols)]
    return IntegerKernel(degree, n, tuple(tuple(b) for b in basis), tuple(tuple(r) for r in rows))


def ns_group(torus):
    """Integral 2-forms of type (1,1): the Neron-Severi lattice."""
    ft = tensors_for(torus)
    return _kernel(2, torus.n, _rows_from_defect(ft.ns_defect, ft.pairs))


def htb_group(torus):
    """Integral 3-forms fixed by the (1,2)+(2,1) projection."""
    ft = tensors_for(torus)
    return _kernel(3, torus.n, _rows_from_defect(ft.htb_defect, ft.triples))


def _zeta(torus):
    """The 2g x g matrix (1_g; -tau) over A_C, whose columns span the -i eigenspace of J."""
    g, alg = torus.g, torus.algebra
    rows = [[as_complex(int(p == s), alg) for s in range(g)] for p in range(g)]
    rows += [[-torus.tau[p][s] for s in range(g)] for p in range(g)]
    return rows


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _complex_rows(equations):
    """Split A_C-valued equation coefficients into integer rows."""
    rows = []
    for eq in equations:
        for part in ("re", "im"):
            dim = len(getattr(eq[0], part).coords)
            for c in range(dim):
                row = [getattr(x, part).coords[c] for x in eq]
                if any(row):
                    rows.append(clear_denominators(row))
    return rows


def htb_via_tau(torus):
    """HTB lattice from the tau-polynomial constraints (minors of zeta)."""
    zeta = _zeta(torus)
    n = torus.n
    unknowns = index_tuples(n, 3)
    equations = []
    for cols in index_tuples(torus.g, 3):
        eq = []
        for rows in unknowns:
            eq.append(_det3([[zeta[r][c] for c in cols] for r in rows]))
        equations.append(eq)
    rows = _complex_rows(equations) if equations else []
    return _kernel(3, n, rows)


def htb_via_tau_g3(torus):
    """The expanded g = 3 polynomial identity, written out term by term.

    Returns the 20 A_C coefficients (one per sorted triple) of

      a012 - sum_p a_{1,2,p+3} t_{p0} + sum_q a_{0,2,q+3} t_{q1} - sum_r a_{0,1,r+3} t_{r2}
      + sum_{p,q} a_{0,p+3,q+3} (t_{p1} t_{q2}) - ... - a345 det(tau)

    obtained by expanding each 3x3 minor of (1; -tau) explicitly.  It is a
    hand-expanded cross-check of :func:`htb_via_tau`.
    """
    if torus.g != 3:
        raise ValueError("the expanded identity exists only for g = 3")
    t = torus.tau
    alg = torus.algebra
    zero = ComplexElement.zero(alg)
    coeff = {idx: zero for idx in index_tuples(6, 3)}

    def add(idx, value):
        srt = tuple(sorted(idx))
        if len(set(srt)) < 3:
            return
        # sign of the permutation sorting idx
        sign = 1
        lst = list(idx)
        for i in range(3):
            for j in range(i + 1, 3):
                if lst[i] > lst[j]:
                    sign = -sign
        coeff[srt] = coeff[srt] + value * sign

    add((0, 1, 2), as_complex(1, alg))
    # one row from -tau: it replaces the identity row of column s
    for p in range(3):
        add((1, 2, p + 3), -t[p][0])
        add((0, 2, p + 3), t[p][1])
        add((0, 1, p + 3), -t[p][2])
    # two rows from -tau
    for p in range(3):
        for q in range(3):
            add((0, p + 3, q + 3), t[p][1] * t[q][2])
            add((1, p + 3, q + 3), -(t[p][0] * t[q][2]))
            add((2, p + 3, q + 3), t[p][0] * t[q][1])
    # three rows from -tau: -det(tau) after antisymmetrisation
    for p in range(3):
        for q in range(3):
            for r in range(3):
                add((p + 3, q + 3, r + 3), -(t[p][0] * t[q][1] * t[r][2]))
    return coeff


def same_lattice(k1, k2):
    """Equality of two saturated lattices (compares canonical HNF bases)."""
    b1 = hermite_normal_form([list(b) for b in k1.basis])
    b2 = hermite_normal_form([list(b) for b in k2.basis])
    return b1 == b2


# --- independent rank formulas for diagonal purely imaginary tau -------------

def _diagonal_imaginary_parts(torus):
    if torus.g != 3:
        raise ValueError("needs g = 3")
    for i in range(3):
        for j in range(3):
            z = torus.tau[i][j]
            if i != j and z:
                raise ValueError("tau is not diagonal")
            if i == j and z.re:
                raise ValueError("tau is not purely imaginary")
    return [torus.tau[i][i].im for i in range(3)]


def diagonal_htb_excess(torus):
    """R: rank of the two-equation system for tau = diag(i alpha, i beta, i gamma).

    Unknowns (a012, a045, a135, a234, a123, a024, a015, a345); equations

        a012 - beta*gamma a045 + alpha*gamma a135 - alpha*beta a234 = 0
       -alpha a123 + beta a024 - gamma a015 + alpha*beta*gamma a345 = 0

    split into rational equations per algebra coordinate.  The HTB rank is
    then 12 + R.
    """
    al, be, ga = _diagonal_imaginary_parts(torus)
    one = torus.algebra.one()
    zero = torus.algebra.zero()
    eq1 = [one, -(be * ga), al * ga, -(al * be), zero, zero, zero, zero]
    eq2 = [zero, zero, zero, zero, -al, be, -ga, al * be * ga]
    rows = []
    for eq in (eq1, eq2):
        for c in range(torus.algebra.dim):
            rows.append([x.coords[c] for x in eq])
    return 8 - rational_rank(rows)


def diagonal_ns_counts(torus):
    """(R1, R2): how many of alpha/beta, beta/gamma, alpha/gamma and of the
    pairwise products are rational."""
    al, be, ga = _diagonal_imaginary_parts(torus)
    r1 = sum(1 for x in (al / be, be / ga, al / ga) if x.is_rational())
    r2 = sum(1 for x in (al * be, al * ga, be * ga) if x.is_rational())
    return r1, r2


# --- gerbe classes -------------------------------------------------------------

@dataclass(frozen=True)
class GerbeClass:
    """Appell-Humbert data (B, E): a (0,2) form B over A_C and E in HTB."""

    B: AltForm
    E: AltForm

    @classmethod
    def from_rational_form(cls, omega, E, torus):
        """B = omega^H for a rational 2-form omega (always a valid (0,2) form)."""
        return cls(hodge_proj_2form(omega, torus.J), E)

    def validate(self, torus):
        n = torus.n
        if self.B.degree != 2 or self.B.rank != n or self.E.degree != 3 or self.E.rank != n:
            raise InvalidForm("B must be a 2-form and E a 3-form on the torus lattice", "shape")
        if not self.E.is_integral():
            raise InvalidForm("E must be integral", "integrality")
        if not is_02_form(self.B, torus.J):
            raise InvalidForm("B is not of type (0,2)", "(0,2) condition")
        proj = p12_21_projection(self.E, torus.J).as_form()
        if proj != self.E:
            raise InvalidForm("E is not fixed by the (1,2)+(2,1) projection", "E in A(Lambda)")
        return self

    def __add__(self, other):
        return GerbeClass(self.B + other.B, self.E + other.E)

    def scaled(self, b_factor, e_factor=None):
        e_factor = b_factor if e_factor is None else e_factor
        return GerbeClass(self.B * b_factor, self.E * e_factor)


def _b_coordinates(B, torus):
    """Rational coordinates of a complex 2-form, in a fixed order."""
    alg = torus.algebra
    out = []
    for idx in index_tuples(torus.n, 2):
        z = as_complex(B.coeffs.get(idx, 0), alg)
        out.extend(z.re.coords)
        out.extend(z.im.coords)
    return out


def witness_mu(B1, B2, torus):
    """An integral 2-form mu with B2 - B1 = mu^H, or None."""
    ft = tensors_for(torus)
    hs = ft.hodge2_sorted  # (m, m', 2, d)
    m = hs.num.shape[0]
    target = [Fraction(x) for x in _b_coordinates(B2 - B1, torus)]
    # equation rows, one per (pair m', part, coordinate), scaled by hs.den
    rows, rhs = [], []
    k = 0
    for mp in range(hs.num.shape[1]):
        for part in range(2):
            for c in range(hs.num.shape[3]):
                rows.append([Fraction(int(hs.num[u, mp, part, c]), hs.den) for u in range(m)])
                rhs.append(target[k])
                k += 1
    int_rows, int_rhs = [], []
    for row, r in zip(rows, rhs):
        scaled = clear_denominators(row + [r])
        int_rows.append(scaled[:-1])
        int_rhs.append(scaled[-1])
    sol = solve_integer(int_rows, int_rhs, m)
    if sol is None:
        return None
    return AltForm.from_vector(2, torus.n, sol)


def gerbe_classes_equivalent(c1, c2, torus):
    """True iff E1 = E2 and B2 - B1 = mu^H for some integral 2-form mu."""
    c1.validate(torus)
    c2.validate(torus)
    if c1.E != c2.E:
        return False
    return witness_mu(c1.B, c2.B, torus) is not None
