"""Alternating forms on the lattice Z^{2g} and the operations built on them.

An :class:`AltForm` of degree p stores one coefficient per strictly
increasing index tuple; all other values follow from antisymmetry and
multilinearity.  Coefficients can be ints, Fractions, algebra elements or
complex algebra elements, and forms can be evaluated on vectors whose
entries are ints, Fractions or algebra elements.

The standard basis order e_0 < e_1 < ... is used wherever a choice of basis
matters (the section sigma and the semi-character).
"""

from fractions import Fraction
from itertools import combinations, permutations
from math import lcm

import numpy as np

from .exact_algebra import AlgebraElement, ComplexElement, as_complex
from .tensors import ExactTensor, _fit, algebra_coords, mult_array, safe_einsum, safe_matmul
from .torus import apply_J

__all__ = [
    "AltForm", "ExtendedEvaluator", "index_tuples", "permutation_sign", "skew_symmetrize",
    "skew_value", "sigma_section", "semicharacter", "hodge_proj_1form", "hodge_proj_2form",
    "type_11_part", "p12_21_projection", "is_02_form", "form_tensor", "upper_tensor",
]


def index_tuples(rank, degree):
    """Strictly increasing index tuples in lexicographic order."""
    return list(combinations(range(rank), degree))


def permutation_sign(perm):
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _sort_with_sign(idx):
    if len(set(idx)) < len(idx):
        return None, 0
    order = sorted(range(len(idx)), key=lambda k: idx[k])
    return tuple(idx[k] for k in order), permutation_sign(order)


def _is_zero(x):
    return not x


class AltForm:
    """Alternating p-form on Z^rank, stored on sorted index tuples."""

    def __init__(self, degree, rank, coeffs=None):
        if degree not in (1, 2, 3):
            raise ValueError("degree must be 1, 2 or 3")
        self.degree = degree
        self.rank = rank
        clean = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or any(not 0 <= i < rank for i in idx):
                raise ValueError(f"bad index tuple {idx} for a degree-{degree} form")
            key, sign = _sort_with_sign(idx)
            if key is None:
                raise ValueError(f"repeated index in {idx}")
            if _is_zero(c):
                continue
            clean[key] = clean.get(key, 0) + sign * c
        self.coeffs = {k: v for k, v in sorted(clean.items()) if not _is_zero(v)}

    # construction
    @classmethod
    def from_vector(cls, degree, rank, vector):
        """Coefficients listed in lexicographic order of sorted tuples."""
        tuples = index_tuples(rank, degree)
        if len(vector) != len(tuples):
            raise ValueError(f"expected {len(tuples)} coefficients, got {len(vector)}")
        return cls(degree, rank, dict(zip(tuples, vector)))

    @classmethod
    def basis_form(cls, degree, rank, idx):
        return cls(degree, rank, {tuple(idx): 1})

    def to_vector(self, zero=0):
        return [self.coeffs.get(t, zero) for t in index_tuples(self.rank, self.degree)]

    def coefficient(self, idx):
        key, sign = _sort_with_sign(tuple(idx))
        if key is None:
            return 0
        c = self.coeffs.get(key, 0)
        return c if sign == 1 else -c

    # arithmetic
    def _check(self, other):
        if not isinstance(other, AltForm) or (other.degree, other.rank) != (self.degree, self.rank):
            raise ValueError("forms must have the same degree and rank")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return AltForm(self.degree, self.rank, out)

    def __neg__(self):
        return AltForm(self.degree, self.rank, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return AltForm(self.degree, self.rank, {k: v * scalar for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AltForm):
            return NotImplemented
        if (self.degree, self.rank) != (other.degree, other.rank):
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeffs.get(k, 0) == other.coeffs.get(k, 0) for k in keys)

    def __hash__(self):
        return hash((self.degree, self.rank, tuple(self.coeffs)))

    def is_integral(self):
        for v in self.coeffs.values():
            if isinstance(v, (ComplexElement, AlgebraElement)):
                return False
            if Fraction(v).denominator != 1:
                return False
        return True

    def map_coeffs(self, fn):
        return AltForm(self.degree, self.rank, {k: fn(v) for k, v in self.coeffs.items()})

    # evaluation
    def __call__(self, *vectors):
        """Multilinear evaluation: sum over tuples of coefficient times minor."""
        if len(vectors) != self.degree:
            raise TypeError(f"degree-{self.degree} form takes {self.degree} vectors")
        spec = _algebra_of(vectors)
        if spec is not None and self._rational_coeffs():
            return self._eval_in_algebra(spec, vectors)
        total = 0
        perms = [(p, permutation_sign(p)) for p in permutations(range(self.degree))]
        for idx, c in self.coeffs.items():
            minor = 0
            for p, sign in perms:
                term = 1
                for slot, k in enumerate(p):
                    x = vectors[slot][idx[k]]
                    if not x:
                        term = 0
                        break
                    term = term * x
                if term:
                    minor = minor + term if sign > 0 else minor - term
            if minor:
                total = total + c * minor
        return total

    def _rational_coeffs(self):
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs.values())

    def _eval_in_algebra(self, spec, vectors):
        """Numpy contraction for A-valued vectors and rational coefficients."""
        dense = _dense_cache.get(id(self))
        if dense is None or dense[0] is not self:
            t = form_tensor(self, 1)
            dense = (self, t.num[..., 0, 0], t.den)
            if len(_dense_cache) > 256:
                _dense_cache.clear()
            _dense_cache[id(self)] = dense
        _, tnum, tden = dense
        ops, den = [], tden
        for vec in vectors:
            num, d = algebra_coords(vec, spec)
            ops.append(num)
            den *= d
        p = self.degree
        letters = "pqr"[:p]
        vals = "abc"[:p]
        subs = f"{letters}," + ",".join(f"{l}{v}" for l, v in zip(letters, vals)) + f"->{vals}"
        out = safe_einsum(subs, tnum, *ops)
        mult, mden = mult_array(spec)
        if p == 2:
            out, den = safe_einsum("ab,abe->e", out, mult), den * mden
        elif p == 3:
            out = safe_einsum("abc,abx,xce->e", out, mult, mult)
            den = den * mden * mden
        return AlgebraElement(spec, [Fraction(int(x), int(den)) for x in out])

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self.coeffs.items())
        return f"AltForm(degree={self.degree}, rank={self.rank}, {{{body}}})"


_dense_cache = {}


def _algebra_of(vectors):
    """The algebra of the first A-valued entry, if every entry is rational or in A."""
    spec = None
    for vec in vectors:
        for x in vec:
            if isinstance(x, AlgebraElement):
                spec = spec or x.spec
            elif not isinstance(x, (int, Fraction)):
                return None
    return spec


class ExtendedEvaluator:
    """A form together with J, so that ``i*x`` can be fed into its slots.

    ``f(x, y)`` evaluates the A-multilinear extension; ``f.i(x)`` is ``J x``.
    """

    def __init__(self, form, J):
        self.form = form
        self.J = J

    def i(self, v):
        return apply_J(self.J, v)

    def __call__(self, *vectors):
        return self.form(*vectors)

    eval = __call__


def skew_value(f, vectors):
    """s(f)(x_1..x_p) = sum over permutations of sign * f(permuted)."""
    total = 0
    p = len(vectors)
    for perm in permutations(range(p)):
        total = total + permutation_sign(perm) * f(*[vectors[k] for k in perm])
    return total


def skew_symmetrize(f, degree, rank):
    """The AltForm whose sorted-tuple coefficients are s(f) on basis tuples."""
    basis = [tuple(int(i == k) for i in range(rank)) for k in range(rank)]
    coeffs = {idx: skew_value(f, [basis[i] for i in idx]) for idx in index_tuples(rank, degree)}
    return AltForm(degree, rank, coeffs)


def sigma_section(mu):
    """The cochain sigma(mu)(l1, l2) = sum_{i<j} mu_ij * l1_i * l2_j."""
    if mu.degree != 2 or not mu.is_integral():
        raise ValueError("sigma_section needs an integral 2-form")
    items = list(mu.coeffs.items())

    def sigma(l1, l2):
        return sum((c * l1[i] * l2[j] for (i, j), c in items), 0)

    return sigma


def semicharacter(E, lam):
    """theta(lambda) = sigma(E)(lambda, lambda) / 2."""
    return Fraction(sigma_section(E)(lam, lam), 2)


class HodgeOneForm:
    """Anti-holomorphic functional v -> (c(v) + i c(Jv)) / 2 as re/im forms."""

    def __init__(self, re, im, spec):
        self.re = re
        self.im = im
        self.spec = spec

    def __call__(self, v):
        return ComplexElement(self.spec.coerce(self.re(v)), self.spec.coerce(self.im(v)))


def hodge_proj_1form(c, J):
    """c^H(v) = (c(v) + i c(Jv)) / 2 for a rational 1-form ``c``."""
    spec = J.spec
    n = c.rank
    re = c * Fraction(1, 2)
    im_coeffs = {}
    for s in range(n):
        val = sum((c.coefficient((t,)) * J.matrix[t][s] for t in range(n)), spec.zero())
        im_coeffs[(s,)] = val * Fraction(1, 2)
    return HodgeOneForm(re, AltForm(1, n, im_coeffs), spec)


def _basis(n):
    return [tuple(int(i == k) for i in range(n)) for k in range(n)]


def _twisted_2form(omega, J):
    """For rational omega: (omega, omega(J.,J.), omega(J.,.) + omega(.,J.)) as
    (n, n, d) integer arrays over a common denominator."""
    spec = J.spec
    n, d = omega.rank, spec.dim
    full = form_tensor(omega, 1)
    w = full.num[..., 0, 0]
    jnum, jden = J.dense
    mult, mden = mult_array(spec)
    plain = np.zeros((n, n, d), dtype=w.dtype)
    plain[..., 0] = w
    # omega(J e_i, J e_j) = sum_{t,u} J_ti J_uj w_tu with the algebra product
    jwj = safe_einsum("tia,ujb,tu,abe->ije", jnum, jnum, w, mult)
    jw = safe_einsum("tia,tj->ija", jnum, w)
    wj = safe_einsum("iu,uja->ija", w, jnum)
    scale = jden * jden * mden
    return plain * scale, jwj, (jw + wj) * (jden * mden), scale, full.den


def _rational_form(omega):
    return all(isinstance(c, (int, Fraction)) for c in omega.coeffs.values())


def hodge_proj_2form(omega, J):
    """omega^H = (omega - omega(J,J) + i omega(J.,.) + i omega(.,J.)) / 4."""
    spec = J.spec
    if _rational_form(omega):
        plain, jwj, cross, scale, den = _twisted_2form(omega, J)
        den = 4 * scale * den
        return AltForm(2, omega.rank, {
            (i, j): ComplexElement(AlgebraElement(spec, [Fraction(int(x), den) for x in plain[i, j] - jwj[i, j]]),
                                   AlgebraElement(spec, [Fraction(int(x), den) for x in cross[i, j]]))
            for i, j in index_tuples(omega.rank, 2)})
    n = omega.rank
    e = _basis(n)
    Je = [J.column(s) for s in range(n)]
    coeffs = {}
    for i, j in index_tuples(n, 2):
        re = spec.coerce(omega(e[i], e[j])) - spec.coerce(omega(Je[i], Je[j]))
        im = spec.coerce(omega(Je[i], e[j])) + spec.coerce(omega(e[i], Je[j]))
        coeffs[(i, j)] = ComplexElement(re * Fraction(1, 4), im * Fraction(1, 4))
    return AltForm(2, n, coeffs)


def type_11_part(omega, J):
    """omega^(1,1) = (omega + omega(J,J)) / 2, an A-valued 2-form."""
    spec = J.spec
    if _rational_form(omega):
        plain, jwj, _, scale, den = _twisted_2form(omega, J)
        den = 2 * scale * den
        return AltForm(2, omega.rank, {
            (i, j): AlgebraElement(spec, [Fraction(int(x), den) for x in plain[i, j] + jwj[i, j]])
            for i, j in index_tuples(omega.rank, 2)})
    n = omega.rank
    e = _basis(n)
    Je = [J.column(s) for s in range(n)]
    coeffs = {(i, j): (spec.coerce(omega(e[i], e[j])) + spec.coerce(omega(Je[i], Je[j])))
              * Fraction(1, 2) for i, j in index_tuples(n, 2)}
    return AltForm(2, n, coeffs)


class Projection12:
    """(x, y, z) -> E(Jx,Jy,z) + E(x,Jy,Jz) + E(Jx,y,Jz)."""

    def __init__(self, E, J):
        self.E = E
        self.J = J

    def __call__(self, x, y, z):
        E, J = self.E, self.J
        jx, jy, jz = apply_J(J, x), apply_J(J, y), apply_J(J, z)
        return E(jx, jy, z) + E(x, jy, jz) + E(jx, y, jz)

    def as_form(self):
        n = self.E.rank
        e = _basis(n)
        return AltForm(3, n, {t: self(*(e[k] for k in t)) for t in index_tuples(n, 3)})


def p12_21_projection(E, J):
    """Evaluator of the (1,2)+(2,1) projection of a 3-form."""
    return Projection12(E, J)


def is_02_form(B, J):
    """Check B(J e_i, e_j) = -i B(e_i, e_j) on all basis pairs."""
    spec = J.spec
    n = B.rank
    e = _basis(n)
    for i in range(n):
        Je = J.column(i)
        for j in range(n):
            lhs = as_complex(B(Je, e[j]), spec)
            rhs = as_complex(B(e[i], e[j]), spec)
            if lhs != -rhs.times_i():
                return False
    return True


def _coefficient_array(form, dim):
    """(m, 2, d) integer coordinates of the sorted-tuple coefficients, and a denominator."""
    tuples = index_tuples(form.rank, form.degree)
    pairs = [_coords_pair(form.coeffs.get(t, 0), dim) for t in tuples]
    den = lcm(1, *(Fraction(c).denominator for pair in pairs for part in pair for c in part))
    num = np.array([[[int(Fraction(c) * den) for c in part] for part in pair] for pair in pairs],
                   dtype=object).reshape(len(tuples), 2, dim)
    return _fit(num), den


_SIGN_CACHE = {}


def _sign_tensor(n, p, upper):
    """(m, n, .., n) integer tensor: antisymmetric basis forms, or the sorted entries only."""
    key = (n, p, upper)
    if key not in _SIGN_CACHE:
        tuples = index_tuples(n, p)
        arr = np.zeros((len(tuples),) + (n,) * p, dtype=np.int64)
        for u, idx in enumerate(tuples):
            if upper:
                arr[(u,) + idx] = 1
                continue
            for perm in permutations(range(p)):
                arr[(u,) + tuple(idx[k] for k in perm)] = permutation_sign(perm)
        _SIGN_CACHE[key] = arr
    return _SIGN_CACHE[key]


def _coords_pair(c, dim):
    if isinstance(c, ComplexElement):
        return [list(c.re.coords), list(c.im.coords)]
    if isinstance(c, AlgebraElement):
        return [list(c.coords), [0] * dim]
    return [[Fraction(c)] + [0] * (dim - 1), [0] * dim]


def _expand(form, dim, upper):
    coeffs, den = _coefficient_array(form, dim)
    signs = _sign_tensor(form.rank, form.degree, upper)
    m = signs.shape[0]
    if m == 0:
        return ExactTensor(np.zeros((form.rank,) * form.degree + (2, dim), dtype=np.int64), 1)
    flat = safe_matmul(signs.reshape(m, -1).T, coeffs.reshape(m, -1))
    return ExactTensor(flat.reshape((form.rank,) * form.degree + (2, dim)), den)


def form_tensor(form, dim):
    """Full antisymmetric coefficient array as an ExactTensor (n,..,n, 2, d)."""
    return _expand(form, dim, upper=False)


def upper_tensor(form, dim):
    """Coefficients placed only at sorted index positions (no antisymmetrisation).

    Contracting it with lattice vectors realises sums like
    sum_{i<j} mu_ij l1_i l2_j, i.e. the basis-dependent section sigma.
    """
    return _expand(form, dim, upper=True)
