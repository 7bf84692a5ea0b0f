"""Appell-Humbert cochains for line bundles and gerbes, at exponent level.

A cocycle with values in O^x is represented by its exponent x, with the
actual value exp(2 pi i x) never formed.  Two cochains define the same
class data when their exponents differ by integers, and a cochain is a
cocycle when the exponent of its coboundary is integral.

Group cohomology conventions: a p-cochain is a function of p group elements
and a point; the group acts on points by translation (v -> v + lambda, and
B -> B + mu^H on the universal family) and

    (d theta)(g_1..g_{p+1})(x) = theta(g_2..g_{p+1})(g_1 x)
                                 + sum_i (-1)^i theta(.., g_i g_{i+1}, ..)(x)
                                 + (-1)^{p+1} theta(g_1..g_p)(x).

There are two implementations of every formula:

* the functions ``*_exponent`` evaluate one sample directly from the forms,
  using :class:`~torusgerbes.alt_forms.AltForm` evaluation and J;
* the ``*_cochain`` constructors return :class:`ExponentCochain` objects whose
  evaluation is a contraction of precomputed exact tensors with whole
  batches of samples.  They are what the verification suite runs.

Several coefficients below were fixed by demanding that the stated identity
hold exactly; the docstrings note which alternatives fail.
"""

from fractions import Fraction

import numpy as np

from .alt_forms import (AltForm, form_tensor, hodge_proj_1form, hodge_proj_2form,
                        sigma_section, type_11_part, upper_tensor)
from .cohomology_ranks import GerbeClass
from .errors import InvalidForm
from .exact_algebra import ComplexElement, as_complex
from .form_tensors import tensors_for
from .tensors import (ComplexBatch, ExactTensor, RationalBatch, batch_outer,
                      complex_batch_element, safe_einsum, safe_matmul)
from .torus import apply_J

HALF = Fraction(1, 2)

__all__ = [
    "LatticeGroup", "DualLatticeGroup", "UniversalGroup", "DualPoint",
    "Multilinear", "ExponentCochain", "coboundary",
    "GerbeCochains", "line_bundle_cochain", "poincare_cochain", "universal_cochain",
    "kappa_cochain", "half_hodge_cochain", "constant_form_cochain",
    "line_ah_exponent", "poincare_line_exponent", "H_exponent", "k_and_l",
    "beta_double_prime", "u_term", "r_term", "beta_prime", "gerbe_theta_exponent",
    "helper_delta", "universal_psi_exponent", "kappa_exponent", "pullback_isogeny",
    "universal_topological_class",
]


# ----------------------------------------------------------------------------
# groups acting on points
# ----------------------------------------------------------------------------

class LatticeGroup:
    """Lambda = Z^n acting on V = Q^n by translation.

    Element batches are ``{"l": int array (N, n)}``; point batches are
    ``{"v": RationalBatch}``.
    """

    def __init__(self, torus):
        self.torus = torus
        self.n = torus.n

    def add(self, a, b):
        return {"l": a["l"] + b["l"]}

    def act(self, g, point):
        out = dict(point)
        out["v"] = point["v"].translate(g["l"])
        return out

    def scale(self, g, n):
        return {k: v * n for k, v in g.items()}

    def batch_elements(self, elems):
        return {"l": np.array([list(map(int, e)) for e in elems], dtype=np.int64)}

    def batch_points(self, points):
        return {"v": RationalBatch.from_vectors(points)}

    def element_at(self, batch, k):
        return tuple(int(x) for x in batch["l"][k])

    def point_at(self, batch, k):
        return batch["v"].vector(k)


class DualPoint:
    """A point (v, c) of V x V^dual together with nothing else: c is a rational
    covector whose Hodge projection is the continuous parameter l = c^H."""

    __slots__ = ("v", "c")

    def __init__(self, v, c):
        self.v = tuple(v)
        self.c = tuple(c)


class DualLatticeGroup(LatticeGroup):
    """Lambda x Hom(Lambda, Z) acting on V x V^dual by translation in both factors.

    Elements ``{"l", "h"}``; points ``{"v", "c"}``.
    """

    def add(self, a, b):
        return {"l": a["l"] + b["l"], "h": a["h"] + b["h"]}

    def act(self, g, point):
        return {"v": point["v"].translate(g["l"]), "c": point["c"].translate(g["h"])}

    def batch_elements(self, elems):
        return {"l": np.array([list(map(int, e[0])) for e in elems], dtype=np.int64),
                "h": np.array([list(map(int, e[1])) for e in elems], dtype=np.int64)}

    def batch_points(self, points):
        return {"v": RationalBatch.from_vectors([p.v if isinstance(p, DualPoint) else p[0]
                                                 for p in points]),
                "c": RationalBatch.from_vectors([p.c if isinstance(p, DualPoint) else p[1]
                                                 for p in points])}

    def element_at(self, batch, k):
        return (tuple(int(x) for x in batch["l"][k]), tuple(int(x) for x in batch["h"][k]))

    def point_at(self, batch, k):
        return DualPoint(batch["v"].vector(k), batch["c"].vector(k))


def _mu_vector(mu, n):
    if isinstance(mu, AltForm):
        return [int(x) for x in mu.to_vector()]
    return [int(x) for x in mu]


class UniversalGroup(LatticeGroup):
    """Lambda x Alt^2(Lambda, Z) acting on V x (0,2)-forms.

    ``(lambda, mu)`` sends ``(v, B)`` to ``(v + lambda, B + mu^H)``.  Elements
    ``{"l": (N, n), "mu": (N, m)}`` with mu on sorted pairs; points
    ``{"v": RationalBatch, "B": ComplexBatch (N, m, 2, d)}``.
    """

    def __init__(self, torus):
        super().__init__(torus)
        self.ft = tensors_for(torus)
        self.m = len(self.ft.pairs)

    def add(self, a, b):
        return {"l": a["l"] + b["l"], "mu": a["mu"] + b["mu"]}

    def hodge(self, mu):
        """Batch of mu^H coefficient vectors, as a ComplexBatch (N, m, 2, d)."""
        hs = self.ft.hodge2_sorted
        num = safe_einsum("mkzx,bm->bkzx", hs.num, np.asarray(mu))
        return ComplexBatch(num, np.full(len(mu), hs.den, dtype=np.int64))

    def act(self, g, point):
        return {"v": point["v"].translate(g["l"]), "B": point["B"] + self.hodge(g["mu"])}

    def batch_elements(self, elems):
        return {"l": np.array([list(map(int, e[0])) for e in elems], dtype=np.int64),
                "mu": np.array([_mu_vector(e[1], self.n) for e in elems], dtype=np.int64)}

    def batch_points(self, points):
        dim = self.torus.algebra.dim
        vs = [p[0] for p in points]
        bs = [[b.coefficient(t) for t in self.ft.pairs] for _, b in points]
        return {"v": RationalBatch.from_vectors(vs), "B": ComplexBatch.from_elements(bs, dim)}

    def element_at(self, batch, k):
        return (tuple(int(x) for x in batch["l"][k]),
                AltForm.from_vector(2, self.n, [int(x) for x in batch["mu"][k]]))

    def point_at(self, batch, k):
        spec = self.torus.algebra
        coeffs = [complex_batch_element(batch["B"], k, spec, (j,)) for j in range(self.m)]
        return batch["v"].vector(k), AltForm.from_vector(2, self.n, coeffs)


# ----------------------------------------------------------------------------
# multilinear evaluation
# ----------------------------------------------------------------------------

class Multilinear:
    """A sum of exact tensors contracted with named batch arguments.

    Each term is ``(tensor, keys)``: the leading axes of ``tensor`` are
    contracted with the arguments named in ``keys`` and the trailing
    ``(2, d)`` axes are the complex algebra value.  An argument can be an
    integer array (N, k), a :class:`RationalBatch`, or a
    :class:`ComplexBatch` of shape (N, k, 2, d); in the last case the
    tensor must be rational (only its real unit coordinate is used).
    Terms with the same argument multiset are merged after sorting keys.
    """

    def __init__(self, terms, dim):
        self.dim = dim
        merged = {}
        for tensor, keys in terms:
            order = sorted(range(len(keys)), key=lambda k: keys[k])
            skeys = tuple(keys[k] for k in order)
            t = tensor.transpose(order) if order != list(range(len(keys))) else tensor
            merged[skeys] = merged[skeys] + t if skeys in merged else t
        self.terms = [(t, k) for k, t in sorted(merged.items()) if np.any(t.num != 0)]

    def __add__(self, other):
        return Multilinear([(t, k) for t, k in self.terms] + [(t, k) for t, k in other.terms],
                           self.dim)

    def scaled(self, q):
        return Multilinear([(t.scaled(q), k) for t, k in self.terms], self.dim)

    def evaluate(self, args, count):
        total = ComplexBatch.zeros(count, self.dim)
        for tensor, keys in self.terms:
            total = total + _contract(tensor, keys, args, count)
        return total


def _contract(tensor, keys, args, count):
    """Contract one term: outer product of the integer arguments, then a matmul."""
    den = np.full(count, tensor.den, dtype=np.int64)
    outer, complex_arg = None, None
    for pos, key in enumerate(keys):
        a = args[key]
        if isinstance(a, ComplexBatch):
            complex_arg = (pos, a)
            den = _mul_den(den, a.den)
            continue
        if isinstance(a, RationalBatch):
            arr = a.num
            den = _mul_den(den, a.den)
        else:
            arr = np.asarray(a)
        outer = arr if outer is None else batch_outer(outer, arr)
    if outer is None:
        outer = np.ones((count, 1), dtype=np.int64)
    dim = tensor.num.shape[-1]
    if complex_arg is None:
        num = safe_matmul(outer, tensor.num.reshape(outer.shape[1], 2 * dim))
        return ComplexBatch(num.reshape(count, 2, dim), den)
    pos, cb = complex_arg
    W = np.moveaxis(tensor.num[..., 0, 0], pos, 0)
    weights = safe_matmul(outer, W.reshape(W.shape[0], -1).T)
    return ComplexBatch(safe_einsum("bc,bczx->bzx", weights, cb.num), den)


def _mul_den(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.dtype != object and b.dtype != object:
        if int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) < 2 ** 62:
            return a * b
    return a.astype(object) * b.astype(object)


# ----------------------------------------------------------------------------
# cochains
# ----------------------------------------------------------------------------

class ExponentCochain:
    """Degree-p cochain on ``group`` with exponent values in A_C.

    ``batch_eval(elements, point, count)`` receives a list of p element
    batches and one point batch and returns a :class:`ComplexBatch`.
    Calling the cochain on plain Python values evaluates a single sample
    and returns a :class:`ComplexElement`.
    """

    def __init__(self, degree, group, batch_eval, name=""):
        self.degree = degree
        self.group = group
        self._eval = batch_eval
        self.name = name

    @classmethod
    def from_multilinear(cls, degree, group, form, element_keys, point_keys, name="",
                         constants=None):
        """Cochain whose formula is a :class:`Multilinear` in named arguments.

        ``element_keys[i]`` maps the fields of group element i to argument
        names, ``point_keys`` does the same for the point, and ``constants``
        supplies fixed integer vectors broadcast over the batch.
        """
        constants = constants or {}

        def batch_eval(elements, point, count):
            args = {}
            for el, mapping in zip(elements, element_keys):
                for field, key in mapping.items():
                    args[key] = el[field]
            for field, key in point_keys.items():
                args[key] = point[field]
            for key, vec in constants.items():
                args[key] = np.broadcast_to(np.asarray(vec, dtype=np.int64), (count, len(vec)))
            return form.evaluate(args, count)

        return cls(degree, group, batch_eval, name)

    @classmethod
    def from_function(cls, degree, group, fn, name=""):
        """Wrap a single-sample function ``fn(*elements, point)``; evaluation loops."""
        spec = group.torus.algebra

        def batch_eval(elements, point, count):
            values = []
            for k in range(count):
                els = [group.element_at(e, k) for e in elements]
                values.append(as_complex(fn(*els, group.point_at(point, k)), spec))
            return ComplexBatch.from_elements(values, spec.dim)

        return cls(degree, group, batch_eval, name)

    def evaluate(self, elements, point):
        if len(elements) != self.degree:
            raise ValueError(f"{self.name or 'cochain'} has degree {self.degree}, "
                             f"got {len(elements)} group elements")
        count = len(next(iter(point.values())))
        return self._eval(list(elements), point, count)

    def __call__(self, *elements, point):
        els = [self.group.batch_elements([e]) for e in elements]
        pt = self.group.batch_points([point])
        return complex_batch_element(self.evaluate(els, pt), 0, self.group.torus.algebra)

    def __add__(self, other):
        return _combine(self, other, 1)

    def __sub__(self, other):
        return _combine(self, other, -1)

    def scaled(self, q):
        inner = self._eval
        return ExponentCochain(self.degree, self.group,
                               lambda e, p, c: inner(e, p, c).scaled(q), self.name)


def _combine(a, b, sign):
    if a.degree != b.degree:
        raise ValueError("cannot add cochains of different degree")

    def batch_eval(elements, point, count):
        x = a._eval(elements, point, count)
        y = b._eval(elements, point, count)
        return x + y if sign > 0 else x - y

    return ExponentCochain(a.degree, a.group, batch_eval, f"({a.name} {'+-'[sign < 0]} {b.name})")


def coboundary(theta):
    """The group-cohomology coboundary of a cochain of degree 0, 1 or 2."""
    p = theta.degree
    if p > 2:
        raise ValueError(f"coboundary is only defined up to degree 2, got degree {p}")
    G = theta.group

    def batch_eval(elements, point, count):
        total = theta._eval(elements[1:], G.act(elements[0], point), count)
        for i in range(p):
            merged = elements[:i] + [G.add(elements[i], elements[i + 1])] + elements[i + 2:]
            term = theta._eval(merged, point, count)
            total = total + term if i % 2 else total - term
        last = theta._eval(elements[:p], point, count)
        return total + last if p % 2 else total - last

    return ExponentCochain(p + 1, G, batch_eval, f"d({theta.name})")


# ----------------------------------------------------------------------------
# tensor constructions
# ----------------------------------------------------------------------------

def _re(t):
    """Keep the real part of a complex tensor."""
    num = t.num.copy()
    num[..., 1, :] = 0
    return ExactTensor(num, t.den)


def _im(t):
    """The imaginary part, moved into the real slot."""
    num = np.zeros_like(t.num)
    num[..., 0, :] = t.num[..., 1, :]
    return ExactTensor(num, t.den)


def _defect_free(defects, form):
    """True when sum_u form_u * defects[u] vanishes (defects: (m, ..., 2, d))."""
    vec = np.array([int(x) for x in form.to_vector()], dtype=np.int64)
    m = defects.num.shape[0]
    return not np.any(safe_matmul(vec[None, :], defects.num.reshape(m, -1)))


def _require_htb(torus, E):
    if E.degree != 3 or E.rank != torus.n or not E.is_integral():
        raise InvalidForm("E must be an integral 3-form on the torus lattice", "E shape")
    if not _defect_free(tensors_for(torus).htb_defect, E):
        raise InvalidForm("E is not fixed by the (1,2)+(2,1) projection", "E in A(Lambda)")


def _require_ns(torus, E):
    if E.degree != 2 or E.rank != torus.n or not E.is_integral():
        raise InvalidForm("E must be an integral 2-form on the torus lattice", "E shape")
    if not _defect_free(tensors_for(torus).ns_defect, E):
        raise InvalidForm("E is not of type (1,1)", "E in NS")


class GerbeCochains:
    """All cochains attached to a gerbe class (B, E) on one torus.

    Attributes are :class:`ExponentCochain` objects on the lattice:

    ``theta``      degree 2, 1/2 B(l1,l2) + H_{l1,l2}(v) + beta'(l1,l2) + i beta''(l1,l2)
    ``H``          degree 2, the holomorphic part H_{l1,l2}(v)
    ``k``, ``l``  degree 3, real and imaginary parts of H_{l2,l3}(l1)
    ``u``, ``r``   degree 2, the two summands of beta'
    ``beta1``      beta' = u + r
    ``beta2``      beta'' (real, the imaginary part of theta without i)
    ``E_over_6``   degree 3, E(l1,l2,l3)/6
    """

    def __init__(self, torus, E, B=None, check=True):
        if check:
            _require_htb(torus, E)
        self.torus = torus
        self.E = E
        self.B = B if B is not None else AltForm(2, torus.n)
        ft = tensors_for(torus)
        dim = torus.algebra.dim
        self.group = G = LatticeGroup(torus)
        T = form_tensor(E, dim)
        P = {mask: ft.with_j(T, mask) for mask in
             [(), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]}
        q = Fraction
        h = (P[()].scaled(q(1, 8)) + P[(0, 1)].scaled(q(1, 16)) + P[(0, 2)].scaled(q(1, 16))
             + (P[(1,)].scaled(q(1, 16)) + P[(2,)].scaled(q(1, 16))
                - P[(0,)].scaled(q(1, 8))).times_i())
        self.h_tensor = h
        beta2 = [(P[(0,)].scaled(q(1, 16)), ("l1", "l2", "l1")),
                 (P[(1,)].scaled(q(-1, 16)), ("l2", "l1", "l1")),
                 (P[(1,)].scaled(q(-1, 16)), ("l2", "l2", "l1"))]
        r = [(P[(1, 2)].scaled(q(2, 48)), ("l1", "l2", "l1")),
             (P[(1, 2)].scaled(q(1, 48)), ("l2", "l2", "l1"))]
        U = upper_tensor(E, dim)
        u = [(U.scaled(q(2, 6)), ("l1", "l2", "l2")),
             (U.scaled(q(-3, 6)), ("l1", "l1", "l2")),
             (U.scaled(q(-2, 6)), ("l2", "l1", "l2")),
             (U.scaled(q(1, 6)), ("l1", "l2", "l1")),
             (U.scaled(q(-1, 6)), ("l2", "l1", "l1"))]
        b_terms = []
        if self.B.coeffs:
            b_terms = [(form_tensor(self.B, dim).scaled(HALF), ("l1", "l2"))]
        ek2 = [{"l": "l1"}, {"l": "l2"}]
        ek3 = [{"l": "l1"}, {"l": "l2"}, {"l": "l3"}]
        pv = {"v": "v"}
        mk = lambda deg, terms, keys, name, point=None: ExponentCochain.from_multilinear(
            deg, G, Multilinear(terms, dim), keys, point or {}, name)
        self.H = mk(2, [(h, ("v", "l1", "l2"))], ek2, "H", pv)
        self.k = mk(3, [(_re(h), ("l1", "l2", "l3"))], ek3, "k")
        self.l = mk(3, [(_im(h), ("l1", "l2", "l3"))], ek3, "l")
        self.u = mk(2, u, ek2, "u")
        self.r = mk(2, r, ek2, "r")
        self.beta1 = mk(2, u + r, ek2, "beta'")
        self.beta2 = mk(2, beta2, ek2, "beta''")
        self.E_over_6 = mk(3, [(T.scaled(q(1, 6)), ("l1", "l2", "l3"))], ek3, "E/6")
        i_beta2 = [(t.times_i(), k) for t, k in beta2]
        self.half_B = mk(2, b_terms, ek2, "B/2")
        self.theta = mk(2, b_terms + [(h, ("v", "l1", "l2"))] + u + r + i_beta2, ek2,
                        "Theta", pv)


def constant_form_cochain(torus, form, scale=1):
    """The cochain (l_1..l_p) -> scale * form(l_1..l_p), ignoring the point."""
    G = LatticeGroup(torus)
    dim = torus.algebra.dim
    p = form.degree
    keys = tuple(f"l{i + 1}" for i in range(p))
    ml = Multilinear([(form_tensor(form, dim).scaled(scale), keys)], dim)
    return ExponentCochain.from_multilinear(p, G, ml, [{"l": k} for k in keys], {},
                                            f"{scale}*form")


def line_bundle_cochain(torus, E, check=True):
    """phi^E_l(v) = theta(l) - (i/2) E(Jv, l) + 1/2 E(v, l) - (i/4) E(Jl, l)."""
    if check:
        _require_ns(torus, E)
    ft = tensors_for(torus)
    dim = torus.algebra.dim
    S = form_tensor(E, dim)
    S10 = ft.with_j(S, (0,))
    terms = [(upper_tensor(E, dim).scaled(HALF), ("l", "l")),
             (S10.times_i().scaled(-HALF), ("v", "l")),
             (S.scaled(HALF), ("v", "l")),
             (S10.times_i().scaled(Fraction(-1, 4)), ("l", "l"))]
    return ExponentCochain.from_multilinear(1, LatticeGroup(torus), Multilinear(terms, dim),
                                            [{"l": "l"}], {"v": "v"}, "phi^E")


def poincare_cochain(torus):
    """psi_{l,xi}(v, c) = c^H(l) + xi(l) - conj(xi(v)) with xi = h^H."""
    dim = torus.algebra.dim
    n = torus.n
    ident = ExactTensor.real_unit(np.eye(n, dtype=np.int64), dim)
    Jt = torus.j_tensor
    jnum = np.zeros((n, n, 2, dim), dtype=Jt.num.dtype)
    jnum[:, :, 0, :] = Jt.num
    Jc = ExactTensor(jnum, Jt.den)  # Jc[t, s] = J_{t,s}: c(J l) = sum c_t J_ts l_s
    iJ = Jc.times_i().scaled(HALF)
    terms = [(ident.scaled(HALF), ("c", "l")), (iJ, ("c", "l")),
             (ident.scaled(HALF), ("h", "l")), (iJ, ("h", "l")),
             (ident.scaled(-HALF), ("h", "v")), (iJ, ("h", "v"))]
    return ExponentCochain.from_multilinear(1, DualLatticeGroup(torus), Multilinear(terms, dim),
                                            [{"l": "l", "h": "h"}], {"v": "v", "c": "c"}, "psi")


def universal_cochain(torus):
    """The exponent of the universal 2-cocycle on Lambda x Alt^2(Lambda, Z):

    1/2 (B + mu1^H + mu2^H)(l1, l2) + 1/2 conj(mu2^H(v, l1))
    - (i/4) (mu2(Jv, l1) - mu2(v, Jl1)) + 1/4 (mu2(v, l1) + mu2(Jv, Jl1))
    - (i/8) (mu2(Jl1, l1) - mu2(l1, Jl1)) + 1/2 sigma(mu2)(l1, l1)
    """
    ft = tensors_for(torus)
    dim = torus.algebra.dim
    W = ft.basis2
    P = ft.hodge2
    W10 = ft.with_j(W, (1,))
    W01 = ft.with_j(W, (2,))
    W11 = ft.with_j(W, (1, 2))
    q = Fraction
    diff = W10 - W01
    terms = [(W.scaled(HALF), ("B", "l1", "l2")),
             (P.scaled(HALF), ("mu1", "l1", "l2")),
             (P.scaled(HALF), ("mu2", "l1", "l2")),
             (P.conj().scaled(HALF), ("mu2", "v", "l1")),
             (diff.times_i().scaled(q(-1, 4)), ("mu2", "v", "l1")),
             ((W + W11).scaled(q(1, 4)), ("mu2", "v", "l1")),
             (diff.times_i().scaled(q(-1, 8)), ("mu2", "l1", "l1")),
             (ft.upper2.scaled(HALF), ("mu2", "l1", "l1"))]
    return ExponentCochain.from_multilinear(
        2, UniversalGroup(torus), Multilinear(terms, dim),
        [{"l": "l1", "mu": "mu1"}, {"l": "l2", "mu": "mu2"}], {"v": "v", "B": "B"}, "Psi")


def kappa_cochain(torus, mu):
    """kappa(mu)_l(v) = 1/2 sigma(mu)(l,l)
    - [-(i/2) M(Jv,l) + 1/2 M(v,l) - (i/4) M(Jl,l)] - 1/2 conj(mu^H(v,l)),
    M = mu^(1,1).  Its coboundary is 1/2 mu^H(l1,l2) modulo integers.
    """
    ft = tensors_for(torus)
    dim = torus.algebra.dim
    M = ft.type11_2
    M10 = ft.with_j(M, (1,))
    terms = [(ft.upper2.scaled(HALF), ("mu", "l", "l")),
             (M10.times_i().scaled(HALF), ("mu", "v", "l")),
             (M.scaled(-HALF), ("mu", "v", "l")),
             (M10.times_i().scaled(Fraction(1, 4)), ("mu", "l", "l")),
             (ft.hodge2.conj().scaled(-HALF), ("mu", "v", "l"))]
    return ExponentCochain.from_multilinear(
        1, LatticeGroup(torus), Multilinear(terms, dim), [{"l": "l"}], {"v": "v"}, "kappa",
        constants={"mu": _mu_vector(mu, torus.n)})


def half_hodge_cochain(torus, mu):
    """The constant 2-cochain 1/2 mu^H(l1, l2)."""
    ft = tensors_for(torus)
    dim = torus.algebra.dim
    return ExponentCochain.from_multilinear(
        2, LatticeGroup(torus), Multilinear([(ft.hodge2.scaled(HALF), ("mu", "l1", "l2"))], dim),
        [{"l": "l1"}, {"l": "l2"}], {}, "mu^H/2", constants={"mu": _mu_vector(mu, torus.n)})


# ----------------------------------------------------------------------------
# single-sample formulas (direct evaluation from forms)
# ----------------------------------------------------------------------------

def _C(spec, re, im=0):
    return ComplexElement(spec.coerce(re), spec.coerce(im))


def _vadd(*vs):
    return tuple(sum(xs) for xs in zip(*vs))


def line_ah_exponent(torus, E, lam, v):
    """theta(l) - (i/2) E(Jv, l) + 1/2 E(v, l) - (i/4) E(Jl, l) for E in NS."""
    _require_ns(torus, E)
    spec, J = torus.algebra, torus.J
    theta = Fraction(sigma_section(E)(lam, lam), 2)
    jv, jl = apply_J(J, v), apply_J(J, lam)
    re = theta + HALF * E(v, lam)
    im = -HALF * E(jv, lam) - Fraction(1, 4) * E(jl, lam)
    return _C(spec, re, im)


def poincare_line_exponent(torus, lam, h, v, c):
    """l(lambda) + xi(lambda) - conj(xi(v)), with xi = h^H and l = c^H."""
    n = torus.n
    xi = hodge_proj_1form(AltForm(1, n, {(k,): x for k, x in enumerate(h)}), torus.J)
    ell = hodge_proj_1form(AltForm(1, n, {(k,): x for k, x in enumerate(c)}), torus.J)
    return ell(lam) + xi(lam) - xi(v).conj()


def H_exponent(torus, E, l1, l2, v):
    """H_{l1,l2}(v): holomorphic (C-linear) in v.

    Re = [E(v,l1,l2) + 1/2 E(iv,il1,l2) + 1/2 E(iv,l1,il2)] / 8
    Im = [1/2 E(v,il1,l2) + 1/2 E(v,l1,il2) - E(iv,l1,l2)] / 8
    """
    _require_htb(torus, E)
    J = torus.J
    iv, i1, i2 = apply_J(J, v), apply_J(J, l1), apply_J(J, l2)
    re = (E(v, l1, l2) + HALF * E(iv, i1, l2) + HALF * E(iv, l1, i2)) * Fraction(1, 8)
    im = (HALF * E(v, i1, l2) + HALF * E(v, l1, i2) - E(iv, l1, l2)) * Fraction(1, 8)
    return _C(torus.algebra, re, im)


def k_and_l(torus, E, l1, l2, l3):
    """(k, l) = real and imaginary parts of H_{l2,l3}(l1)."""
    z = H_exponent(torus, E, l2, l3, l1)
    return z.re, z.im


def beta_double_prime(torus, E, l1, l2):
    """beta''_{l1,l2} = (E(il1, l2, l1) - E(l2, i(l1+l2), l1)) / 16."""
    _require_htb(torus, E)
    J = torus.J
    val = E(apply_J(J, l1), l2, l1) - E(l2, apply_J(J, _vadd(l1, l2)), l1)
    return torus.algebra.coerce(val) * Fraction(1, 16)


def u_term(E, l1, l2):
    """Integral-up-to-sixths part of beta' (depends on the basis order).

    For each a_ijk (i<j<k) with (a1,b1,c1) = (l1_i, l1_j, l1_k) and
    (a2,b2,c2) the same for l2, it contributes

        a_ijk/6 * (2 a1 b2 c2 - 3 a1 b1 c2 - 2 b1 a2 c2 + a1 c1 b2 - b1 c1 a2),

    chosen so that (du) + E/6 is integral.  The coefficients come from the
    cup-product formula for a degree-3 product of characters; variants with
    twelfths such as 5/12 do not pass the integrality test.
    """
    total = Fraction(0)
    for (i, j, k), a in E.coeffs.items():
        a1, b1, c1 = l1[i], l1[j], l1[k]
        a2, b2, c2 = l2[i], l2[j], l2[k]
        total += Fraction(a, 6) * (2 * a1 * b2 * c2 - 3 * a1 * b1 * c2 - 2 * b1 * a2 * c2
                                   + a1 * c1 * b2 - b1 * c1 * a2)
    return total


def r_term(torus, E, l1, l2):
    """r_{l1,l2} = (2 E(l1, il2, il1) + E(l2, il2, il1)) / 48, so that dr + k = E/6.

    Without the overall factor 1/48, dr + k - E/6 is not zero.
    """
    J = torus.J
    i1, i2 = apply_J(J, l1), apply_J(J, l2)
    return torus.algebra.coerce(2 * E(l1, i2, i1) + E(l2, i2, i1)) * Fraction(1, 48)


def beta_prime(torus, E, l1, l2):
    """beta' = u + r; (d beta') + k is integral."""
    _require_htb(torus, E)
    return r_term(torus, E, l1, l2) + u_term(E, l1, l2)


def gerbe_theta_exponent(torus, c, l1, l2, v):
    """1/2 B(l1,l2) + H_{l1,l2}(v) + beta'_{l1,l2} + i beta''_{l1,l2}."""
    spec = torus.algebra
    half_b = as_complex(c.B(l1, l2), spec) * HALF if c.B.coeffs else _C(spec, 0)
    return (half_b + H_exponent(torus, c.E, l1, l2, v)
            + _C(spec, beta_prime(torus, c.E, l1, l2), beta_double_prime(torus, c.E, l1, l2)))


def _gaussian(x):
    """Read a multiplier as (a, b) with x = a + b i, a, b rational."""
    if isinstance(x, tuple):
        return Fraction(x[0]), Fraction(x[1])
    if isinstance(x, ComplexElement):
        if not (x.re.is_rational() and x.im.is_rational()):
            raise ValueError("multipliers must be Gaussian rationals")
        return x.re.rational_value(), x.im.rational_value()
    if isinstance(x, complex):
        return Fraction(x.real).limit_denominator(), Fraction(x.imag).limit_denominator()
    return Fraction(x), Fraction(0)


def _times(J, x, lam):
    a, b = _gaussian(x)
    jl = apply_J(J, lam)
    return tuple(a * p + b * q for p, q in zip(lam, jl))


def helper_delta(torus, E, xs, l1, l2, l3):
    """d zeta for zeta_{l1,l2} = E(x1 l1 + x2 l2, x3 l1 + x4 l2, x5 l1 + x6 l2).

    Returns ``(direct, closed_form)``.  The closed form is

        E(x1 l1, (x5-x6) l2, x4 l3) + E(x3 l1, (x6-x5) l2, x2 l3)
      + E(x1 l1, (x4-x3) l2, x6 l3) + E(x5 l1, (x3-x4) l2, x2 l3)
      + E(x3 l1, (x1-x2) l2, x6 l3) + E(x5 l1, (x2-x1) l2, x4 l3)

    where a complex multiplier a + bi acts as a + bJ.  The overall coefficient
    is 1; doubling the closed form makes it disagree with the direct value.
    """
    J = torus.J
    spec = torus.algebra
    x = [_gaussian(t) for t in xs]
    sub = lambda p, q: (p[0] - q[0], p[1] - q[1])

    def zeta(a, b):
        return E(_vadd(_times(J, x[0], a), _times(J, x[1], b)),
                 _vadd(_times(J, x[2], a), _times(J, x[3], b)),
                 _vadd(_times(J, x[4], a), _times(J, x[5], b)))

    direct = zeta(l2, l3) - zeta(_vadd(l1, l2), l3) + zeta(l1, _vadd(l2, l3)) - zeta(l1, l2)
    x1, x2, x3, x4, x5, x6 = x
    closed = (E(_times(J, x1, l1), _times(J, sub(x5, x6), l2), _times(J, x4, l3))
              + E(_times(J, x3, l1), _times(J, sub(x6, x5), l2), _times(J, x2, l3))
              + E(_times(J, x1, l1), _times(J, sub(x4, x3), l2), _times(J, x6, l3))
              + E(_times(J, x5, l1), _times(J, sub(x3, x4), l2), _times(J, x2, l3))
              + E(_times(J, x3, l1), _times(J, sub(x1, x2), l2), _times(J, x6, l3))
              + E(_times(J, x5, l1), _times(J, sub(x2, x1), l2), _times(J, x4, l3)))
    return spec.coerce(direct), spec.coerce(closed)


def universal_psi_exponent(torus, l1, mu1, l2, mu2, v, B):
    """Exponent of the universal cocycle at ((l1,mu1),(l2,mu2)) and point (v, B)."""
    spec, J = torus.algebra, torus.J
    m1h = hodge_proj_2form(mu1, J)
    m2h = hodge_proj_2form(mu2, J)
    jv, j1 = apply_J(J, v), apply_J(J, l1)
    total = as_complex((B + m1h + m2h)(l1, l2), spec) * HALF
    total = total + as_complex(m2h(v, l1), spec).conj() * HALF
    total = total + _C(spec, 0, mu2(jv, l1) - mu2(v, j1)) * Fraction(-1, 4)
    total = total + _C(spec, mu2(v, l1) + mu2(jv, j1)) * Fraction(1, 4)
    total = total + _C(spec, 0, mu2(j1, l1) - mu2(l1, j1)) * Fraction(-1, 8)
    total = total + _C(spec, sigma_section(mu2)(l1, l1)) * HALF
    return total


def kappa_exponent(torus, mu, lam, v):
    """kappa(mu)_lambda(v); its coboundary differs from 1/2 mu^H by integers.

    The middle bracket enters with coefficient -1; scaling it by 1/2 breaks
    the trivialisation property.
    """
    spec, J = torus.algebra, torus.J
    M = type_11_part(mu, J)
    mh = hodge_proj_2form(mu, J)
    jv, jl = apply_J(J, v), apply_J(J, lam)
    bracket = (_C(spec, 0, M(jv, lam)) * (-HALF) + _C(spec, M(v, lam)) * HALF
               + _C(spec, 0, M(jl, lam)) * Fraction(-1, 4))
    return (_C(spec, sigma_section(mu)(lam, lam)) * HALF - bracket
            - as_complex(mh(v, lam), spec).conj() * HALF)


def pullback_isogeny(n, c):
    """Class data of n^* of the gerbe (B, E): (n^2 B, n^3 E)."""
    return GerbeClass(c.B * (n * n), c.E * (n ** 3))


def universal_topological_class(l1, l2, l3, mu1, mu2, mu3):
    """mu1(l2, l3) - mu2(l1, l3) + mu3(l1, l2)."""
    return mu1(l2, l3) - mu2(l1, l3) + mu3(l1, l2)
