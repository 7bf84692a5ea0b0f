"""Coefficient tensors of basis forms and their J-twisted versions.

Both the rank computations and the fast cocycle evaluators need expressions
such as ``E(J x, J y, z)`` for every basis form at once.  This module builds
them as exact tensors: axis 0 runs over basis forms (sorted index tuples),
the next ``p`` axes are the form's slots, and the last two axes hold the
complex algebra value.
"""

from functools import cached_property
from itertools import permutations

import numpy as np

from .alt_forms import index_tuples, permutation_sign
from .tensors import ExactTensor, apply_matrix_on_axis, mult_tensor


def _basis_forms(n, p, dim):
    tuples = index_tuples(n, p)
    num = np.zeros((len(tuples),) + (n,) * p + (2, dim), dtype=np.int64)
    for u, idx in enumerate(tuples):
        for perm in permutations(range(p)):
            num[(u,) + tuple(idx[k] for k in perm) + (0, 0)] = permutation_sign(perm)
    return ExactTensor(num, 1)


def _upper_forms(n, p, dim):
    tuples = index_tuples(n, p)
    num = np.zeros((len(tuples),) + (n,) * p + (2, dim), dtype=np.int64)
    for u, idx in enumerate(tuples):
        num[(u,) + idx + (0, 0)] = 1
    return ExactTensor(num, 1)


class FormTensors:
    """Cached tensors attached to one torus."""

    def __init__(self, torus):
        self.torus = torus
        self.n = torus.n
        self.dim = torus.algebra.dim
        self.J = torus.j_tensor
        self.mult = mult_tensor(torus.algebra)

    def with_j(self, t, axes):
        """Apply J in each listed slot: ``t(.., J x_a, .., J x_b, ..)``."""
        for ax in axes:
            t = apply_matrix_on_axis(t, ax, self.J, self.mult)
        return t

    @cached_property
    def pairs(self):
        return index_tuples(self.n, 2)

    @cached_property
    def triples(self):
        return index_tuples(self.n, 3)

    @cached_property
    def basis2(self):
        """(m, n, n, 2, d): the basis 2-forms e_i* ^ e_j*, i<j."""
        return _basis_forms(self.n, 2, self.dim)

    @cached_property
    def basis3(self):
        return _basis_forms(self.n, 3, self.dim)

    @cached_property
    def upper2(self):
        """(m, n, n, 2, d) with a single 1 at the sorted position: realises sigma."""
        return _upper_forms(self.n, 2, self.dim)

    @cached_property
    def hodge2(self):
        """(m, n, n, 2, d): Hodge projections (e_i* ^ e_j*)^H as full tensors."""
        w = self.basis2
        w11 = self.with_j(w, (1, 2))
        w10 = self.with_j(w, (1,))
        w01 = self.with_j(w, (2,))
        return ((w - w11) + (w10 + w01).times_i()).scaled("1/4")

    @cached_property
    def hodge2_sorted(self):
        """(m, m', 2, d): coefficient of mu^H on sorted pair m' for mu = basis m."""
        rows, cols = zip(*self.pairs)
        return ExactTensor(self.hodge2.num[:, list(rows), list(cols)], self.hodge2.den)

    @cached_property
    def type11_2(self):
        """(m, n, n, 2, d): the (1,1) parts (w + w(J,J)) / 2 of the basis 2-forms."""
        return (self.basis2 + self.with_j(self.basis2, (1, 2))).scaled("1/2")

    @cached_property
    def ns_defect(self):
        """(m, n, n, 2, d): w(J., J.) - w for every basis 2-form w."""
        return self.with_j(self.basis2, (1, 2)) - self.basis2

    @cached_property
    def htb_defect(self):
        """(u, n, n, n, 2, d): p12_21(E) - E for every basis 3-form E."""
        e = self.basis3
        proj = self.with_j(e, (1, 2)) + self.with_j(e, (2, 3)) + self.with_j(e, (1, 3))
        return proj - e


_CACHE = {}


def tensors_for(torus):
    """Shared :class:`FormTensors` for a torus (cached by identity)."""
    key = id(torus)
    hit = _CACHE.get(key)
    if hit is None or hit.torus is not torus:
        hit = FormTensors(torus)
        if len(_CACHE) > 64:
            _CACHE.clear()
        _CACHE[key] = hit
    return hit
