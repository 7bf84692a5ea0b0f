"""Exact integer tensors and batched exact values.

The cocycle evaluators are multilinear, so each one is a short list of
coefficient tensors contracted with lattice vectors.  To evaluate hundreds of
samples quickly while staying exact, coefficients are stored as integer
numpy arrays over a common positive denominator.  Arithmetic uses ``int64``
whenever an a-priori bound shows it cannot overflow, and falls back to
Python integers (``dtype=object``) otherwise.

Algebra-valued tensors keep the algebra coordinates in the last axis, and
values in the complexified algebra use the last two axes ``(2, d)`` for
real/imaginary part.
"""

from fractions import Fraction
from math import gcd, lcm, prod

import numpy as np

from .exact_algebra import AlgebraElement, ComplexElement

_SAFE = 2 ** 62
_AXES = "ijklmopqrs"


def _maxabs(a):
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a.flat)
    return int(np.abs(a).max())


def _as_object(a):
    return a if a.dtype == object else a.astype(object)


def safe_einsum(subscripts, *operands):
    """``np.einsum`` over integers that cannot silently overflow."""
    inputs, output = subscripts.split("->")
    inputs = inputs.split(",")
    sizes = {}
    for letters, op in zip(inputs, operands):
        for ch, dim in zip(letters, op.shape):
            sizes[ch] = dim
    summed = set("".join(inputs)) - set(output)
    nterms = prod(sizes[ch] for ch in summed) if summed else 1
    bound = nterms
    for op in operands:
        bound *= _maxabs(op)
        if bound >= _SAFE:
            break
    if bound < _SAFE and all(op.dtype != object for op in operands):
        return np.einsum(subscripts, *[op.astype(np.int64, copy=False) for op in operands])
    return np.einsum(subscripts, *[_as_object(op) for op in operands], optimize=False)


def safe_matmul(a, b):
    """``a @ b`` for 2-d integer arrays, falling back to Python ints on overflow risk."""
    if (a.dtype != object and b.dtype != object
            and a.shape[1] * _maxabs(a) * _maxabs(b) < _SAFE):
        return a @ b
    return np.dot(_as_object(a), _as_object(b))


def batch_outer(a, b):
    """Row-wise outer product (N, p) x (N, q) -> (N, p*q), overflow-safe."""
    return _mul(a[:, :, None], b[:, None, :]).reshape(len(a), -1)


def _fit(a):
    """Downcast an object array to int64 when it is small enough."""
    if a.dtype == object and _maxabs(a) < _SAFE:
        return a.astype(np.int64)
    return a


def _mul(a, b):
    """Elementwise product with overflow protection (numpy broadcasting)."""
    if a.dtype != object and b.dtype != object and _maxabs(a) * _maxabs(b) < _SAFE:
        return a * b
    return _as_object(a) * _as_object(b)


def _add(a, b):
    if a.dtype != object and b.dtype != object and _maxabs(a) + _maxabs(b) < _SAFE:
        return a + b
    return _as_object(a) + _as_object(b)


class ExactTensor:
    """Integer array ``num`` divided by a positive integer ``den``."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = np.asarray(num)
        if num.dtype != object:
            num = num.astype(np.int64)
        den = int(den)
        if den <= 0:
            raise ValueError("denominator must be positive")
        g = gcd(den, *(int(x) for x in np.unique(num))) if num.size else den
        if g > 1:
            num = num // g
            den //= g
        self.num = _fit(num)
        self.den = den

    @property
    def shape(self):
        return self.num.shape

    @classmethod
    def from_fractions(cls, array):
        """Build from a (nested) array of Fractions or ints."""
        arr = np.asarray(array, dtype=object)
        den = lcm(1, *(Fraction(x).denominator for x in arr.flat))
        num = np.vectorize(lambda x: int(Fraction(x) * den), otypes=[object])(arr) if arr.size else arr
        return cls(num.astype(object), den)

    @classmethod
    def from_algebra_matrix(cls, matrix):
        """Algebra-valued matrix -> tensor of shape (rows, cols, d)."""
        return cls.from_fractions([[list(x.coords) for x in row] for row in matrix])

    @classmethod
    def real_unit(cls, ints, dim):
        """Integer array placed in the real unit coordinate of A_C."""
        ints = np.asarray(ints)
        num = np.zeros(ints.shape + (2, dim), dtype=ints.dtype if ints.dtype == object else np.int64)
        num[..., 0, 0] = ints
        return cls(num, 1)

    def scaled(self, q):
        q = Fraction(q)
        if q == 0:
            return ExactTensor(np.zeros_like(self.num), 1)
        return ExactTensor(_mul(self.num, np.array(q.numerator)), self.den * q.denominator)

    def __add__(self, other):
        if other == 0:
            return self
        L = lcm(self.den, other.den)
        a = _mul(self.num, np.array(L // self.den))
        b = _mul(other.num, np.array(L // other.den))
        return ExactTensor(_add(a, b), L)

    __radd__ = __add__

    def __neg__(self):
        return ExactTensor(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (isinstance(other, ExactTensor) and self.den == other.den
                and self.num.shape == other.num.shape and bool(np.all(self.num == other.num)))

    def times_i(self):
        """Multiply a complex-valued tensor (last axes (2, d)) by i."""
        num = np.empty_like(self.num)
        num[..., 0, :] = -self.num[..., 1, :]
        num[..., 1, :] = self.num[..., 0, :]
        return ExactTensor(num, self.den)

    def conj(self):
        num = self.num.copy()
        num[..., 1, :] = -num[..., 1, :]
        return ExactTensor(num, self.den)

    def transpose(self, axes):
        """Permute the leading (non-value) axes."""
        k = len(axes)
        rest = tuple(range(k, self.num.ndim))
        return ExactTensor(np.transpose(self.num, tuple(axes) + rest), self.den)


def algebra_coords(vec, spec):
    """Integer coordinates (k, d) and common denominator of a vector over A."""
    d = spec.dim
    rows = []
    for x in vec:
        if isinstance(x, AlgebraElement):
            rows.append(x.coords)
        else:
            rows.append((Fraction(x),) + (Fraction(0),) * (d - 1))
    den = lcm(1, *(Fraction(c).denominator for row in rows for c in row))
    num = np.array([[int(c * den) for c in row] for row in rows], dtype=object)
    return _fit(num), den


_MULT_CACHE = {}


def mult_array(spec):
    """``(num, den)`` of the multiplication tensor, cached per algebra."""
    hit = _MULT_CACHE.get(id(spec))
    if hit is None or hit[0] is not spec:
        t = mult_tensor(spec)
        hit = (spec, t.num, t.den)
        _MULT_CACHE[id(spec)] = hit
    return hit[1], hit[2]


def mult_tensor(spec):
    """Multiplication table of the algebra as an ExactTensor (d, d, d)."""
    return ExactTensor.from_fractions([[list(spec.mult_table[a][b]) for b in range(spec.dim)]
                                       for a in range(spec.dim)])


def apply_matrix_on_axis(t, axis, J, mult):
    """Contract axis ``axis`` of the complex tensor ``t`` with an algebra matrix.

    Realises ``E(.., J x, ..)``: the new entry at index ``p`` is
    ``sum_i t[.., i, ..] * J[i, p]`` with the algebra product on the value axis.
    ``t`` has shape ``(k_0, ..., k_r, 2, d)``; ``J`` has shape ``(n, n, d)``.
    """
    letters = _AXES[:t.num.ndim - 2]
    out = letters.replace(letters[axis], "n")
    num = safe_einsum(f"{letters}zx,{letters[axis]}ny,xyw->{out}zw", t.num, J.num, mult.num)
    return ExactTensor(num, t.den * J.den * mult.den)


class RationalBatch:
    """N rational vectors of length k: ``num`` (N, k) over ``den`` (N,)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = np.asarray(num)
        self.den = np.asarray(den)

    @classmethod
    def from_vectors(cls, vectors):
        rows = [[Fraction(x) for x in v] for v in vectors]
        dens = [lcm(1, *(x.denominator for x in row)) for row in rows]
        num = np.array([[int(x * d) for x in row] for row, d in zip(rows, dens)], dtype=object)
        den = np.array(dens, dtype=object)
        return cls(_fit(num), _fit(den))

    @classmethod
    def from_integers(cls, ints):
        ints = np.asarray(ints)
        return cls(ints, np.ones(len(ints), dtype=ints.dtype))

    def __len__(self):
        return len(self.den)

    def translate(self, lattice):
        """Add an integer batch (N, k) sample-wise."""
        shift = _mul(np.asarray(lattice), self.den[:, None])
        return RationalBatch(_add(self.num, shift), self.den)

    def scaled(self, n):
        return RationalBatch(_mul(self.num, np.array(int(n))), self.den)

    def __add__(self, other):
        L = np.lcm(self.den, other.den)
        a = _mul(self.num, (L // self.den)[:, None])
        b = _mul(other.num, (L // other.den)[:, None])
        return RationalBatch(_add(a, b), L)

    def vector(self, k):
        return tuple(Fraction(int(x), int(self.den[k])) for x in self.num[k])

    def take(self, idx):
        return RationalBatch(self.num[idx], self.den[idx])


class ComplexBatch:
    """N exact values (or arrays of values) in A_C.

    ``num`` has shape (N, *shape, 2, d) and ``den`` shape (N,); sample ``k``
    equals ``num[k] / den[k]``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    @classmethod
    def zeros(cls, count, dim, shape=()):
        return cls(np.zeros((count,) + tuple(shape) + (2, dim), dtype=np.int64),
                   np.ones(count, dtype=np.int64))

    @classmethod
    def from_elements(cls, values, dim):
        """From a list of ComplexElement (or arrays of them, as nested lists)."""
        arr = np.asarray(values, dtype=object)
        shape = arr.shape
        flat = arr.reshape(shape[0], -1) if arr.ndim > 1 else arr.reshape(shape[0], 1)
        nums, dens = [], []
        for row in flat:
            coords = []
            for z in row:
                if isinstance(z, AlgebraElement):
                    coords.append((z.coords, (0,) * dim))
                elif isinstance(z, ComplexElement):
                    coords.append((z.re.coords, z.im.coords))
                else:
                    coords.append(((Fraction(z),) + (0,) * (dim - 1), (0,) * dim))
            den = lcm(1, *(Fraction(c).denominator for pair in coords for part in pair for c in part))
            nums.append([[[int(Fraction(c) * den) for c in part] for part in pair] for pair in coords])
            dens.append(den)
        num = np.array(nums, dtype=object).reshape(shape + (2, dim))
        return cls(_fit(num), _fit(np.array(dens, dtype=object)))

    def __len__(self):
        return len(self.den)

    @property
    def dim(self):
        return self.num.shape[-1]

    def _bcast_den(self, den):
        return den.reshape((-1,) + (1,) * (self.num.ndim - 1))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        L = np.lcm(self.den, other.den)
        a = _mul(self.num, self._bcast_den(L // self.den))
        b = _mul(other.num, other._bcast_den(L // other.den))
        return ComplexBatch(_add(a, b), L)._reduced()

    __radd__ = __add__

    def __neg__(self):
        return ComplexBatch(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, q):
        q = Fraction(q)
        num = _mul(self.num, np.array(q.numerator))
        den = _mul(self.den, np.array(q.denominator))
        return ComplexBatch(num, den)._reduced()

    def _reduced(self):
        num, den = self.num, self.den
        flat = num.reshape(len(den), -1)
        g = np.gcd.reduce(np.concatenate([flat, den[:, None]], axis=1).astype(flat.dtype), axis=1)
        g = np.where(g == 0, 1, g)
        if np.all(g == 1):
            return self
        return ComplexBatch(_fit(num // self._bcast_den(g)), _fit(den // g))

    def is_integer(self):
        """Boolean mask: sample is an integer (scalar batches only)."""
        num, den = self.num, self.den
        imag_zero = np.all(num[:, 1, :] == 0, axis=1)
        irr_zero = np.all(num[:, 0, 1:] == 0, axis=1)
        unit_int = (num[:, 0, 0] % den) == 0
        return imag_zero & irr_zero & unit_int

    def is_zero(self):
        return np.all(self.num.reshape(len(self.den), -1) == 0, axis=1)

    def equals(self, other):
        """Boolean mask of sample-wise exact equality."""
        return (self - other).is_zero()

    def element(self, k, index=()):
        """Rational coordinates ``[re, im]`` of sample ``k`` at array position ``index``."""
        entry = self.num[(k,) + tuple(index)]
        den = int(self.den[k])
        return [[Fraction(int(x), den) for x in part] for part in entry]

    def take(self, idx):
        return ComplexBatch(self.num[idx], self.den[idx])


def complex_batch_element(batch, k, spec, index=()):
    """Convert one entry of a ComplexBatch into a ComplexElement of ``spec``."""
    re, im = batch.element(k, index)
    return ComplexElement(AlgebraElement(spec, re), AlgebraElement(spec, im))


def stack_batches(batches):
    """Concatenate ComplexBatch objects sample-wise."""
    dens = [b.den for b in batches]
    nums = [b.num for b in batches]
    obj = any(x.dtype == object for x in nums + dens)
    if obj:
        nums = [_as_object(x) for x in nums]
        dens = [_as_object(x) for x in dens]
    return ComplexBatch(np.concatenate(nums), np.concatenate(dens))
