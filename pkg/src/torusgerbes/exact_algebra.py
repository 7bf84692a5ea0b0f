"""Exact arithmetic in a finite-dimensional commutative Q-algebra.

An algebra is declared by a multiplication table on a basis whose first
element is the unit, e.g. Q(sqrt2, sqrt3) with basis ``1, s2, s3, s6``.
Elements are coordinate vectors of :class:`fractions.Fraction`.  The
complexification ``A_C = A + iA`` is modelled by :class:`ComplexElement`.

Plain ``int`` and ``Fraction`` values mix freely with both element types and
are read as rational multiples of the unit.
"""

from fractions import Fraction
from numbers import Rational

from .errors import NotInvertible, SpecMismatch, ValidationError
from .linalg import solve_rational


def to_fraction(value):
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational")


def format_fraction(q):
    """Render a rational as ``"p/q"`` (or ``"p"`` for integers)."""
    return str(Fraction(q))


class AlgebraSpec:
    """Multiplication table of a commutative Q-algebra with unit ``e_0``.

    ``mult_table[a][b]`` is the coordinate vector of ``e_a * e_b``.  The
    table is checked for the unit law, commutativity and associativity on
    all basis triples when the spec is built.
    """

    def __init__(self, basis_names, mult_table, real_embedding=None):
        self.basis_names = tuple(str(n) for n in basis_names)
        self.dim = d = len(self.basis_names)
        if d == 0:
            raise ValidationError("algebra must have at least one basis element", "dim")
        table = []
        for a in range(d):
            if len(mult_table[a]) != d:
                raise ValidationError(f"mult_table row {a} has wrong length", "mult_table shape")
            row = []
            for b in range(d):
                coords = tuple(to_fraction(c) for c in mult_table[a][b])
                if len(coords) != d:
                    raise ValidationError(f"mult_table[{a}][{b}] has wrong length", "mult_table shape")
                row.append(coords)
            table.append(tuple(row))
        self.mult_table = tuple(table)
        # sparse form: for each (a, b) the nonzero (c, coefficient) pairs
        self._sparse = [[[(c, v) for c, v in enumerate(table[a][b]) if v] for b in range(d)]
                        for a in range(d)]
        self.real_embedding = None if real_embedding is None else tuple(real_embedding)
        if self.real_embedding is not None and len(self.real_embedding) != d:
            raise ValidationError("real_embedding must have one value per basis element",
                                  "real_embedding shape")
        self._check_axioms()

    def _check_axioms(self):
        d = self.dim
        for b in range(d):
            e_b = tuple(Fraction(int(k == b)) for k in range(d))
            if self.mult_table[0][b] != e_b or self.mult_table[b][0] != e_b:
                raise ValidationError(f"basis element 0 is not a unit for e_{b}", "unit")
        for a in range(d):
            for b in range(d):
                if self.mult_table[a][b] != self.mult_table[b][a]:
                    raise ValidationError(f"mult_table not commutative at ({a},{b})",
                                          "commutativity")
        for a in range(d):
            for b in range(d):
                for c in range(d):
                    left = self._mul(self.mult_table[a][b], self._basis(c))
                    right = self._mul(self._basis(a), self.mult_table[b][c])
                    if left != right:
                        raise ValidationError(
                            f"mult_table not associative at ({a},{b},{c})", "associativity")

    def _basis(self, k):
        return tuple(Fraction(int(i == k)) for i in range(self.dim))

    def _mul(self, x, y):
        out = [Fraction(0)] * self.dim
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                p = xa * yb
                for c, v in self._sparse[a][b]:
                    out[c] += p * v
        return tuple(out)

    # construction helpers
    def element(self, coords):
        return AlgebraElement(self, coords)

    def zero(self):
        return AlgebraElement(self, (0,) * self.dim)

    def one(self):
        return self.rational(1)

    def rational(self, q):
        coords = [0] * self.dim
        coords[0] = to_fraction(q)
        return AlgebraElement(self, coords)

    def basis(self, k):
        return AlgebraElement(self, self._basis(k))

    def coerce(self, x):
        """Return ``x`` as an element of this algebra (ints/Fractions allowed)."""
        if isinstance(x, AlgebraElement):
            if x.spec is not self and x.spec != self:
                raise SpecMismatch("elements belong to different algebras")
            return x
        return self.rational(x)

    def _key(self):
        return (self.basis_names, self.mult_table)

    def __eq__(self, other):
        return isinstance(other, AlgebraSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"AlgebraSpec({list(self.basis_names)})"


def rational_algebra():
    """The algebra Q itself (dimension one)."""
    return AlgebraSpec(["1"], [[[1]]])


def quadratic_algebra(name, square):
    """Q(sqrt m) with basis ``1, name`` where ``name**2 = square``."""
    return AlgebraSpec(["1", name], [[[1, 0], [0, 1]], [[0, 1], [square, 0]]])


def _same_spec(a, b):
    if a is not b and a != b:
        raise SpecMismatch("elements belong to different algebras")


class AlgebraElement:
    """Immutable element of an algebra, stored by rational coordinates."""

    __slots__ = ("spec", "coords")

    def __init__(self, spec, coords):
        coords = tuple(to_fraction(c) for c in coords)
        if len(coords) != spec.dim:
            raise ValidationError(f"expected {spec.dim} coordinates, got {len(coords)}",
                                  "coordinate length")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    def _other(self, other):
        if isinstance(other, AlgebraElement):
            _same_spec(self.spec, other.spec)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.spec.rational(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return AlgebraElement(self.spec, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return AlgebraElement(self.spec, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return AlgebraElement(self.spec, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return AlgebraElement(self.spec, [a * other for a in self.coords])
        if isinstance(other, AlgebraElement):
            return alg_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return AlgebraElement(self.spec, [a / other for a in self.coords])
        if isinstance(other, AlgebraElement):
            return alg_mul(self, alg_inv(other))
        return NotImplemented

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        if all(c == 0 for c in self.coords[1:]):
            return hash(self.coords[0])
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def is_rational(self):
        """True when the element lies in Q times the unit."""
        return all(c == 0 for c in self.coords[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def approx(self):
        """Float value via the display-only real embedding, if declared."""
        emb = self.spec.real_embedding
        if emb is None:
            if self.is_rational():
                return float(self.coords[0])
            raise ValueError("algebra has no real_embedding")
        return sum(float(c) * float(e) for c, e in zip(self.coords, emb))

    def __repr__(self):
        return f"AlgebraElement({self})"

    def __str__(self):
        parts = []
        for name, c in zip(self.spec.basis_names, self.coords):
            if not c:
                continue
            if name == "1":
                parts.append(format_fraction(c))
            elif c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{format_fraction(c)}*{name}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def alg_mul(a, b):
    """Product of two algebra elements through the multiplication table."""
    _same_spec(a.spec, b.spec)
    return AlgebraElement(a.spec, a.spec._mul(a.coords, b.coords))


def multiplication_matrix(a):
    """Matrix of ``x -> a*x`` in the algebra basis (columns are a*e_b)."""
    spec = a.spec
    cols = [spec._mul(a.coords, spec._basis(b)) for b in range(spec.dim)]
    return [[cols[b][c] for b in range(spec.dim)] for c in range(spec.dim)]


def alg_inv(a):
    """Inverse of ``a``, found by solving the linear system ``a*x = 1``."""
    spec = a.spec
    sol = solve_rational(multiplication_matrix(a), spec._basis(0))
    if sol is None:
        raise NotInvertible(f"{a} is not invertible")
    return AlgebraElement(spec, sol)


class ComplexElement:
    """Element ``re + i*im`` of the complexified algebra."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        if isinstance(re, ComplexElement):
            raise TypeError("nested ComplexElement")
        if not isinstance(re, AlgebraElement):
            if not isinstance(im, AlgebraElement):
                raise TypeError("ComplexElement needs at least one AlgebraElement part")
            re = im.spec.coerce(re)
        if im is None:
            im = re.spec.zero()
        else:
            im = re.spec.coerce(im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexElement is immutable")

    @property
    def spec(self):
        return self.re.spec

    @classmethod
    def zero(cls, spec):
        return cls(spec.zero(), spec.zero())

    @classmethod
    def i(cls, spec):
        return cls(spec.zero(), spec.one())

    def _other(self, other):
        if isinstance(other, ComplexElement):
            _same_spec(self.spec, other.spec)
            return other
        if isinstance(other, AlgebraElement) or (
                isinstance(other, (int, Fraction)) and not isinstance(other, bool)):
            return ComplexElement(self.spec.coerce(other), self.spec.zero())
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return ComplexElement(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return ComplexElement(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return ComplexElement(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ComplexElement(self.re * other, self.im * other)
        if isinstance(other, AlgebraElement):
            return ComplexElement(self.re * other, self.im * other)
        o = self._other(other)
        if o is None:
            return NotImplemented
        return ComplexElement(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, AlgebraElement)) and not isinstance(other, bool):
            return ComplexElement(self.re / other, self.im / other)
        return NotImplemented

    def conj(self):
        return ComplexElement(self.re, -self.im)

    def times_i(self):
        return ComplexElement(-self.im, self.re)

    def norm_squared(self):
        """``(a+bi)(a-bi) = a^2 + b^2`` as an algebra element."""
        return self.re * self.re + self.im * self.im

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re.coords, self.im.coords))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def approx(self):
        return complex(self.re.approx(), self.im.approx())

    def __repr__(self):
        return f"ComplexElement({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = str(self.im)
        im = f"({im})*i" if (" " in im or "*" in im) else f"{im}*i"
        if not self.re:
            return im
        return f"{self.re} + {im}"


def as_complex(x, spec):
    """Lift an int, Fraction, AlgebraElement or ComplexElement into A_C."""
    if isinstance(x, ComplexElement):
        _same_spec(x.spec, spec)
        return x
    return ComplexElement(spec.coerce(x), spec.zero())


def is_integer(z):
    """Return ``(True, n)`` when ``z`` is the integer ``n``, else ``(False, None)``.

    Accepts ComplexElement, AlgebraElement, Fraction or int.
    """
    if isinstance(z, ComplexElement):
        if z.im:
            return False, None
        z = z.re
    if isinstance(z, AlgebraElement):
        if not z.is_rational():
            return False, None
        z = z.coords[0]
    z = Fraction(z)
    if z.denominator != 1:
        return False, None
    return True, z.numerator
