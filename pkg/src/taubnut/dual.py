"""Forward-mode automatic differentiation with dual numbers.

A ``Dual`` carries a value and a derivative. Both may be real, complex, or
themselves ``Dual`` (nesting gives higher derivatives), so the elementary
functions below dispatch on the argument type instead of calling ``math``
directly.
"""

import cmath
import math

__all__ = [
    "Dual",
    "primal",
    "sqrt",
    "exp",
    "cos",
    "sin",
    "acos",
    "derivative",
    "second_derivative",
    "partials",
]


class Dual:
    __slots__ = ("val", "der")

    def __init__(self, val, der=0.0):
        self.val = val
        self.der = der

    def __repr__(self):
        return f"Dual({self.val!r}, {self.der!r})"

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.der + other.der)
        return Dual(self.val + other, self.der)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.der - other.der)
        return Dual(self.val - other, self.der)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.der)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val, self.val * other.der + self.der * other.val)
        return Dual(self.val * other, self.der * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            q = self.val / other.val
            return Dual(q, (self.der - q * other.der) / other.val)
        return Dual(self.val / other, self.der / other)

    def __rtruediv__(self, other):
        q = other / self.val
        return Dual(q, -q * self.der / self.val)

    def __pow__(self, n):
        if isinstance(n, Dual):
            raise TypeError("Dual exponent not supported")
        if n == 0:
            return Dual(self.val ** 0, 0.0 * self.der)
        return Dual(self.val**n, n * self.val ** (n - 1) * self.der)

    def conjugate(self):
        return Dual(_conj(self.val), _conj(self.der))


def _conj(x):
    return x.conjugate() if hasattr(x, "conjugate") else x


def primal(x):
    """Innermost value of a (possibly nested) dual number."""
    while isinstance(x, Dual):
        x = x.val
    return x


def sqrt(x):
    if isinstance(x, Dual):
        s = sqrt(x.val)
        return Dual(s, x.der / (2 * s))
    if isinstance(x, complex):
        return cmath.sqrt(x)
    return math.sqrt(x)


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.val)
        return Dual(e, e * x.der)
    if isinstance(x, complex):
        return cmath.exp(x)
    return math.exp(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(cos(x.val), -sin(x.val) * x.der)
    if isinstance(x, complex):
        return cmath.cos(x)
    return math.cos(x)


def sin(x):
    if isinstance(x, Dual):
        return Dual(sin(x.val), cos(x.val) * x.der)
    if isinstance(x, complex):
        return cmath.sin(x)
    return math.sin(x)


def acos(x):
    if isinstance(x, Dual):
        return Dual(acos(x.val), -x.der / sqrt(1 - x.val * x.val))
    if isinstance(x, complex):
        return cmath.acos(x)
    return math.acos(x)


def _der(y):
    return y.der if isinstance(y, Dual) else 0.0


def derivative(f, x):
    """df/dx at a scalar x."""
    return _der(f(Dual(x, 1.0)))


def second_derivative(f, x):
    """d2f/dx2 at a scalar x via a dual number nested in a dual number."""
    y = f(Dual(Dual(x, 1.0), Dual(1.0, 0.0)))
    return _der(y.der) if isinstance(y, Dual) else 0.0


def partials(f, *args):
    """Gradient of f(*args) with respect to each positional argument."""
    out = []
    for i in range(len(args)):
        lifted = [Dual(a, 1.0 if j == i else 0.0) for j, a in enumerate(args)]
        out.append(_der(f(*lifted)))
    return tuple(out)
