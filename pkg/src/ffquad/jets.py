"""Truncated Taylor-series (jet) arithmetic for exact high-order derivatives.

A `Jet` stores the coefficients (f(a), f'(a), f''(a)/2!, …) of a function
expanded at a point, truncated at a fixed order.  Arithmetic on jets then
*is* automatic differentiation: feed `variable(a, order)` through a formula
and read derivatives off the result.  Coefficients may be any scalar type
supporting field operations (mpmath mpf/mpc, float, complex, Fraction); the
transcendental heads (exp/log/sin/cos of the constant term) go through
mpmath unless the head is itself a Jet.

Jets nest: a Jet whose coefficients are Jets differentiates in two variables
at once (`variable2`).  Every jet carries its nesting `level`, and mixed
operations lift the lower-level operand to a constant of the higher level —
without this, an inner jet would be mistaken for an outer one and the two
directions of differentiation would be silently conflated.
"""

from __future__ import annotations

import math

import mpmath as mp

__all__ = ["Jet", "variable", "variable2", "derivatives", "partial"]


def _const_like(proto, c):
    """Embed c (a scalar or lower-level jet) as a constant shaped like proto."""
    if isinstance(c, Jet) and isinstance(proto, Jet) and c.level == proto.level:
        if c.order != proto.order:
            raise ValueError("jet orders differ")
        return c
    if isinstance(proto, Jet):
        head = _const_like(proto.coeffs[0], c)
        zero = head * 0
        return Jet((head,) + (zero,) * proto.order)
    return proto * 0 + c


def _inv_scalar(x):
    return x.reciprocal() if isinstance(x, Jet) else 1 / x


def _exp_scalar(x):
    return x.exp() if isinstance(x, Jet) else mp.exp(x)


def _log_scalar(x):
    return x.log() if isinstance(x, Jet) else mp.log(x)


def _sin_scalar(x):
    return x.sin() if isinstance(x, Jet) else mp.sin(x)


def _cos_scalar(x):
    return x.cos() if isinstance(x, Jet) else mp.cos(x)


class Jet:
    """Taylor coefficients (c₀, …, c_order) of a function at a point."""

    __slots__ = ("coeffs", "level")

    def __init__(self, coeffs):
        self.coeffs = tuple(coeffs)
        if not self.coeffs:
            raise ValueError("a jet needs at least the constant term")
        head = self.coeffs[0]
        self.level = head.level + 1 if isinstance(head, Jet) else 1

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self) -> str:
        return f"Jet({list(self.coeffs)!r})"

    def _pair(self, other) -> tuple["Jet", "Jet"]:
        """(self-as-jet, other-as-jet) lifted to a common level, roles kept."""
        if isinstance(other, Jet):
            if other.level == self.level:
                if other.order != self.order:
                    raise ValueError("jet orders differ")
                return self, other
            if other.level > self.level:
                return _const_like(other, self), other
        return self, _const_like(self, other)

    # -- ring structure ----------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        return Jet(x + y for x, y in zip(a.coeffs, b.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Jet(-a for a in self.coeffs)

    def __sub__(self, other):
        a, b = self._pair(other)
        return Jet(x - y for x, y in zip(a.coeffs, b.coeffs))

    def __rsub__(self, other):
        a, b = self._pair(other)
        return Jet(y - x for x, y in zip(a.coeffs, b.coeffs))

    def __mul__(self, other):
        a, b = self._pair(other)
        n = a.order
        out = []
        for k in range(n + 1):
            acc = a.coeffs[0] * b.coeffs[k]
            for i in range(1, k + 1):
                acc = acc + a.coeffs[i] * b.coeffs[k - i]
            out.append(acc)
        return Jet(out)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        inv0 = _inv_scalar(self.coeffs[0])
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = self.coeffs[1] * out[k - 1]
            for i in range(2, k + 1):
                acc = acc + self.coeffs[i] * out[k - i]
            out.append(-(inv0 * acc))
        return Jet(out)

    def __truediv__(self, other):
        a, b = self._pair(other)
        return a * b.reciprocal()

    def __rtruediv__(self, other):
        a, b = self._pair(other)
        return b * a.reciprocal()

    def __pow__(self, e):
        if isinstance(e, int):
            if e < 0:
                return self.reciprocal() ** (-e)
            result = _const_like(self, 1)
            base = self
            while e:
                if e & 1:
                    result = result * base
                base = base * base
                e >>= 1
            return result
        return (self.log() * e).exp()

    # -- analytic functions via the nilpotent tail -------------------------

    def _tail(self) -> "Jet":
        """The nilpotent part: same jet with the constant term zeroed."""
        zero = self.coeffs[0] * 0
        return Jet((zero,) + self.coeffs[1:])

    def _tail_series(self, terms) -> "Jet":
        """Σ terms[k] · tail^k (terms[k] are plain scalars)."""
        t = self._tail()
        acc = _const_like(self, terms[0])
        p = _const_like(self, 1)
        for c in terms[1:]:
            p = p * t
            acc = acc + p * c
        return acc

    def exp(self) -> "Jet":
        terms, f = [], 1
        for k in range(self.order + 1):
            f = f * (k or 1)
            terms.append(1 / mp.mpf(f))
        return self._tail_series(terms) * _exp_scalar(self.coeffs[0])

    def log(self) -> "Jet":
        h = self.coeffs[0]
        inv_h = _inv_scalar(h)
        # log(h + t) = log h + Σ_k (−1)^(k+1) (t/h)^k / k
        scaled = Jet((h * 0,) + tuple(c * inv_h for c in self.coeffs[1:]))
        terms = [mp.mpf(0)] + [
            mp.mpf((-1) ** (k + 1)) / k for k in range(1, self.order + 1)
        ]
        return scaled._tail_series(terms) + _log_scalar(h)

    def _sin_cos_tail(self) -> tuple["Jet", "Jet"]:
        sin_terms, cos_terms, f = [], [], 1
        for k in range(self.order + 1):
            f = f * (k or 1)
            c = 1 / mp.mpf(f)
            if k % 2 == 0:
                sin_terms.append(c * 0)
                cos_terms.append(c if k % 4 == 0 else -c)
            else:
                cos_terms.append(c * 0)
                sin_terms.append(c if k % 4 == 1 else -c)
        return self._tail_series(sin_terms), self._tail_series(cos_terms)

    def sin(self) -> "Jet":
        h = self.coeffs[0]
        sin_t, cos_t = self._sin_cos_tail()
        return sin_t * _cos_scalar(h) + cos_t * _sin_scalar(h)

    def cos(self) -> "Jet":
        h = self.coeffs[0]
        sin_t, cos_t = self._sin_cos_tail()
        return cos_t * _cos_scalar(h) - sin_t * _sin_scalar(h)

    def sqrt(self) -> "Jet":
        return self ** mp.mpf("0.5")


def variable(value, order: int) -> Jet:
    """The identity function expanded at `value`, truncated at `order`."""
    if order == 0:
        return Jet((value,))
    zero = value * 0
    return Jet((value, zero + 1) + (zero,) * (order - 1))


def variable2(x0, y0, order: int = 2) -> tuple[Jet, Jet]:
    """Nested jets (X, Y) for two-variable differentiation at (x0, y0).

    Feed a formula (X, Y); then `partial(result, i, j)` is ∂_x^i ∂_y^j.
    """
    y_var = variable(y0, order)
    x_lift = _const_like(y_var, x0)
    inner_one = _const_like(y_var, 1)
    inner_zero = inner_one * 0
    X = Jet((x_lift, inner_one) + (inner_zero,) * (order - 1))
    Y = Jet((y_var,) + (inner_zero,) * order)
    return X, Y


def derivatives(jet: Jet) -> list:
    """[f(a), f'(a), f''(a), …] — Taylor coefficients rescaled by k!."""
    out, f = [], 1
    for k, c in enumerate(jet.coeffs):
        f = f * (k or 1)
        out.append(c * f)
    return out


def partial(jet: Jet, i: int, j: int):
    """Mixed partial ∂_x^i ∂_y^j from a nested jet built on `variable2`."""
    return jet.coeffs[i].coeffs[j] * (math.factorial(i) * math.factorial(j))
