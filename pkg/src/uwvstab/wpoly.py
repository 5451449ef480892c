"""Polynomial algebra in the SO(2) invariants w1, w2, w3, w4.

The diagonal rotation action on (Q1, P1, Q2, P2) has the quadratic
invariants

    w1 = (Q1^2 + P1^2)/2,  w2 = (Q2^2 + P2^2)/2,
    w3 = (Q1 Q2 - P1 P2)/sqrt(2),  w4 = (Q1 P2 + Q2 P1)/sqrt(2),

subject to the single relation 2 w1 w2 - w3^2 - w4^2 = 0.  Polynomials in
the invariants are kept in the canonical form with the w3-exponent
reduced to 0 or 1 via w3^2 = 2 w1 w2 - w4^2; values on the relation
variety are unchanged by the reduction.

Coefficients may be floats or exact elements of Q[sqrt(2)] (QSqrt2);
sqrt(2) enters because the invariant expressions for the chart functions
carry it.  All operations work uniformly over either coefficient type.

The Poisson bracket the invariants inherit closes on themselves:

    {w1, w3} = w4,   {w1, w4} = -w3,
    {w2, w3} = w4,   {w2, w4} = -w3,   {w3, w4} = -(w1 + w2),

and {w1, w2} = 0.  With these signs {., H2} for H2 = om1 w1 - om2 w2 is
the rotation (om1 - om2)(-w4 d/dw3 + w3 d/dw4), whose kernel on
canonical-form polynomials is exactly the polynomials in (w1, w2).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Key = tuple[int, int, int, int]


class QSqrt2:
    """Exact number a + b*sqrt(2) with rational a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _coerce(x) -> "QSqrt2":
        if isinstance(x, QSqrt2):
            return x
        return QSqrt2(x)

    def __add__(self, other):
        o = self._coerce(other)
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return QSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        return QSqrt2(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        return QSqrt2(self.a * o.a + 2 * self.b * o.b,
                      self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        den = o.a * o.a - 2 * o.b * o.b
        return self * QSqrt2(o.a / den, -o.b / den)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __eq__(self, other):
        o = self._coerce(other)
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        return float(self.a) + float(self.b) * 1.4142135623730951

    def __repr__(self):
        return f"QSqrt2({self.a}, {self.b})"


SQRT2 = QSqrt2(0, 1)


def _reduce(terms: Mapping[Key, object]) -> dict[Key, object]:
    """Canonicalize: rewrite w3^2 -> 2 w1 w2 - w4^2 until every w3
    exponent is 0 or 1, dropping zero coefficients."""
    out: dict[Key, object] = {}
    stack = list(terms.items())
    while stack:
        (a, b, c, e), co = stack.pop()
        if not co:
            continue
        if c >= 2:
            stack.append(((a + 1, b + 1, c - 2, e), 2 * co))
            stack.append(((a, b, c - 2, e + 2), -co))
        else:
            key = (a, b, c, e)
            cur = out.get(key)
            co = co if cur is None else cur + co
            if co:
                out[key] = co
            elif key in out:
                del out[key]
    return out


class InvariantPoly:
    """Immutable polynomial in (w1, w2, w3, w4), canonical in w3."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, object] | None = None,
                 *, _canonical: bool = False):
        if terms is None:
            terms = {}
        self.terms: dict[Key, object] = (
            dict(terms) if _canonical else _reduce(terms)
        )

    @classmethod
    def monomial(cls, key: Key, coeff=1) -> "InvariantPoly":
        return cls({key: coeff})

    @classmethod
    def zero(cls) -> "InvariantPoly":
        return cls({}, _canonical=True)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, InvariantPoly):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.keys()))

    def __add__(self, other: "InvariantPoly") -> "InvariantPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            cur = out.get(k)
            v = v if cur is None else cur + v
            if v:
                out[k] = v
            elif k in out:
                del out[k]
        return InvariantPoly(out, _canonical=True)

    def __neg__(self) -> "InvariantPoly":
        return InvariantPoly({k: -v for k, v in self.terms.items()},
                             _canonical=True)

    def __sub__(self, other: "InvariantPoly") -> "InvariantPoly":
        return self + (-other)

    def scale(self, c) -> "InvariantPoly":
        if not c:
            return InvariantPoly.zero()
        return InvariantPoly({k: v * c for k, v in self.terms.items()},
                             _canonical=True)

    def __mul__(self, other):
        if not isinstance(other, InvariantPoly):
            return self.scale(other)
        out: dict[Key, object] = {}
        for (a1, b1, c1, e1), v1 in self.terms.items():
            for (a2, b2, c2, e2), v2 in other.terms.items():
                k = (a1 + a2, b1 + b2, c1 + c2, e1 + e2)
                v = v1 * v2
                cur = out.get(k)
                out[k] = v if cur is None else cur + v
        return InvariantPoly(out)

    __rmul__ = __mul__

    def truncate(self, max_degree: int) -> "InvariantPoly":
        return InvariantPoly(
            {k: v for k, v in self.terms.items() if sum(k) <= max_degree},
            _canonical=True,
        )

    def degree_part(self, n: int) -> "InvariantPoly":
        return InvariantPoly(
            {k: v for k, v in self.terms.items() if sum(k) == n},
            _canonical=True,
        )

    def max_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def is_pure(self) -> bool:
        """True when the polynomial involves only w1 and w2."""
        return all(k[2] == 0 and k[3] == 0 for k in self.terms)

    def diff(self, i: int) -> "InvariantPoly":
        """Partial derivative with respect to w_{i+1}."""
        out: dict[Key, object] = {}
        for k, v in self.terms.items():
            if k[i] == 0:
                continue
            kk = list(k)
            n = kk[i]
            kk[i] -= 1
            out[tuple(kk)] = v * n
        return InvariantPoly(out, _canonical=True)

    def evaluate(self, w1, w2, w3, w4):
        """Numeric value; QSqrt2 coefficients are lowered to float."""
        total = 0.0
        for (a, b, c, e), v in self.terms.items():
            cv = float(v) if isinstance(v, QSqrt2) else v
            total += cv * w1 ** a * w2 ** b * w3 ** c * w4 ** e
        return total

    def map_coeffs(self, fn) -> "InvariantPoly":
        return InvariantPoly({k: fn(v) for k, v in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "InvariantPoly(0)"
        bits = [f"{v!r}*w^{k}" for k, v in sorted(self.terms.items())]
        return "InvariantPoly(" + " + ".join(bits) + ")"


W1 = InvariantPoly.monomial((1, 0, 0, 0), QSqrt2(1))
W2 = InvariantPoly.monomial((0, 1, 0, 0), QSqrt2(1))
W3 = InvariantPoly.monomial((0, 0, 1, 0), QSqrt2(1))
W4 = InvariantPoly.monomial((0, 0, 0, 1), QSqrt2(1))

# {w_i, w_j} for i < j, zero-based indices.
_BRACKET_TABLE: dict[tuple[int, int], InvariantPoly] = {
    (0, 1): InvariantPoly.zero(),
    (0, 2): W4,
    (0, 3): -W3,
    (1, 2): W4,
    (1, 3): -W3,
    (2, 3): -(W1 + W2),
}


def poisson_bracket_w(f: InvariantPoly, g: InvariantPoly) -> InvariantPoly:
    """{f, g} via the closed bracket of the invariants; canonical output."""
    total = InvariantPoly.zero()
    for (i, j), bij in _BRACKET_TABLE.items():
        if not bij:
            continue
        total = total + f.diff(i) * g.diff(j) * bij
        total = total - f.diff(j) * g.diff(i) * bij
    return total


def invariants_from_phase(Q1, P1, Q2, P2):
    """(w1, w2, w3, w4) evaluated at a phase-space point."""
    s2 = 2.0 ** 0.5
    return (
        0.5 * (Q1 * Q1 + P1 * P1),
        0.5 * (Q2 * Q2 + P2 * P2),
        (Q1 * Q2 - P1 * P2) / s2,
        (Q1 * P2 + Q2 * P1) / s2,
    )
