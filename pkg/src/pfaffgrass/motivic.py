"""Polynomials in the Lefschetz class L and the module Z[L]<1, [X], [Y]>.

Classes such as [H] or [H~] are never symbols of their own; they are the
explicit combinations ``c1 + cX*[X] + cY*[Y]`` built by the ``class_*``
functions below.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

COEFF_BOUND = 1 << 63  # coefficients stay inside signed 64-bit
VALUE_BOUND = 1 << 127  # evaluations stay inside signed 128-bit


class ArithmeticOverflow(ArithmeticError):
    """A result left the fixed-width range the artifact promises to stay in."""


class InexactDivision(ArithmeticError):
    pass


def _check(x: int, bound: int = COEFF_BOUND) -> int:
    if not (-bound <= x < bound):
        raise ArithmeticOverflow(f"{x} does not fit in {bound.bit_length()} bits (signed)")
    return x


@dataclass(frozen=True)
class LPoly:
    """Integer polynomial in L; ``coeffs[d]`` multiplies L**d.

    Trailing zeros are stripped, so the zero polynomial has ``coeffs == ()``.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        c = [_check(int(x)) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def const(cls, c: int) -> LPoly:
        return cls((c,))

    @classmethod
    def monomial(cls, d: int, c: int = 1) -> LPoly:
        return cls((0,) * d + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: LPoly | int) -> LPoly:
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return LPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> LPoly:
        return LPoly(tuple(-x for x in self.coeffs))

    def __sub__(self, other: LPoly | int) -> LPoly:
        return self + (-_lift(other))

    def __rsub__(self, other: int) -> LPoly:
        return _lift(other) - self

    def __mul__(self, other):
        if isinstance(other, MotivicExpr):
            return NotImplemented
        other = _lift(other)
        if self.is_zero() or other.is_zero():
            return LPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = _check(out[i + j] + _check(a * b))
        return LPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> LPoly:
        out = LPoly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def exact_div(self, other: LPoly | int) -> LPoly:
        """Quotient of a division that must leave no remainder."""
        other = _lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            if rem:
                raise InexactDivision(f"inexact: ({self}) / ({other})")
            return LPoly()
        quot = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            top = rem[k + len(other.coeffs) - 1]
            if top % lead:
                raise InexactDivision(f"inexact: ({self}) / ({other})")
            c = top // lead
            quot[k] = c
            for i, b in enumerate(other.coeffs):
                rem[k + i] = _check(rem[k + i] - c * b)
        if any(rem):
            raise InexactDivision(f"inexact: ({self}) / ({other})")
        return LPoly(tuple(quot))

    def eval_at(self, q: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = _check(acc * q + c, VALUE_BOUND)
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            body = f"{abs(c)}*L^{d}" if d else f"{abs(c)}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)


def _lift(x) -> LPoly:
    if isinstance(x, LPoly):
        return x
    if isinstance(x, int):
        return LPoly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial in L")


L = LPoly.monomial(1)
ONE = LPoly.const(1)


def eval_at(a: LPoly, q: int) -> int:
    return a.eval_at(q)


@dataclass(frozen=True)
class MotivicExpr:
    """c1*1 + cX*[X_W] + cY*[Y_W] with coefficients in Z[L]."""

    c1: LPoly = LPoly()
    cX: LPoly = LPoly()
    cY: LPoly = LPoly()

    @property
    def is_scalar(self) -> bool:
        return self.cX.is_zero() and self.cY.is_zero()

    def __add__(self, other: MotivicExpr) -> MotivicExpr:
        other = _lift_expr(other)
        return MotivicExpr(self.c1 + other.c1, self.cX + other.cX, self.cY + other.cY)

    __radd__ = __add__

    def __neg__(self) -> MotivicExpr:
        return MotivicExpr(-self.c1, -self.cX, -self.cY)

    def __sub__(self, other: MotivicExpr) -> MotivicExpr:
        return self + (-_lift_expr(other))

    def __mul__(self, other) -> MotivicExpr:
        if isinstance(other, MotivicExpr):
            if other.is_scalar:
                other = other.c1
            elif self.is_scalar:
                return other * self.c1
            else:
                raise TypeError("products of [X]/[Y] symbols are not defined")
        s = _lift(other)
        return MotivicExpr(self.c1 * s, self.cX * s, self.cY * s)

    __rmul__ = __mul__

    def eval_at(self, q: int, n_x: int = 0, n_y: int = 0) -> int:
        return (
            self.c1.eval_at(q)
            + self.cX.eval_at(q) * n_x
            + self.cY.eval_at(q) * n_y
        )

    def __str__(self) -> str:
        return f"({self.c1}) + ({self.cX})*[X] + ({self.cY})*[Y]"


def _lift_expr(x) -> MotivicExpr:
    if isinstance(x, MotivicExpr):
        return x
    return MotivicExpr(c1=_lift(x))


X = MotivicExpr(cX=ONE)
Y = MotivicExpr(cY=ONE)


def product(polys: Iterable[LPoly]) -> LPoly:
    out = ONE
    for f in polys:
        out = out * f
    return out


def class_projective(n: int) -> LPoly:
    """[P^n] = 1 + L + ... + L^n."""
    if n < 0:
        raise ValueError("projective dimension must be non-negative")
    return LPoly((1,) * (n + 1))


def class_grassmannian(k: int, n: int) -> LPoly:
    """Gaussian binomial [n choose k]_L, by exact division."""
    if not (0 <= k <= n):
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    num = product(L ** (n - i) - 1 for i in range(k))
    den = product(L ** (k - i) - 1 for i in range(k))
    return num.exact_div(den)


def frame_factor() -> LPoly:
    """(L^2-1)(L^2-L): ordered bases of a 2-dimensional space."""
    return (L**2 - 1) * (L**2 - L)


def zero_divisor_cofactor() -> LPoly:
    """(L^2-1)(L-1)L^7."""
    return (L**2 - 1) * (L - 1) * L**7


def class_H_via_X() -> MotivicExpr:
    return MotivicExpr(c1=class_grassmannian(2, 7) * class_projective(5), cX=L**6)


def class_tildeH_via_X() -> MotivicExpr:
    return class_H_via_X() * frame_factor()


def tildeH1_fiber() -> LPoly:
    """Frame-bundle fiber over a rank-4 form: kernel stratum plus the rest."""
    return (L**3 - 1) * (L**7 - L) + (L**7 - L**3) * (L**6 - L)


def tildeH2_fiber() -> LPoly:
    """Same, over a rank-6 form (one-dimensional kernel)."""
    return (L - 1) * (L**7 - L) + (L**7 - L) * (L**6 - L)


def class_tildeH1() -> MotivicExpr:
    return MotivicExpr(cY=tildeH1_fiber())


def class_tildeH2() -> MotivicExpr:
    k = tildeH2_fiber()
    return MotivicExpr(c1=class_projective(6) * k, cY=-k)


def class_tildeH_via_Y() -> MotivicExpr:
    return MotivicExpr(
        c1=class_projective(6) * (L**7 - L) * (L**6 - 1),
        cY=zero_divisor_cofactor(),
    )


@dataclass(frozen=True)
class SymbolicCheck:
    name: str
    lhs: str
    rhs: str
    passed: bool


def verify_symbolic() -> list[SymbolicCheck]:
    """Run S1-S4. Failures are reported, never raised."""
    checks = []

    lhs = class_grassmannian(2, 7) * frame_factor()
    rhs = (L**7 - 1) * (L**7 - L)
    checks.append(SymbolicCheck("S1", str(lhs), str(rhs), lhs == rhs))

    lhs = class_projective(6) * (L**6 - 1)
    rhs = class_projective(5) * (L**7 - 1)
    checks.append(SymbolicCheck("S2", str(lhs), str(rhs), lhs == rhs))

    lhs_e = class_tildeH1() + class_tildeH2()
    rhs_e = class_tildeH_via_Y()
    checks.append(SymbolicCheck("S3", str(lhs_e), str(rhs_e), lhs_e == rhs_e))

    lhs_e = class_tildeH_via_X() - class_tildeH_via_Y()
    rhs_e = (X - Y) * zero_divisor_cofactor()
    checks.append(SymbolicCheck("S4", str(lhs_e), str(rhs_e), lhs_e == rhs_e))
    return checks
