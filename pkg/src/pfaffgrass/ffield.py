"""Prime-field arithmetic for small moduli."""

from __future__ import annotations

from dataclasses import dataclass

MIN_P = 2
MAX_P = 61


class FieldError(ValueError):
    """Raised for an invalid modulus."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldCtx:
    """The field F_p. Use :func:`make_field` to construct a checked context."""

    p: int

    def __post_init__(self) -> None:
        if not (MIN_P <= self.p <= MAX_P):
            raise FieldError(f"p={self.p} out of range [{MIN_P}, {MAX_P}]")
        if not is_prime(self.p):
            raise FieldError(f"p={self.p} is not prime")

    def __call__(self, value: int) -> Fp:
        return Fp(value % self.p, self)

    def elements(self) -> list[Fp]:
        return [Fp(v, self) for v in range(self.p)]

    # functional forms of the element operations
    def add(self, a: Fp, b: Fp) -> Fp:
        return a + b

    def sub(self, a: Fp, b: Fp) -> Fp:
        return a - b

    def mul(self, a: Fp, b: Fp) -> Fp:
        return a * b

    def neg(self, a: Fp) -> Fp:
        return -a

    def inv(self, a: Fp) -> Fp:
        return a.inv()

    def pow(self, a: Fp, e: int) -> Fp:
        return a**e


def make_field(p: int) -> FieldCtx:
    return FieldCtx(p)


@dataclass(frozen=True)
class Fp:
    value: int
    ctx: FieldCtx

    def __post_init__(self) -> None:
        if not (0 <= self.value < self.ctx.p):
            raise ValueError(f"{self.value} is not reduced mod {self.ctx.p}")

    def _coerce(self, other: Fp | int) -> int:
        if isinstance(other, Fp):
            if other.ctx != self.ctx:
                raise TypeError(f"cannot mix F_{self.ctx.p} and F_{other.ctx.p} elements")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other: Fp | int) -> Fp:
        return self.ctx(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: Fp | int) -> Fp:
        return self.ctx(self.value - self._coerce(other))

    def __rsub__(self, other: int) -> Fp:
        return self.ctx(self._coerce(other) - self.value)

    def __mul__(self, other: Fp | int) -> Fp:
        return self.ctx(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> Fp:
        return self.ctx(-self.value)

    def inv(self) -> Fp:
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.ctx.p}")
        return self.ctx(pow(self.value, -1, self.ctx.p))

    def __truediv__(self, other: Fp | int) -> Fp:
        return self * self.ctx(self._coerce(other)).inv()

    def __pow__(self, e: int) -> Fp:
        if e < 0:
            return self.inv() ** (-e)
        return self.ctx(pow(self.value, e, self.ctx.p))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.ctx.p})"
