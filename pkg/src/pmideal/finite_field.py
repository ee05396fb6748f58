"""Prime field arithmetic.

Residues are plain Python ints reduced into ``[0, q)``; :class:`FieldElement`
wraps one together with its :class:`PrimeModulus` for the public API, while the
hot loops elsewhere in the package work on the bare ints.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ModulusMismatch

MAX_MODULUS = 2**31 - 1


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not 2 <= self.q <= MAX_MODULUS:
            raise ValueError(f"modulus must be an integer in [2, 2^31-1], got {self.q!r}")
        if not is_prime(self.q):
            raise ValueError(f"{self.q} is not prime")

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value % self.q, self)

    def __int__(self) -> int:
        return self.q

    def elements(self) -> list[FieldElement]:
        return [FieldElement(v, self) for v in range(self.q)]

    def inv(self, value: int) -> int:
        """Inverse of a residue as a bare int."""
        value %= self.q
        if value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.q}")
        return pow(value, -1, self.q)


def as_modulus(q: int | PrimeModulus) -> PrimeModulus:
    return q if isinstance(q, PrimeModulus) else PrimeModulus(q)


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.q:
            raise ValueError(f"value {self.value} not reduced mod {self.modulus.q}")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ModulusMismatch(
                    f"cannot combine residues mod {self.modulus.q} and mod {other.modulus.q}"
                )
            return other.value
        if isinstance(other, int):
            return other % self.modulus.q
        return NotImplemented

    def _make(self, v: int) -> FieldElement:
        return FieldElement(v % self.modulus.q, self.modulus)

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(v - self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._make(self.value * v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self._make(self.value * self.modulus.inv(v))

    def __neg__(self):
        return self._make(-self.value)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def inverse(self) -> FieldElement:
        return FieldElement(self.modulus.inv(self.value), self.modulus)

    def __repr__(self):
        return f"{self.value} (mod {self.modulus.q})"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"mod {a.modulus.q} vs mod {b.modulus.q}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}; expected add, sub or mul")


def field_inv(a: FieldElement) -> FieldElement:
    return a.inverse()
