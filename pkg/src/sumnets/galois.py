"""Exact arithmetic in prime fields GF(p).

Every symbol, matrix entry and decoding coefficient in this package lives
in some GF(p).  Prime fields are all that is needed here: every statement
this package checks depends only on the field characteristic, so GF(p)
realizes the same behaviour as any GF(p^a).
"""

from __future__ import annotations

from dataclasses import dataclass

#: Largest accepted modulus.  Keeps single products of canonical residues
#: inside signed 64-bit arithmetic in the matrix kernels.
MAX_MODULUS = 2**31


def is_prime(n: int) -> bool:
    """Primality by trial division (moduli are small by construction)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class FieldMismatchError(ValueError):
    """Operands belong to different prime fields."""


class PrimeField:
    """The prime field GF(p).

    Instances are immutable and compare equal by modulus; all element
    operations are pure, so a field can be shared freely across threads.
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"modulus must be prime, got {p!r}")
        if p > MAX_MODULUS:
            raise ValueError(f"modulus {p} exceeds the supported ceiling {MAX_MODULUS}")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeField is immutable")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    @property
    def characteristic(self) -> int:
        return self.p

    def reduce(self, n: int) -> "Felt":
        """Map an integer constant into the field as a canonical residue."""
        return Felt(n % self.p, self)

    def __call__(self, n: int) -> "Felt":
        return self.reduce(n)

    @property
    def zero(self) -> "Felt":
        return Felt(0, self)

    @property
    def one(self) -> "Felt":
        return Felt(1 % self.p, self)

    def add(self, a: "Felt", b: "Felt") -> "Felt":
        self._own(a)
        self._own(b)
        return Felt((a.value + b.value) % self.p, self)

    def mul(self, a: "Felt", b: "Felt") -> "Felt":
        self._own(a)
        self._own(b)
        return Felt((a.value * b.value) % self.p, self)

    def inv(self, a: "Felt") -> "Felt":
        self._own(a)
        if a.value == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return Felt(pow(a.value, -1, self.p), self)

    def elements(self):
        """Iterate over all field elements (intended for small p)."""
        for v in range(self.p):
            yield Felt(v, self)

    def _own(self, a: "Felt") -> None:
        if a.field.p != self.p:
            raise FieldMismatchError(f"element of {a.field!r} used in {self!r}")


@dataclass(frozen=True)
class Felt:
    """A field element: a canonical residue in [0, p)."""

    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise ValueError(f"non-canonical residue {self.value} mod {self.field.p}")

    def _same(self, other: "Felt") -> None:
        if not isinstance(other, Felt):
            raise TypeError(f"expected Felt, got {type(other).__name__}")
        if other.field.p != self.field.p:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: "Felt") -> "Felt":
        self._same(other)
        return Felt((self.value + other.value) % self.field.p, self.field)

    def __sub__(self, other: "Felt") -> "Felt":
        self._same(other)
        return Felt((self.value - other.value) % self.field.p, self.field)

    def __mul__(self, other: "Felt") -> "Felt":
        self._same(other)
        return Felt((self.value * other.value) % self.field.p, self.field)

    def __neg__(self) -> "Felt":
        return Felt((-self.value) % self.field.p, self.field)

    def inverse(self) -> "Felt":
        return self.field.inv(self)

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"


def add(a: Felt, b: Felt) -> Felt:
    return a.field.add(a, b)


def mul(a: Felt, b: Felt) -> Felt:
    return a.field.mul(a, b)


def inv(a: Felt) -> Felt:
    return a.field.inv(a)


def reduce(field: PrimeField, n: int) -> Felt:
    return field.reduce(n)
