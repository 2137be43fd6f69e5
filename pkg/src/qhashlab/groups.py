"""Finite abelian groups, their elements and multiplicative characters.

Two families are supported: the cyclic group Z_m and the product Z_n x Z_n.
Elements are coordinate tuples under componentwise addition mod the
coordinate modulus. Characters are indexed by group elements through the
bilinear pairing chi_a(x) = exp(2*pi*i*<a, x>/modulus), which enumerates the
complete dual group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

CYCLIC = "cyclic"
PRODUCT = "product"


class GroupMismatchError(ValueError):
    """Raised when elements of different groups are combined."""


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group: Z_m (kind 'cyclic') or Z_n x Z_n ('product')."""

    kind: str
    modulus: int

    def __post_init__(self):
        if self.kind not in (CYCLIC, PRODUCT):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")

    @staticmethod
    def cyclic(m: int) -> "GroupSpec":
        return GroupSpec(CYCLIC, m)

    @staticmethod
    def product(n: int) -> "GroupSpec":
        return GroupSpec(PRODUCT, n)

    @property
    def arity(self) -> int:
        return 1 if self.kind == CYCLIC else 2

    @property
    def order(self) -> int:
        return self.modulus if self.kind == CYCLIC else self.modulus**2

    def element(self, *coords: int) -> "GroupElement":
        if len(coords) != self.arity:
            raise ValueError(f"{self.kind} group needs {self.arity} coordinates, got {len(coords)}")
        return GroupElement(tuple(int(c) % self.modulus for c in coords), self)

    def identity(self) -> "GroupElement":
        return GroupElement((0,) * self.arity, self)

    def from_index(self, i: int) -> "GroupElement":
        """Element at position i in the fixed enumeration order."""
        i = int(i)
        if not 0 <= i < self.order:
            raise ValueError(f"index {i} outside group of order {self.order}")
        if self.kind == CYCLIC:
            return GroupElement((i,), self)
        return GroupElement(divmod(i, self.modulus), self)

    def to_index(self, a: "GroupElement") -> int:
        self._check_member(a)
        if self.kind == CYCLIC:
            return a.coords[0]
        return a.coords[0] * self.modulus + a.coords[1]

    def elements(self) -> Iterator["GroupElement"]:
        for i in range(self.order):
            yield self.from_index(i)

    def coords_matrix(self) -> np.ndarray:
        """All element coordinates in enumeration order, shape (order, arity)."""
        idx = np.arange(self.order, dtype=np.int64)
        if self.kind == CYCLIC:
            return idx[:, None]
        return np.stack(np.divmod(idx, self.modulus), axis=1)

    def sample_coords(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Draw `count` uniform elements as a (count, arity) coordinate array."""
        return rng.integers(0, self.modulus, size=(count, self.arity), dtype=np.int64)

    def _check_member(self, a: "GroupElement") -> None:
        if a.spec != self:
            raise GroupMismatchError(f"element of {a.spec} used with {self}")

    def __str__(self) -> str:
        if self.kind == CYCLIC:
            return f"Z_{self.modulus}"
        return f"Z_{self.modulus}xZ_{self.modulus}"


@dataclass(frozen=True)
class GroupElement:
    """An element of a :class:`GroupSpec`, coordinates reduced mod modulus."""

    coords: tuple[int, ...]
    spec: GroupSpec

    def __post_init__(self):
        if len(self.coords) != self.spec.arity:
            raise ValueError("coordinate count does not match group arity")
        if any(not 0 <= c < self.spec.modulus for c in self.coords):
            raise ValueError(f"coordinates {self.coords} not reduced mod {self.spec.modulus}")

    @property
    def index(self) -> int:
        return self.spec.to_index(self)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coords)


def op_apply(a: GroupElement, b: GroupElement) -> GroupElement:
    """Group operation: componentwise addition mod the coordinate modulus."""
    if a.spec != b.spec:
        raise GroupMismatchError(f"cannot combine elements of {a.spec} and {b.spec}")
    m = a.spec.modulus
    return GroupElement(tuple((x + y) % m for x, y in zip(a.coords, b.coords)), a.spec)


def inverse(a: GroupElement) -> GroupElement:
    """Inverse under addition: componentwise negation."""
    m = a.spec.modulus
    return GroupElement(tuple((-x) % m for x in a.coords), a.spec)


@dataclass(frozen=True)
class Character:
    """Multiplicative character chi_a(x) = exp(2*pi*i*<a, x>/modulus).

    The label a ranges over the group itself; a = identity gives the trivial
    character, and distinct labels give distinct characters (complete dual).
    """

    index: GroupElement

    @property
    def spec(self) -> GroupSpec:
        return self.index.spec

    def __call__(self, x: GroupElement) -> complex:
        return char_eval(self, x)


def char_eval(chi: Character, x: GroupElement) -> complex:
    """Evaluate a character; unit modulus for every argument."""
    if chi.spec != x.spec:
        raise GroupMismatchError(f"character over {chi.spec} applied to element of {x.spec}")
    m = chi.spec.modulus
    dot = sum(a * b for a, b in zip(chi.index.coords, x.coords)) % m
    return complex(np.exp(2j * math.pi * dot / m))


def character_column(spec: GroupSpec, label_coords: np.ndarray) -> np.ndarray:
    """Values of chi_a over the whole group in enumeration order.

    `label_coords` is the (arity,) coordinate vector of the label a.
    """
    coords = spec.coords_matrix()
    phases = (coords @ np.asarray(label_coords, dtype=np.int64)) % spec.modulus
    return np.exp(2j * np.pi * phases / spec.modulus)
