"""Computable abelian groups: finite products of cyclic groups and lattices Z^d.

Elements are plain integer tuples.  For a finite group the dual is identified
with the group itself through the pairing ``exp(2*pi*i * sum(x_j*y_j/n_j))``;
for ``Z^d`` a dual point is an angle tuple in ``[0, 2*pi)^d``.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Iterator, Sequence

from .errors import DependentSupport, DimensionMismatch, ParseError

TWO_PI = 2.0 * math.pi

FINITE = "FiniteProduct"
LATTICE = "Lattice"


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    moduli: tuple[int, ...] = ()
    rank: int = 0

    def __post_init__(self):
        if self.kind == FINITE:
            if not self.moduli or any(int(n) < 2 for n in self.moduli):
                raise ValueError(f"cyclic factors need moduli >= 2, got {self.moduli}")
            object.__setattr__(self, "moduli", tuple(int(n) for n in self.moduli))
            object.__setattr__(self, "rank", 0)
        elif self.kind == LATTICE:
            if self.moduli:
                raise ValueError("a lattice carries no moduli")
            if int(self.rank) < 1:
                raise ValueError(f"lattice rank must be >= 1, got {self.rank}")
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @classmethod
    def finite(cls, *moduli: int) -> "GroupSpec":
        return cls(FINITE, tuple(moduli))

    @classmethod
    def lattice(cls, rank: int = 1) -> "GroupSpec":
        return cls(LATTICE, (), rank)

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        return parse_group(text)

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    @property
    def dim(self) -> int:
        """Length of coordinate tuples."""
        return len(self.moduli) if self.is_finite else self.rank

    @property
    def order(self) -> int | float:
        if self.is_finite:
            return math.prod(self.moduli)
        return math.inf

    @property
    def has_exponent_two(self) -> bool:
        return self.is_finite and all(n == 2 for n in self.moduli)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.dim

    def element(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Canonical form of ``coords`` (residues for finite factors)."""
        if len(coords) != self.dim:
            raise DimensionMismatch(
                f"expected {self.dim} coordinates for {self}, got {len(coords)}")
        if self.is_finite:
            return tuple(int(c) % n for c, n in zip(coords, self.moduli))
        return tuple(int(c) for c in coords)

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements of a finite group in row-major order."""
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        return product(*(range(n) for n in self.moduli))

    def __str__(self):
        if not self.is_finite:
            return "Z" if self.rank == 1 else f"Z^{self.rank}"
        parts = []
        i = 0
        while i < len(self.moduli):
            n = self.moduli[i]
            j = i
            while j < len(self.moduli) and self.moduli[j] == n:
                j += 1
            parts.append(f"Z{n}" if j - i == 1 else f"Z{n}^{j - i}")
            i = j
        return "x".join(parts)


_FACTOR = re.compile(r"Z(\d+)(?:\^(\d+))?$")
_LATTICE = re.compile(r"Z(?:\^(\d+))?$")


def parse_group(text: str) -> GroupSpec:
    """Parse ``"Z2^4"``, ``"Z6xZ4"``, ``"Z"`` or ``"Z^2"``."""
    s = text.strip()
    m = _LATTICE.match(s)
    if m:
        rank = int(m.group(1) or 1)
        if rank < 1:
            raise ParseError(f"lattice rank must be >= 1 in {text!r}")
        return GroupSpec.lattice(rank)
    moduli: list[int] = []
    for factor in s.split("x"):
        m = _FACTOR.match(factor)
        if not m:
            raise ParseError(f"bad group factor {factor!r} in {text!r}")
        n, k = int(m.group(1)), int(m.group(2) or 1)
        if n < 2 or k < 1:
            raise ParseError(f"bad group factor {factor!r} in {text!r}")
        moduli.extend([n] * k)
    return GroupSpec.finite(*moduli)


def reduce_angle(t: float) -> float:
    r = float(t) % TWO_PI
    return 0.0 if r >= TWO_PI else r


def _check(g: GroupSpec, *tuples):
    for t in tuples:
        if len(t) != g.dim:
            raise DimensionMismatch(f"{t} does not belong to {g}")


def add(g: GroupSpec, x, y) -> tuple[int, ...]:
    _check(g, x, y)
    return g.element([a + b for a, b in zip(x, y)])


def neg(g: GroupSpec, x) -> tuple[int, ...]:
    _check(g, x)
    return g.element([-a for a in x])


def sub(g: GroupSpec, x, y) -> tuple[int, ...]:
    return add(g, x, neg(g, y))


def element_order(g: GroupSpec, x) -> int | float:
    """Least k >= 1 with k*x = 0, or ``math.inf``."""
    _check(g, x)
    if not g.is_finite:
        return 1 if not any(x) else math.inf
    return reduce(math.lcm, (n // math.gcd(int(c), n) for c, n in zip(x, g.moduli)), 1)


def dual_point(g: GroupSpec, gamma) -> tuple:
    """Canonical dual point: a group element (finite) or reduced angles (lattice)."""
    if g.is_finite:
        return g.element(gamma)
    if len(gamma) != g.rank:
        raise DimensionMismatch(f"dual point {gamma} has wrong length for {g}")
    return tuple(reduce_angle(t) for t in gamma)


def character_eval(g: GroupSpec, gamma, x) -> complex:
    _check(g, gamma, x)
    if g.is_finite:
        # exact rational phase before the exponential keeps |value| == 1
        phase = sum(Fraction((int(c) * int(y)) % n, n) for c, y, n in zip(x, gamma, g.moduli))
        phase -= math.floor(phase)
        return cmath.exp(1j * TWO_PI * float(phase))
    return cmath.exp(1j * math.fsum(float(t) * int(c) for t, c in zip(gamma, x)))


@dataclass(frozen=True)
class RootsOfUnity:
    k: int


class _Dense:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Dense"


Dense = _Dense()


def character_value_set(g: GroupSpec, x):
    """The set {gamma(x)}: k-th roots of unity, or a dense subgroup of the circle."""
    k = element_order(g, x)
    return Dense if k == math.inf else RootsOfUnity(int(k))


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer matrix, by exact fraction elimination."""
    m = [[Fraction(int(v)) for v in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def is_independent(g: GroupSpec, points) -> bool:
    """Independence in Z^d: the distinct nonzero points are linearly independent.

    Zero is compatible with independence (``n*0 = 0`` for every n).
    """
    if g.is_finite:
        raise ValueError("integer independence test is defined for lattices only")
    pts = {g.element(p) for p in points}
    nonzero = [p for p in pts if any(p)]
    return integer_rank(nonzero) == len(nonzero)


def kronecker_solve(g: GroupSpec, points, targets, atol: float = 1e-9) -> tuple[float, ...]:
    """Find angles theta with exp(i*theta.x_k) = targets[k] for independent x_k.

    Raises :class:`DependentSupport` if the points admit an integer relation
    or contain zero (zero has finite order).
    """
    import numpy as np

    if g.is_finite:
        raise ValueError("kronecker_solve needs a lattice group")
    pts = [g.element(p) for p in points]
    if len(pts) != len(targets):
        raise DimensionMismatch("one target per point required")
    if not pts:
        return (0.0,) * g.rank
    if any(not any(p) for p in pts) or integer_rank(pts) < len(pts):
        raise DependentSupport(f"points {pts} are not independent elements of infinite order")
    for t in targets:
        if abs(abs(t) - 1.0) > 1e-12:
            raise ValueError(f"target {t} is not unimodular")
    X = np.array(pts, dtype=float)
    phi = np.array([cmath.phase(t) for t in targets])
    # full row rank, so the minimum-norm solution satisfies every equation exactly
    theta = np.linalg.lstsq(X, phi, rcond=None)[0]
    theta = tuple(reduce_angle(t) for t in theta)
    err = max(abs(character_eval(g, theta, p) - t) for p, t in zip(pts, targets))
    if err > atol:
        raise ArithmeticError(f"Kronecker solve missed targets by {err:.3g}")
    return theta
