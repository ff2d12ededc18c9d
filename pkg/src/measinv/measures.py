"""Finitely supported complex measures and the convolution algebra they span."""
from __future__ import annotations

import math
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import GroupMismatch
from .groups import GroupSpec, add, neg

PRUNE = 1e-15
# above this many atom pairs, finite-group convolution switches to dense shifts
_DENSE_PAIRS = 2048


class DiscreteMeasure:
    """Atomic measure ``sum a_x delta_x`` on a :class:`GroupSpec`.

    Immutable; every operation returns a fresh measure.  Zero amplitudes are
    dropped at construction and coordinates are canonicalized, so duplicate
    points are summed.
    """

    __slots__ = ("group", "_atoms")

    def __init__(self, group: GroupSpec, atoms: Mapping | Iterable = (), prune: float = 0.0):
        items = atoms.items() if isinstance(atoms, Mapping) else atoms
        acc: dict[tuple[int, ...], complex] = {}
        for x, a in items:
            key = group.element(x)
            acc[key] = acc.get(key, 0j) + complex(a)
        object.__setattr__(self, "group", group)
        object.__setattr__(
            self, "_atoms", {x: a for x, a in acc.items() if a != 0 and abs(a) >= prune})

    def __setattr__(self, name, value):
        raise AttributeError("DiscreteMeasure is immutable")

    def __reduce__(self):
        return (DiscreteMeasure, (self.group, dict(self._atoms)))

    @property
    def atoms(self) -> Mapping[tuple[int, ...], complex]:
        return MappingProxyType(self._atoms)

    @classmethod
    def dirac(cls, group: GroupSpec, x=None, amplitude: complex = 1.0) -> "DiscreteMeasure":
        return cls(group, {group.zero() if x is None else x: amplitude})

    @classmethod
    def from_dense(cls, group: GroupSpec, arr: np.ndarray, prune: float = PRUNE) -> "DiscreteMeasure":
        """Measure from a dense array indexed by coordinates (row-major)."""
        arr = np.asarray(arr).reshape(group.moduli)
        idx = np.nonzero(np.abs(arr) >= prune) if prune > 0 else np.nonzero(arr)
        atoms = {tuple(int(i) for i in ix): complex(arr[ix]) for ix in zip(*idx)}
        return cls(group, atoms)

    def dense(self) -> np.ndarray:
        if not self.group.is_finite:
            raise ValueError("dense representation needs a finite group")
        out = np.zeros(self.group.moduli, dtype=complex)
        for x, a in self._atoms.items():
            out[x] = a
        return out

    def __len__(self):
        return len(self._atoms)

    def __getitem__(self, x) -> complex:
        return self._atoms.get(self.group.element(x), 0j)

    def __eq__(self, other):
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        return self.group == other.group and self._atoms == other._atoms

    def __hash__(self):
        return hash((self.group, frozenset(self._atoms.items())))

    def __repr__(self):
        body = " + ".join(f"({a:.6g})d{list(x)}" for x, a in sorted(self._atoms.items()))
        return f"DiscreteMeasure[{self.group}]({body or '0'})"

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        _same(self, other)
        acc = dict(self._atoms)
        for x, a in other._atoms.items():
            acc[x] = acc.get(x, 0j) + a
        return DiscreteMeasure(self.group, acc)

    def __sub__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return self + other.scale(-1.0)

    def scale(self, c: complex) -> "DiscreteMeasure":
        return DiscreteMeasure(self.group, {x: c * a for x, a in self._atoms.items()})

    @property
    def is_real(self) -> bool:
        return all(a.imag == 0 for a in self._atoms.values())

    @property
    def support(self) -> list[tuple[int, ...]]:
        return sorted(self._atoms)


def _same(mu: DiscreteMeasure, nu: DiscreteMeasure):
    if mu.group != nu.group:
        raise GroupMismatch(f"measures live on {mu.group} and {nu.group}")


def tv_norm(mu: DiscreteMeasure) -> float:
    return math.fsum(abs(a) for a in mu.atoms.values())


def convolve(mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    """(mu*nu)({z}) = sum over x+y=z of mu({x}) nu({y}); tiny amplitudes pruned."""
    _same(mu, nu)
    g = mu.group
    if g.is_finite and len(mu) * len(nu) > _DENSE_PAIRS:
        if len(nu) > len(mu):
            mu, nu = nu, mu
        base = mu.dense()
        out = np.zeros_like(base)
        axes = tuple(range(g.dim))
        for y, b in nu.atoms.items():
            out += b * np.roll(base, y, axis=axes)
        return DiscreteMeasure.from_dense(g, out, prune=PRUNE)
    acc: dict[tuple[int, ...], complex] = {}
    for x, a in mu.atoms.items():
        for y, b in nu.atoms.items():
            z = add(g, x, y)
            acc[z] = acc.get(z, 0j) + a * b
    return DiscreteMeasure(g, acc, prune=PRUNE)


def involute(mu: DiscreteMeasure) -> DiscreteMeasure:
    g = mu.group
    return DiscreteMeasure(g, {neg(g, x): a.conjugate() for x, a in mu.atoms.items()})


def translate(mu: DiscreteMeasure, tau, c: complex = 1.0) -> DiscreteMeasure:
    """``c * mu * delta_{-tau}``: shifts tau to the origin and rotates phases by c."""
    if abs(abs(c) - 1.0) > 1e-12:
        raise ValueError(f"rotation constant {c} is not unimodular")
    g = mu.group
    shift = neg(g, g.element(tau))
    return DiscreteMeasure(g, {add(g, x, shift): c * a for x, a in mu.atoms.items()})


def sorted_atoms(mu: DiscreteMeasure) -> list[tuple[tuple[int, ...], complex]]:
    """Atoms by decreasing modulus; equal moduli ordered by coordinates."""
    return sorted(mu.atoms.items(), key=lambda item: (-abs(item[1]), item[0]))


def normalize_head(mu: DiscreteMeasure):
    """Translate and rotate so the largest atom sits at 0 with positive mass.

    Returns ``(normalized, tau, c)`` where ``normalized = translate(mu, tau, c)``.
    """
    atoms = sorted_atoms(mu)
    if not atoms:
        raise ValueError("the zero measure has no head atom")
    tau, a = atoms[0]
    c = a.conjugate() / abs(a)
    return translate(mu, tau, c), tau, c


def point_mass_at_zero_of_selfconv(mu: DiscreteMeasure) -> float:
    """(mu * mu~)({0}) = sum |mu({x})|^2."""
    return math.fsum(abs(a) ** 2 for a in mu.atoms.values())


def dirac(group: GroupSpec, x=None) -> DiscreteMeasure:
    return DiscreteMeasure.dirac(group, x)
