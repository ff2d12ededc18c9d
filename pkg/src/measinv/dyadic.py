"""Real measures on Z_2^n: Walsh-Hadamard transform and the greatest-atom certificate.

Amplitudes are stored densely in colexicographic order: the element with
coordinates ``(x_1, ..., x_n)`` sits at index ``sum(x_j << (j-1))``, so the
last written digit is the most significant one.  With this order the elements
ending in 0 fill the first half and ``k <-> k + 2**(n-1)`` flips the last
digit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionViolated
from .groups import GroupSpec
from .measures import DiscreteMeasure

SLACK = 1e-12
ATOM_SLACK = 1e-9


def colex_index(coords) -> int:
    return sum(int(b) << j for j, b in enumerate(coords))


def colex_coords(k: int, n: int) -> tuple[int, ...]:
    return tuple((k >> j) & 1 for j in range(n))


@dataclass(frozen=True, eq=False)
class DyadicMeasure:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=float)
        if self.n < 1 or a.shape != (1 << self.n,):
            raise ValueError(f"need 2**{self.n} amplitudes, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def from_measure(cls, mu: DiscreteMeasure) -> "DyadicMeasure":
        g = mu.group
        if not g.has_exponent_two:
            raise ValueError(f"{g} is not of the form Z2^n")
        if not mu.is_real:
            raise PreconditionViolated("real measure", "amplitudes have nonzero imaginary parts")
        a = np.zeros(1 << g.dim)
        for x, v in mu.atoms.items():
            a[colex_index(x)] = v.real
        return cls(g.dim, a)

    def to_measure(self) -> DiscreteMeasure:
        g = GroupSpec.finite(*([2] * self.n))
        return DiscreteMeasure(
            g, {colex_coords(k, self.n): v for k, v in enumerate(self.amplitudes) if v != 0})

    @property
    def tv_norm(self) -> float:
        return float(np.abs(self.amplitudes).sum())

    def __eq__(self, other):
        return (isinstance(other, DyadicMeasure) and self.n == other.n
                and np.array_equal(self.amplitudes, other.amplitudes))


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform along the last axis (length 2**n).

    Works for real or complex input; leading axes are treated as a batch.
    """
    a = np.array(a, copy=True)
    size = a.shape[-1]
    if size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    batch = a.shape[:-1]
    h = 1
    while h < size:
        v = a.reshape(*batch, size // (2 * h), 2, h)
        lo = v[..., 0, :].copy()
        hi = v[..., 1, :]
        v[..., 0, :] += hi
        v[..., 1, :] = lo - hi
        h *= 2
    return a


def wht(m: DyadicMeasure) -> np.ndarray:
    """mu^(y) = sum_x a_x (-1)^<x,y> for every y, in colex order."""
    return fwht(m.amplitudes)


def skondwa_split(m: DyadicMeasure) -> tuple[DyadicMeasure, DyadicMeasure]:
    """Sum and difference halves: b_k = a_k + a_{k+h}, c_k = a_k - a_{k+h}, h = 2**(n-1).

    The transform of b is the transform of m on duals ending in 0, the
    transform of c its values on duals ending in 1.
    """
    if m.n < 2:
        raise ValueError("splitting needs n >= 2")
    h = 1 << (m.n - 1)
    lo, hi = m.amplitudes[:h], m.amplitudes[h:]
    return DyadicMeasure(m.n - 1, lo + hi), DyadicMeasure(m.n - 1, lo - hi)


def _recursive_atom(a: np.ndarray, delta: float) -> int | None:
    """Index of an atom with |a_k| >= delta found by the halving induction.

    Returns None when the induction breaks down, which cannot happen when
    the hypotheses hold.
    """
    if a.shape[0] == 2:
        k = int(np.argmax(np.abs(a)))
        return k if abs(a[k]) >= delta else None
    h = a.shape[0] // 2
    k1 = _recursive_atom(a[:h] + a[h:], delta)
    k2 = _recursive_atom(a[:h] - a[h:], delta)
    if k1 is None or k2 is None or k1 != k2:
        return None
    k = k1 if abs(a[k1]) >= abs(a[k1 + h]) else k1 + h
    return k if abs(a[k]) >= delta else None


def greatest_atom_certificate(m, delta: float) -> dict:
    """Check that a real measure with |mu^| >= delta > 1/2 has an atom of mass >= delta.

    Accepts a :class:`DyadicMeasure` or a real :class:`DiscreteMeasure` on
    Z_2^n.  Both the direct maximum and the recursive split argument are
    evaluated; ``agrees`` reports whether the recursion located the maximal
    atom.
    """
    if isinstance(m, DiscreteMeasure):
        m = DyadicMeasure.from_measure(m)
    if not delta > 0.5:
        raise PreconditionViolated("delta > 1/2", f"delta = {delta}")
    if m.tv_norm > 1 + SLACK:
        raise PreconditionViolated("norm <= 1", f"norm = {m.tv_norm!r}")
    spec_min = float(np.abs(wht(m)).min())
    if spec_min < delta - SLACK:
        raise PreconditionViolated("|mu^| >= delta", f"min |mu^| = {spec_min!r} < {delta!r}")
    mods = np.abs(m.amplitudes)
    kmax = int(np.argmax(mods))
    max_atom = float(mods[kmax])
    krec = _recursive_atom(m.amplitudes, delta - ATOM_SLACK)
    agrees = krec is not None and mods[krec] == max_atom
    return {
        "max_atom": max_atom,
        "argmax": colex_coords(kmax, m.n),
        "holds": max_atom >= delta - ATOM_SLACK,
        "recursive_index": None if krec is None else colex_coords(krec, m.n),
        "agrees": bool(agrees),
        "min_transform": spec_min,
    }
