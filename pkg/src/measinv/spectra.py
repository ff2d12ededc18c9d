"""Fourier-Stieltjes transforms of atomic measures.

Finite groups get the exact transform on the whole dual.  Lattice measures
are sampled on a uniform grid of the torus and the infimum of |mu^| is
bracketed with the Lipschitz estimate

    | |mu^(s)| - |mu^(t)| | <= L * ||s - t||_inf,   L = sum_x |a_x| * ||x||_1,

so every torus point lies within half a grid step of a sample.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .dyadic import fwht
from .errors import BudgetExceeded
from .groups import TWO_PI, GroupSpec, character_eval
from .measures import DiscreteMeasure

# transform values are cross-checked against direct sums at a few dual points
SPOT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectrumProfile:
    """Transform values on a finite dual (exact) or a torus grid (sampled).

    ``values`` has one axis per coordinate; entry ``[k_1, ..., k_d]`` is the
    transform at dual element ``(k_1, ..., k_d)`` for finite groups, and at
    angles ``2*pi*k_j/mesh`` for lattices.
    """

    group: GroupSpec
    values: np.ndarray
    exact: bool
    certified_min: float
    certified_max_gap: float
    mesh: int | None = None
    lipschitz: float = 0.0

    @property
    def observed_min(self) -> float:
        return float(np.abs(self.values).min())

    def dual_points(self) -> Iterator[tuple]:
        for idx in np.ndindex(self.values.shape):
            if self.exact:
                yield tuple(int(i) for i in idx)
            else:
                yield tuple(TWO_PI * i / self.mesh for i in idx)

    def __len__(self):
        return self.values.size


def naive_transform_at(mu: DiscreteMeasure, gamma) -> complex:
    """Direct sum of a_x * gamma(x); O(|support|)."""
    return complex(sum(a * character_eval(mu.group, gamma, x) for x, a in mu.atoms.items()))


def _finite_values(mu: DiscreteMeasure) -> np.ndarray:
    g = mu.group
    dense = mu.dense()
    if g.has_exponent_two:
        # colex flattening of the coordinate array is Fortran order
        flat = dense.reshape(-1, order="F")
        return fwht(flat).reshape(g.moduli, order="F")
    # sum_x a_x exp(+2*pi*i x.y/n): the unscaled inverse DFT
    return np.fft.ifftn(dense, norm="forward")


def transform(mu: DiscreteMeasure) -> SpectrumProfile:
    """Exact transform on the full dual of a finite group."""
    g = mu.group
    if not g.is_finite:
        raise ValueError("exact transform needs a finite group; use transform_grid")
    values = _finite_values(mu)
    _spot_check(mu, values)
    m = float(np.abs(values).min())
    return SpectrumProfile(g, values, True, m, 0.0)


def _spot_check(mu: DiscreteMeasure, values: np.ndarray):
    shape = values.shape
    picks = {tuple(0 for _ in shape), tuple(n - 1 for n in shape), tuple(n // 2 for n in shape),
             tuple((7 * i + 3) % n for i, n in enumerate(shape))}
    scale = max(1.0, sum(abs(a) for a in mu.atoms.values()))
    for gamma in picks:
        direct = naive_transform_at(mu, gamma)
        if abs(direct - values[gamma]) > SPOT_TOL * scale:
            raise ArithmeticError(
                f"fast transform disagrees with direct sum at {gamma}: "
                f"{values[gamma]} vs {direct}")


def lipschitz_constant(mu: DiscreteMeasure) -> float:
    return math.fsum(abs(a) * sum(abs(c) for c in x) for x, a in mu.atoms.items())


def transform_grid(mu: DiscreteMeasure, mesh: int) -> SpectrumProfile:
    """Sample a lattice measure's transform on the ``mesh**d`` uniform torus grid.

    Folding coordinates modulo ``mesh`` turns grid sampling into a finite DFT
    on Z_mesh^d, which is exact (characters at grid angles are mesh-periodic).
    """
    g = mu.group
    if g.is_finite:
        raise ValueError("grid sampling is for lattice groups; use transform")
    mesh = int(mesh)
    if mesh < 2:
        raise ValueError("mesh must be >= 2")
    folded = np.zeros((mesh,) * g.rank, dtype=complex)
    for x, a in mu.atoms.items():
        folded[tuple(c % mesh for c in x)] += a
    values = np.fft.ifftn(folded, norm="forward")
    L = lipschitz_constant(mu)
    gap = L * (TWO_PI / mesh) / 2
    observed = float(np.abs(values).min())
    return SpectrumProfile(g, values, False, max(0.0, observed - gap), gap, mesh, L)


def spectral_min(p: SpectrumProfile) -> tuple[float, float]:
    """(certified lower bound, observed minimum) of |mu^|."""
    observed = p.observed_min
    return (observed if p.exact else p.certified_min), observed


def refine_until(mu: DiscreteMeasure, target_gap: float, max_mesh: int,
                 start_mesh: int = 16) -> SpectrumProfile:
    """Double the mesh until the certificate gap is at most ``target_gap``."""
    mesh = max(2, int(start_mesh))
    while True:
        profile = transform_grid(mu, mesh)
        if profile.certified_max_gap <= target_gap:
            return profile
        mesh *= 2
        if mesh > max_mesh:
            raise BudgetExceeded(
                f"gap {profile.certified_max_gap:.3g} > {target_gap:.3g} at mesh "
                f"{profile.mesh}; next mesh {mesh} exceeds {max_mesh}", profile)


def spectrum_delta(mu: DiscreteMeasure, target_gap: float = 1e-3,
                   max_mesh: int | None = None) -> tuple[float, SpectrumProfile]:
    """Certified lower bound on inf |mu^| with the profile that produced it."""
    if mu.group.is_finite:
        p = transform(mu)
        return p.certified_min, p
    if max_mesh is None:
        max_mesh = {1: 1 << 20, 2: 2048}.get(mu.group.rank, 128)
    p = refine_until(mu, target_gap, max_mesh)
    return p.certified_min, p


def profile_to_csv(p: SpectrumProfile) -> str:
    """CSV text: a ``#`` header line with the certificate, then one row per dual point."""
    buf = io.StringIO()
    buf.write(f"# group={p.group} exact={int(p.exact)} certified_min={p.certified_min!r} "
              f"gap={p.certified_max_gap!r} mesh={p.mesh or 0}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"gamma{j + 1}" for j in range(p.values.ndim)] + ["re", "im", "modulus"])
    flat = p.values.reshape(-1)
    for point, v in zip(p.dual_points(), flat):
        w.writerow([repr(c) for c in point] + [repr(float(v.real)), repr(float(v.imag)),
                                               repr(float(abs(v)))])
    return buf.getvalue()


def profile_from_csv(text: str) -> dict:
    """Parse the CSV written by :func:`profile_to_csv` into header fields and rows."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError("missing certificate header line")
    header = dict(tok.split("=", 1) for tok in lines[0][1:].split())
    reader = csv.reader(lines[1:])
    columns = next(reader)
    rows = [[float(v) for v in r] for r in reader]
    return {
        "group": header["group"],
        "exact": header["exact"] == "1",
        "certified_min": float(header["certified_min"]),
        "gap": float(header["gap"]),
        "mesh": int(header["mesh"]),
        "columns": columns,
        "rows": rows,
    }
