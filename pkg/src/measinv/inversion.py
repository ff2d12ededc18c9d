"""Inverse measures, by dense linear algebra or by convergent series."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotApplicable, Singular
from .measures import (DiscreteMeasure, convolve, dirac, involute, normalize_head,
                       point_mass_at_zero_of_selfconv, translate, tv_norm)

DEFAULT_TOL = 1e-9
DENSE_CAP = 4096
SINGULAR_EPS = 1e-12
NORM_SLACK = 1e-12
PATH_TOL = 1e-9

DENSE = "DenseSolve"
NEUMANN = "Neumann"
NIKOLSKI = "Nikolski"


@dataclass(frozen=True)
class InversionResult:
    inverse: DiscreteMeasure
    method: str
    inverse_norm: float
    residual: float
    truncated: bool
    guarantee: float | None = None
    terms: int = 0
    path_gap: float | None = None

    def to_dict(self) -> dict:
        from .fileio import measure_to_dict
        return {
            "method": self.method,
            "norm": self.inverse_norm,
            "residual": self.residual,
            "guarantee": self.guarantee,
            "truncated": self.truncated,
            "terms": self.terms,
            "path_gap": self.path_gap,
            "inverse": measure_to_dict(self.inverse),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def residual(mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
    """||mu * nu - delta_0|| in total variation."""
    return tv_norm(convolve(mu, nu) - dirac(mu.group))


def convolution_matrix(mu: DiscreteMeasure) -> np.ndarray:
    """Matrix C with (mu*nu) = C @ nu, elements in row-major coordinate order."""
    g = mu.group
    base = mu.dense()
    n = base.size
    C = np.empty((n, n), dtype=complex)
    axes = tuple(range(g.dim))
    for j, y in enumerate(np.ndindex(g.moduli)):
        C[:, j] = np.roll(base, y, axis=axes).reshape(-1)
    return C


def dense_invert(mu: DiscreteMeasure, cap: int = DENSE_CAP) -> InversionResult:
    """Exact inverse on a finite group, by linear solve and by dual division.

    The two routes are compared; disagreement beyond ``PATH_TOL`` (scaled by
    the conditioning ``1/min|mu^|``) raises ``ArithmeticError``.
    """
    g = mu.group
    if not g.is_finite:
        raise ValueError("dense inversion needs a finite group")
    if g.order > cap:
        raise ValueError(f"|G| = {g.order} exceeds dense cap {cap}")
    dense = mu.dense()
    spectrum = np.fft.ifftn(dense, norm="forward")
    smin = float(np.abs(spectrum).min())
    if smin < SINGULAR_EPS:
        raise Singular(f"transform vanishes on the dual (min |mu^| = {smin:.3g}); 0 is in the spectrum")
    rhs = np.zeros(dense.size, dtype=complex)
    rhs[0] = 1.0
    solved = np.linalg.solve(convolution_matrix(mu), rhs).reshape(g.moduli)
    divided = np.fft.fftn(1.0 / spectrum, norm="forward")
    gap = float(np.abs(solved - divided).max())
    if gap > PATH_TOL * max(1.0, 1.0 / smin):
        raise ArithmeticError(f"linear solve and dual division differ by {gap:.3g}")
    inv = DiscreteMeasure.from_dense(g, solved)
    return InversionResult(inv, DENSE, tv_norm(inv), residual(mu, inv), False, path_gap=gap)


def dual_division_norm(amplitudes: np.ndarray) -> float:
    """||mu^{-1}|| from dense amplitudes via 1/mu^; no checks (search inner loop)."""
    spectrum = np.fft.ifftn(amplitudes, norm="forward")
    return float(np.abs(np.fft.fftn(1.0 / spectrum, norm="forward")).sum())


def neumann_invert(mu: DiscreteMeasure, tol: float = DEFAULT_TOL,
                   max_terms: int = 100_000) -> InversionResult:
    """Geometric series around the dominant atom.

    After normalizing ``mu`` to ``lam*delta_0 + nu`` with ``lam = |a_1| > 0``,
    the inverse is ``lam^-1 * sum_k (-nu/lam)^k``.  The number of terms comes
    from the tail bound ``r^(K+1) / ((1-r) * lam) <= tol`` with
    ``r = ||nu|| / lam``.
    """
    norm = tv_norm(mu)
    if norm > 1 + NORM_SLACK:
        raise NotApplicable("norm <= 1", f"||mu|| = {norm!r}")
    shifted, tau, c = normalize_head(mu)
    g = mu.group
    lam = shifted[g.zero()].real
    nu = DiscreteMeasure(g, {x: a for x, a in shifted.atoms.items() if any(x)})
    r = tv_norm(nu) / lam
    if r >= 1:
        raise NotApplicable("dominant atom: ||mu - a_1 delta|| < |a_1|",
                            f"ratio {r!r} >= 1")
    if r == 0:
        K = 0
    else:
        # smallest K with r^(K+1) <= tol * (1 - r) * lam
        K = max(0, math.ceil(math.log(tol * (1 - r) * lam) / math.log(r)) - 1)
    if K > max_terms:
        raise NotApplicable("series length", f"{K} terms needed, cap is {max_terms}")
    step = nu.scale(-1.0 / lam)
    term = dirac(g)
    total = dirac(g)
    for _ in range(K):
        term = convolve(term, step)
        total = total + term
    inv_shifted = total.scale(1.0 / lam)
    inverse = _undo_normalization(inv_shifted, tau, c)
    res = residual(mu, inverse)
    # rounding can leave the measured residual just above tol; extend the series a little
    extra = 0
    while res > tol and extra < 8 and r > 0:
        term = convolve(term, step)
        total = total + term
        inverse = _undo_normalization(total.scale(1.0 / lam), tau, c)
        res = residual(mu, inverse)
        extra += 1
    guarantee = 1.0 / (2 * lam - 1) if lam > 0.5 else None
    return InversionResult(inverse, NEUMANN, tv_norm(inverse), res, r > 0, guarantee, K + extra)


def _undo_normalization(inv_shifted: DiscreteMeasure, tau, c: complex) -> DiscreteMeasure:
    # shifted = c * mu * delta_{-tau}  =>  mu^{-1} = c * shifted^{-1} * delta_{-tau}
    return translate(inv_shifted, tau, c)


def nikolski_invert(mu: DiscreteMeasure, delta: float, tol: float = DEFAULT_TOL) -> InversionResult:
    """Invert through ``mu^{-1} = (mu * mu~)^{-1} * mu~``.

    ``delta`` must be a certified lower bound on inf |mu^| with
    ``delta**2 > 1/2``; the hermitian square then has an atom at 0 of mass
    at least ``delta**2``, which makes it Neumann-invertible.
    """
    norm = tv_norm(mu)
    if norm > 1 + NORM_SLACK:
        raise NotApplicable("norm <= 1", f"||mu|| = {norm!r}")
    if not delta * delta > 0.5 + NORM_SLACK:
        raise NotApplicable("delta > 1/sqrt(2)", f"delta = {delta!r}")
    if point_mass_at_zero_of_selfconv(mu) < delta * delta - NORM_SLACK:
        raise NotApplicable("delta is a lower bound for |mu^|",
                            "sum |a_x|^2 < delta^2 contradicts Parseval")
    mu_t = involute(mu)
    sigma = convolve(mu, mu_t)
    inner = neumann_invert(sigma, tol)
    inverse = convolve(inner.inverse, mu_t)
    return InversionResult(inverse, NIKOLSKI, tv_norm(inverse), residual(mu, inverse),
                           inner.truncated, 1.0 / (2 * delta * delta - 1), inner.terms)
