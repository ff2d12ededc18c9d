"""Seeded stochastic search over measures with ||mu|| <= 1 and min |mu^| >= delta.

On Z_n a measure is the first row of a circulant matrix and its transform
values are the eigenvalues, so maximizing ||mu^{-1}|| probes how large the
inverse of a norm-one circulant can get for a given smallest eigenvalue.

Every accepted state is feasible (constraint by rejection), so incumbents are
always valid witnesses.  Restart ``r`` draws from ``default_rng(seed ^ r)``,
which keeps results independent of how restarts are scheduled.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .dyadic import DyadicMeasure, fwht, greatest_atom_certificate
from .errors import Infeasible
from .groups import GroupSpec, character_eval, kronecker_solve
from .inversion import dense_invert, dual_division_norm
from .measures import DiscreteMeasure, tv_norm
from .spectra import transform

log = logging.getLogger(__name__)

VIOLATION_TOL = 1e-6
VERIFY_TOL = 1e-9

INVERSE_NORM = "InverseNorm"
SUMADW = "Sumadw"
POCZ = "Pocz"
DYADIC = "Dyadic"
CLAIMS = (SUMADW, POCZ, DYADIC)


@dataclass(frozen=True)
class SearchConfig:
    group: GroupSpec
    delta_target: float
    real_only: bool = False
    restarts: int = 8
    steps: int = 2000
    scale: float = 0.05
    decay: float = 0.999
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if not self.delta_target > 0:
            raise ValueError(f"delta_target must be positive, got {self.delta_target}")
        if self.restarts < 1 or self.steps < 1:
            raise ValueError("restarts and steps must be >= 1")
        if not 0 < self.decay < 1:
            raise ValueError(f"decay must lie in (0, 1), got {self.decay}")
        if not self.scale > 0:
            raise ValueError("initial proposal scale must be positive")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SearchOutcome:
    best: DiscreteMeasure
    delta_achieved: float
    inverse_norm: float
    latw_curve: float
    nikolski_curve: float
    trace: tuple[float, ...]


@dataclass(frozen=True)
class AdversarialOutcome:
    claim: str
    violation_found: bool
    witness: DiscreteMeasure | None
    best_gap: float
    incumbents_checked: int
    certificate_disagreements: int
    trace: tuple[float, ...]


def latw_curve(delta: float) -> float:
    return 1 / (2 * delta - 1) if delta > 0.5 else math.inf


def nikolski_curve(delta: float) -> float:
    return 1 / (2 * delta * delta - 1) if delta * delta > 0.5 + 1e-12 else math.inf


# ---------------------------------------------------------------------------
# problem encodings: amplitude vector -> (feasible, score, hypothesis level)

class _FiniteProblem:
    """Dense amplitudes on a finite group; the constraint is on the full dual."""

    def __init__(self, cfg: SearchConfig, kind: str):
        self.cfg = cfg
        self.kind = kind
        self.shape = cfg.group.moduli
        self.size = cfg.group.order
        self.real = cfg.real_only or kind == DYADIC
        self.fast_wht = cfg.group.has_exponent_two

    def spectrum_min(self, a: np.ndarray) -> float:
        if self.fast_wht:
            return float(np.abs(fwht(a)).min())
        return float(np.abs(np.fft.ifftn(a.reshape(self.shape), norm="forward")).min())

    def score(self, a: np.ndarray, smin: float) -> float:
        if self.kind == INVERSE_NORM:
            return dual_division_norm(a.reshape(self.shape))
        mods = np.sort(np.abs(a))[::-1]
        if self.kind == SUMADW:
            return max(smin * smin - mods[0], smin - mods[0] - mods[1])
        if self.kind == DYADIC:
            return smin - mods[0]
        raise ValueError(self.kind)

    def start(self, rng: np.random.Generator) -> np.ndarray:
        d = self.cfg.delta_target
        a = np.zeros(self.size, dtype=float if self.real else complex)
        head = d if d >= 1 else rng.uniform(d, 1.0)
        a[0] = head
        budget = min(1 - head, head - d) * rng.uniform(0.0, 1.0)
        if self.size > 1 and budget > 0:
            tail = rng.normal(size=self.size - 1)
            if not self.real:
                tail = tail + 1j * rng.normal(size=self.size - 1)
            a[1:] = tail * (budget / np.abs(tail).sum())
        return a

    def to_measure(self, a: np.ndarray) -> DiscreteMeasure:
        # exponent-two states are colex-ordered, which is Fortran order on the coordinate array
        order = "F" if self.fast_wht else "C"
        return DiscreteMeasure.from_dense(self.cfg.group, a.reshape(self.shape, order=order),
                                          prune=0.0)


class _PoczProblem:
    """Nonnegative masses on {0, e_1, ..., e_d} in Z^d.

    The two sign-pattern sums of the lemma are evaluated as transform values
    at characters obtained from Kronecker's theorem.
    """

    real = True

    def __init__(self, cfg: SearchConfig):
        g = cfg.group
        if g.is_finite:
            raise ValueError("the Pocz claim is encoded on a lattice Z^d")
        self.cfg = cfg
        self.group = g
        self.size = g.rank + 1
        self.points = [g.zero()] + [tuple(int(i == j) for i in range(g.rank))
                                    for j in range(g.rank)]
        self._angles: dict[tuple[int, ...], tuple[float, ...]] = {}

    def _value(self, x: np.ndarray, signs_by_rank) -> float:
        order = np.argsort(-x, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(len(x))
        s0 = signs_by_rank[rank[0]]
        targets = tuple(int(signs_by_rank[rank[k]] * s0) for k in range(1, self.size))
        theta = self._angles.get(targets)
        if theta is None:
            theta = kronecker_solve(self.group, self.points[1:], [complex(t) for t in targets])
            self._angles[targets] = theta
        val = x[0] + sum(x[k] * character_eval(self.group, theta, self.points[k])
                         for k in range(1, self.size))
        return abs(val)

    def spectrum_min(self, a: np.ndarray) -> float:
        x = np.abs(a)
        alternating = self._value(x, [(-1) ** i for i in range(self.size)])
        head_vs_rest = self._value(x, [1] + [-1] * (self.size - 1))
        return min(alternating, head_vs_rest)

    def score(self, a: np.ndarray, smin: float) -> float:
        x = np.sort(np.abs(a))[::-1]
        return smin + x[1:].sum() - x[0]

    def start(self, rng: np.random.Generator) -> np.ndarray:
        d = self.cfg.delta_target
        head = d if d >= 1 else rng.uniform(d, 1.0)
        a = np.zeros(self.size)
        a[0] = head
        budget = min(1 - head, head - d) * rng.uniform(0.0, 1.0)
        tail = rng.uniform(size=self.size - 1)
        if budget > 0 and tail.sum() > 0:
            a[1:] = tail * (budget / tail.sum())
        return a

    def to_measure(self, a: np.ndarray) -> DiscreteMeasure:
        return DiscreteMeasure(self.group, {p: abs(v) for p, v in zip(self.points, a)})


def _problem(cfg: SearchConfig, kind: str):
    if kind == POCZ:
        return _PoczProblem(cfg)
    if not cfg.group.is_finite:
        raise ValueError(f"{kind} search needs a finite group")
    if kind == DYADIC and not cfg.group.has_exponent_two:
        raise ValueError("the dyadic claim needs a group Z2^n")
    return _FiniteProblem(cfg, kind)


def _anneal(cfg: SearchConfig, kind: str, restart: int) -> dict:
    """One restart; returns the best feasible state and the incumbents seen."""
    prob = _problem(cfg, kind)
    rng = np.random.default_rng(int(cfg.seed) ^ restart)
    d = cfg.delta_target
    a = prob.start(rng)
    smin = prob.spectrum_min(a)
    if np.abs(a).sum() > 1 + 1e-12 or smin < d:
        a = np.zeros_like(a)
        a[0] = 1.0
        smin = prob.spectrum_min(a)
    score = prob.score(a, smin)
    best, best_score = a.copy(), score
    incumbents = [a.copy()]
    scale = cfg.scale
    for _ in range(cfg.steps):
        j = rng.integers(prob.size)
        step = rng.normal() * scale
        cand = a.copy()
        if prob.real:
            cand[j] += step
        else:
            cand[j] += step + 1j * rng.normal() * scale
        l1 = np.abs(cand).sum()
        if l1 > 1:
            cand /= l1
        u = rng.random()
        cmin = prob.spectrum_min(cand)
        if cmin >= d:
            cscore = prob.score(cand, cmin)
            # scale doubles as the annealing temperature
            if cscore >= score or u < math.exp((cscore - score) / scale):
                a, score = cand, cscore
                if score > best_score:
                    best, best_score = a.copy(), score
                    incumbents.append(best)
        scale *= cfg.decay
    return {"best": best, "score": best_score, "incumbents": incumbents}


def _run_restarts(cfg: SearchConfig, kind: str) -> list[dict]:
    if cfg.delta_target > 1:
        raise Infeasible(f"min |mu^| >= {cfg.delta_target} > 1 is impossible with ||mu|| <= 1")
    jobs = range(cfg.restarts)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(_anneal, [cfg] * cfg.restarts, [kind] * cfg.restarts, jobs))
    return [_anneal(cfg, kind, r) for r in jobs]


def _pick(runs: list[dict]) -> dict:
    # max score, earliest restart on ties: independent of worker scheduling
    return max(enumerate(runs), key=lambda item: (item[1]["score"], -item[0]))[1]


def search_max_inverse_norm(cfg: SearchConfig) -> SearchOutcome:
    """Look for a feasible measure with the largest inverse norm.

    The winner is re-verified with the exact transform and the dense inverse.
    """
    if not cfg.group.is_finite:
        raise ValueError("extremal search needs a finite group")
    runs = _run_restarts(cfg, INVERSE_NORM)
    win = _pick(runs)
    prob = _problem(cfg, INVERSE_NORM)
    best = prob.to_measure(win["best"])
    delta = transform(best).certified_min
    norm = tv_norm(best)
    if norm > 1 + VERIFY_TOL or delta < cfg.delta_target - VERIFY_TOL:
        raise ArithmeticError(
            f"search returned an infeasible witness (norm {norm!r}, delta {delta!r})")
    inv = dense_invert(best)
    return SearchOutcome(best, delta, inv.inverse_norm, latw_curve(delta),
                         nikolski_curve(delta), tuple(r["score"] for r in runs))


def adversarial_atom_test(cfg: SearchConfig, claim: str) -> AdversarialOutcome:
    """Try to break an atom-mass inequality; a found violation is re-verified.

    The score is (claimed lower bound) - (achieved atom quantity) evaluated at
    the hypothesis level actually attained by the state, so positive scores
    are counterexamples.
    """
    if claim not in CLAIMS:
        raise ValueError(f"unknown claim {claim!r}; expected one of {CLAIMS}")
    if not cfg.delta_target > 0.5:
        raise ValueError("atom-mass claims need delta_target > 1/2")
    runs = _run_restarts(cfg, claim)
    prob = _problem(cfg, claim)
    checked = disagreements = 0
    if claim == DYADIC:
        n = len(cfg.group.moduli)
        for run in runs:
            for state in run["incumbents"]:
                cert = greatest_atom_certificate(DyadicMeasure(n, state.real), cfg.delta_target)
                checked += 1
                disagreements += (not cert["agrees"]) or (not cert["holds"])
    win = _pick(runs)
    witness = prob.to_measure(win["best"])
    violation = win["score"] > VIOLATION_TOL
    if violation:
        # recheck on the measure object: exact transform on finite groups
        smin = (transform(witness).certified_min if cfg.group.is_finite
                else prob.spectrum_min(win["best"]))
        violation = (tv_norm(witness) <= 1 + VERIFY_TOL and smin >= cfg.delta_target
                     and prob.score(win["best"], smin) > VIOLATION_TOL)
    return AdversarialOutcome(claim, bool(violation), witness, float(win["score"]),
                              checked, int(disagreements), tuple(r["score"] for r in runs))


@dataclass(frozen=True)
class SweepRow:
    delta: float
    best_norm: float
    latw_bound: float
    nikolski_bound: float
    seed: int
    restarts: int
    outcome: SearchOutcome | None = None

    @property
    def infeasible(self) -> bool:
        return self.outcome is None


def gap_sweep(group: GroupSpec, deltas, cfg: SearchConfig) -> list[SweepRow]:
    """Run the extremal search once per delta; infeasible rows carry NaN norms."""
    deltas = [float(d) for d in deltas]
    if not deltas:
        raise ValueError("empty delta grid")
    for d in deltas:
        if not 0.5 < d <= 1:
            raise ValueError(f"delta {d} outside (1/2, 1]")
    rows = []
    for d in deltas:
        c = replace(cfg, group=group, delta_target=d)
        try:
            out = search_max_inverse_norm(c)
            norm = out.inverse_norm
        except Infeasible:
            out, norm = None, math.nan
        rows.append(SweepRow(d, norm, latw_curve(d), nikolski_curve(d), cfg.seed,
                             cfg.restarts, out))
    ordered = sorted((r for r in rows if not r.infeasible), key=lambda r: r.delta)
    for lo, hi in zip(ordered, ordered[1:]):
        if hi.best_norm > lo.best_norm + 1e-9:
            log.warning("best norm increases from delta=%g (%g) to delta=%g (%g); "
                        "more restarts may be needed", lo.delta, lo.best_norm,
                        hi.delta, hi.best_norm)
    return rows


SWEEP_COLUMNS = ("delta", "best_norm", "latw_bound", "nikolski_bound", "seed", "restarts")


def sweep_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([repr(r.delta), repr(r.best_norm), repr(r.latw_bound),
                    repr(r.nikolski_bound), r.seed, r.restarts])
    return buf.getvalue()
