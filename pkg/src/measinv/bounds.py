"""Closed-form inverse-norm bounds and per-theorem applicability reports."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import DomainError, NotApplicable, PreconditionViolated, Singular
from .groups import element_order, is_independent, sub
from .measures import DiscreteMeasure, sorted_atoms, tv_norm

SLACK = 1e-12
NORM_TOL = 1e-9
NIES_THRESHOLD = (-1 + math.sqrt(33)) / 8
LINEAR_THRESHOLD = 2 / 3


def _nonincreasing_nonneg(x) -> bool:
    return all(v >= 0 for v in x) and all(a >= b for a, b in zip(x, x[1:]))


@dataclass(frozen=True)
class SumkiCheck:
    x1_min: float
    pair_min: float
    holds: bool


def check_sumki(x, delta: float) -> SumkiCheck:
    """For nonincreasing x >= 0 with sum <= 1 and sum of squares >= delta^2:
    x1 >= delta^2 and x1 + x2 >= delta."""
    x = [float(v) for v in x]
    if not x:
        raise PreconditionViolated("nonempty sequence")
    if not _nonincreasing_nonneg(x):
        raise PreconditionViolated("non-increasing non-negative sequence")
    if not 0.5 < delta <= 1:
        raise PreconditionViolated("1 >= delta > 1/2", f"delta = {delta!r}")
    if math.fsum(x) > 1 + SLACK:
        raise PreconditionViolated("sum x_n <= 1", f"sum = {math.fsum(x)!r}")
    if math.fsum(v * v for v in x) < delta * delta - SLACK:
        raise PreconditionViolated("sum x_n^2 >= delta^2")
    x1 = x[0]
    x2 = x[1] if len(x) > 1 else 0.0
    holds = x1 >= delta * delta - SLACK and x1 + x2 >= delta - SLACK
    return SumkiCheck(delta * delta, delta, holds)


def check_sumadw(mu: DiscreteMeasure, delta: float) -> bool:
    """Largest atoms satisfy |a1| >= delta^2 and |a1| + |a2| >= delta.

    ``delta`` must be a certified lower bound on inf |mu^|.
    """
    norm = tv_norm(mu)
    if norm > 1 + SLACK:
        raise PreconditionViolated("norm <= 1", f"||mu|| = {norm!r}")
    if not delta > 0.5:
        raise PreconditionViolated("delta > 1/2", f"delta = {delta!r}")
    mods = [abs(a) for _, a in sorted_atoms(mu)] + [0.0, 0.0]
    return mods[0] >= delta * delta - SLACK and mods[0] + mods[1] >= delta - SLACK


@dataclass(frozen=True)
class NiesBound:
    a1_min: float
    a1_min_linear: float
    norm_bound_linear: float | None
    norm_bound_refined: float | None


def bound_nies(delta: float) -> NiesBound:
    """Atom-mass and inverse-norm bounds when tau_2 - tau_1 has infinite order."""
    disc = 17 * delta * delta + 6 * delta - 7
    if not delta > 0.5 or disc < 0:
        raise DomainError(f"bound needs delta > 1/2 (got {delta!r})")
    root = math.sqrt(disc)
    a1 = (1 - delta + root) / 4
    linear = 1 / (3 * delta - 2) if delta > LINEAR_THRESHOLD else None
    refined = None
    if delta > NIES_THRESHOLD:
        denom = -(1 + delta) + root
        refined = 2 / denom if denom > 0 else None
    return NiesBound(a1, 1.5 * delta - 0.5, linear, refined)


@dataclass(frozen=True)
class SkonczoBound:
    f: float
    norm_bound: float | None


def bound_skonczo(delta: float, n: int) -> SkonczoBound:
    """Bound when tau_2 - tau_1 has finite order n.

    The bound is emitted whenever f(delta) > 1/2, i.e. for
    delta > (2 - s)/(3 - 2s) with s = sin(pi/(2n)).
    """
    if not 0.5 < delta <= 1:
        raise DomainError(f"delta must lie in (1/2, 1], got {delta!r}")
    if int(n) < 2:
        raise DomainError(f"order must be >= 2, got {n}")
    s = math.sin(math.pi / (2 * int(n)))
    f = delta - (1 - delta) / (2 * (1 - s))
    return SkonczoBound(f, 1 / (2 * f - 1) if f > 0.5 else None)


def skonczo_threshold(n: int) -> float:
    s = math.sin(math.pi / (2 * n))
    return (2 - s) / (3 - 2 * s)


def check_pocz(x, delta: float) -> bool:
    """x1 >= delta + sum_{n>=2} x_n, given both sign-pattern sums have modulus >= delta."""
    x = [float(v) for v in x]
    if not x:
        raise PreconditionViolated("nonempty sequence")
    if not _nonincreasing_nonneg(x):
        raise PreconditionViolated("non-increasing non-negative sequence")
    if not delta > 0.5:
        raise PreconditionViolated("delta > 1/2", f"delta = {delta!r}")
    if math.fsum(x) > 1 + SLACK:
        raise PreconditionViolated("sum x_n <= 1")
    alternating = math.fsum(v if i % 2 == 0 else -v for i, v in enumerate(x))
    rest = math.fsum(x[1:])
    if abs(alternating) < delta - SLACK:
        raise PreconditionViolated("|alternating sum| >= delta", f"{abs(alternating)!r}")
    if abs(x[0] - rest) < delta - SLACK:
        raise PreconditionViolated("|x1 - sum of rest| >= delta", f"{abs(x[0] - rest)!r}")
    return x[0] >= delta + rest - SLACK


@dataclass(frozen=True)
class NornzCertificate:
    applies: bool
    bound: float | None = None
    refined: float | None = None
    reason: str = ""


def certify_nornz(mu: DiscreteMeasure, delta: float) -> NornzCertificate:
    """Optimal bound 1/(2*delta - 1) for lattice measures with independent support.

    The support must be independent in Z^d (a zero point is harmless).
    """
    g = mu.group
    if g.is_finite:
        return NornzCertificate(False, reason="support elements must have infinite order")
    if not delta > 0.5:
        raise PreconditionViolated("delta > 1/2", f"delta = {delta!r}")
    atoms = sorted_atoms(mu)
    if not atoms:
        return NornzCertificate(False, reason="zero measure")
    if not is_independent(g, [x for x, _ in atoms]):
        return NornzCertificate(False, reason="support is not independent")
    a = abs(atoms[0][1])
    norm = tv_norm(mu)
    denom = 2 * (norm + delta - a) - 1
    return NornzCertificate(True, 1 / (2 * delta - 1), 1 / denom if denom > 0 else None)


def qualitative_invertible(mu: DiscreteMeasure, delta: float) -> bool:
    norm = tv_norm(mu)
    if norm > 1 + SLACK:
        raise PreconditionViolated("norm <= 1", f"||mu|| = {norm!r}")
    return delta > 0.5


# ---------------------------------------------------------------------------
# reports

APPLIES = "Applies"
FAILS = "FailsHypothesis"
THEOREMS = ("glop", "latw", "nikolski", "nies", "skonczo", "nornz", "nornz_refined", "rzd")


@dataclass(frozen=True)
class Verdict:
    status: str
    predicted: float | None = None
    reason: str = ""

    @property
    def applies(self) -> bool:
        return self.status == APPLIES


def _applies(value: float) -> Verdict:
    return Verdict(APPLIES, value)


def _fails(reason: str) -> Verdict:
    return Verdict(FAILS, None, reason)


@dataclass
class BoundReport:
    delta: float
    tv: float
    atom_head: tuple[float, float]
    verdicts: dict[str, Verdict] = field(default_factory=dict)
    observed_inverse_norm: float | None = None
    observed_method: str | None = None
    delta_source: str = "exact"
    delta_gap: float = 0.0

    def violations(self, tol: float = NORM_TOL) -> list[str]:
        """Theorems whose prediction is beaten by the observed inverse norm."""
        if self.observed_inverse_norm is None:
            return []
        return [name for name, v in self.verdicts.items()
                if v.applies and self.observed_inverse_norm > v.predicted + tol]

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "delta_source": self.delta_source,
            "delta_gap": self.delta_gap,
            "tv_norm": self.tv,
            "atom_head": list(self.atom_head),
            "observed_inverse_norm": self.observed_inverse_norm,
            "observed_method": self.observed_method,
            "theorems": {
                name: {"verdict": v.status,
                       "predicted": None if v.predicted is None or math.isinf(v.predicted)
                       else v.predicted,
                       "qualitative_only": v.predicted is not None and math.isinf(v.predicted),
                       "reason": v.reason}
                for name, v in self.verdicts.items()
            },
            "violations": self.violations(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def bound_report(mu: DiscreteMeasure, delta: float, *, observe: bool = True,
                 delta_source: str = "exact", delta_gap: float = 0.0,
                 tol: float = 1e-9) -> BoundReport:
    """Evaluate every theorem against ``mu`` using the certified lower bound ``delta``.

    ``glop`` is qualitative: when it applies its prediction is ``inf``.
    """
    from .inversion import dense_invert, neumann_invert, nikolski_invert

    g = mu.group
    norm = tv_norm(mu)
    atoms = sorted_atoms(mu)
    mods = [abs(a) for _, a in atoms] + [0.0, 0.0]
    rep = BoundReport(delta, norm, (mods[0], mods[1]),
                      delta_source=delta_source, delta_gap=delta_gap)
    v = rep.verdicts
    norm_ok = norm <= 1 + SLACK

    if not norm_ok:
        for name in THEOREMS:
            v[name] = _fails("norm <= 1")
    else:
        v["glop"] = _applies(math.inf) if delta > 0.5 else _fails("inf |mu^| > 1/2")
        v["latw"] = (_applies(1 / (2 * mods[0] - 1)) if mods[0] > 0.5
                     else _fails("largest atom > 1/2"))
        v["nikolski"] = (_applies(1 / (2 * delta * delta - 1)) if delta * delta > 0.5 + SLACK
                         else _fails("inf |mu^| > 1/sqrt(2)"))

        if len(atoms) < 2:
            v["nies"] = v["skonczo"] = _fails("needs a second atom")
        else:
            order = element_order(g, sub(g, atoms[1][0], atoms[0][0]))
            if math.isinf(order):
                v["skonczo"] = _fails("tau2 - tau1 has infinite order")
                refined = bound_nies(delta).norm_bound_refined if delta > 0.5 else None
                if refined is not None:
                    v["nies"] = _applies(refined)
                else:
                    v["nies"] = _fails("delta > (-1 + sqrt(33))/8")
            else:
                v["nies"] = _fails("tau2 - tau1 has finite order")
                sk = bound_skonczo(delta, order) if 0.5 < delta <= 1 else None
                if sk is not None and sk.norm_bound is not None:
                    v["skonczo"] = _applies(sk.norm_bound)
                else:
                    v["skonczo"] = _fails(f"f(delta) > 1/2 for order {order}")

        if g.is_finite:
            v["nornz"] = v["nornz_refined"] = _fails("support elements must have infinite order")
        elif not delta > 0.5:
            v["nornz"] = v["nornz_refined"] = _fails("inf |mu^| > 1/2")
        else:
            cert = certify_nornz(mu, delta)
            if cert.applies:
                v["nornz"] = _applies(cert.bound)
                v["nornz_refined"] = (_applies(cert.refined) if cert.refined is not None
                                      else _fails("refined denominator positive"))
            else:
                v["nornz"] = v["nornz_refined"] = _fails(cert.reason)

        if not g.has_exponent_two:
            v["rzd"] = _fails("2x = 0 for every x")
        elif not mu.is_real:
            v["rzd"] = _fails("real measure")
        elif not delta > 0.5:
            v["rzd"] = _fails("inf |mu^| > 1/2")
        else:
            v["rzd"] = _applies(1 / (2 * delta - 1))

    if observe:
        try:
            if g.is_finite:
                res = dense_invert(mu)
            else:
                try:
                    res = neumann_invert(mu, tol)
                except NotApplicable:
                    res = nikolski_invert(mu, delta, tol)
            rep.observed_inverse_norm = res.inverse_norm
            rep.observed_method = res.method
        except (NotApplicable, Singular):
            pass
    return rep
