import cmath
import math

import numpy as np
import pytest

from measinv.groups import GroupSpec
from measinv.measures import DiscreteMeasure

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def naive_dft(mu):
    """O(|G|^2) transform straight from the definition, keyed by dual element."""
    g = mu.group
    out = {}
    for gamma in g.elements():
        total = 0j
        for x, a in mu.atoms.items():
            phase = sum(xi * yi / n for xi, yi, n in zip(x, gamma, g.moduli))
            total += a * cmath.exp(2j * math.pi * phase)
        out[gamma] = total
    return out


def naive_dft_array(mu):
    """Naive transform as an array; loops over the support, vectorized over the dual."""
    g = mu.group
    grids = np.meshgrid(*(np.arange(n) for n in g.moduli), indexing="ij")
    out = np.zeros(g.moduli, dtype=complex)
    for x, a in mu.atoms.items():
        phase = sum(xi * grid / n for xi, grid, n in zip(x, grids, g.moduli))
        out += a * np.exp(2j * np.pi * phase)
    return out


def random_measure(rng, group, support=None, norm=None, real=False):
    """Random atoms; ``support`` caps the number of points, ``norm`` rescales the l1 norm."""
    elements = list(group.elements())
    k = len(elements) if support is None else min(support, len(elements))
    picks = rng.choice(len(elements), size=k, replace=False)
    amps = rng.normal(size=k) + (0 if real else 1j * rng.normal(size=k))
    if norm is not None:
        amps *= norm / np.abs(amps).sum()
    return DiscreteMeasure(group, {elements[i]: a for i, a in zip(picks, amps)})


def dominant_measure(rng, group, margin=1e-3, real=False):
    """Head mass m in (1/2, 1] with tail l1 <= min(1 - m, m - 1/2 - margin), so delta > 1/2."""
    elements = list(group.elements())
    m = rng.uniform(0.5 + 2 * margin, 1.0)
    budget = min(1 - m, m - 0.5 - margin) * rng.uniform(0, 1)
    head = elements[rng.integers(len(elements))]
    phase = 1.0 if real else cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    atoms = {head: m * phase}
    others = [e for e in elements if e != head]
    if others and budget > 0:
        k = rng.integers(1, len(others) + 1)
        picks = rng.choice(len(others), size=k, replace=False)
        amps = rng.normal(size=k) + (0 if real else 1j * rng.normal(size=k))
        amps *= budget / np.abs(amps).sum()
        for i, a in zip(picks, amps):
            atoms[others[i]] = a
    return DiscreteMeasure(group, atoms)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def z2():
    return GroupSpec.finite(2)


@pytest.fixture
def complex_pair(z2):
    return DiscreteMeasure(z2, {(0,): 0.5, (1,): 0.5j})
