import numpy as np
import pytest

from measinv.dyadic import (DyadicMeasure, colex_coords, colex_index, fwht,
                            greatest_atom_certificate, skondwa_split, wht)
from measinv.errors import PreconditionViolated
from measinv.groups import GroupSpec
from measinv.measures import DiscreteMeasure, dirac
from measinv.spectra import transform


def naive_wht(a):
    out = np.zeros(len(a))
    for y in range(len(a)):
        for x in range(len(a)):
            out[y] += a[x] * (-1) ** bin(x & y).count("1")
    return out


def test_colex_order():
    assert colex_index((1, 0, 0)) == 1
    assert colex_index((0, 0, 1)) == 4
    for k in range(16):
        assert colex_index(colex_coords(k, 4)) == k


def test_wht_examples():
    assert wht(DyadicMeasure(1, [1, 0])) == pytest.approx([1, 1])
    assert wht(DyadicMeasure(1, [0.8, 0.2])) == pytest.approx([1.0, 0.6], abs=1e-15)
    assert wht(DyadicMeasure(2, [0.25] * 4)) == pytest.approx([1, 0, 0, 0], abs=1e-15)


def test_wht_matches_naive_and_general_transform(rng):
    for n in range(1, 8):
        a = rng.normal(size=1 << n)
        m = DyadicMeasure(n, a)
        assert np.abs(wht(m) - naive_wht(a)).max() <= 1e-10
        # the same values through the generic finite-group transform
        vals = transform(m.to_measure()).values
        for k in range(1 << n):
            assert abs(vals[colex_coords(k, n)] - wht(m)[k]) <= 1e-10


def test_wht_involution(rng):
    for n in range(1, 11):
        a = rng.normal(size=1 << n)
        assert np.abs(fwht(fwht(a)) - (1 << n) * a).max() <= 1e-9


def test_fwht_rejects_bad_length():
    with pytest.raises(ValueError):
        fwht(np.ones(6))


def test_split_examples():
    b, c = skondwa_split(DyadicMeasure(2, [0.7, 0.1, 0.1, 0.1]))
    assert b.amplitudes == pytest.approx([0.8, 0.2]) and c.amplitudes == pytest.approx([0.6, 0.0])
    b, c = skondwa_split(DyadicMeasure(3, [0.3, 0.1, 0.2, 0.1, 0, 0, 0, 0]))
    assert b == c == DyadicMeasure(2, [0.3, 0.1, 0.2, 0.1])
    b, c = skondwa_split(DyadicMeasure(2, [0.25] * 4))
    assert b.amplitudes == pytest.approx([0.5, 0.5]) and c.amplitudes == pytest.approx([0, 0])
    with pytest.raises(ValueError):
        skondwa_split(DyadicMeasure(1, [1, 0]))


def test_split_transforms_are_halves(rng):
    for n in range(2, 9):
        m = DyadicMeasure(n, rng.normal(size=1 << n))
        b, c = skondwa_split(m)
        full = wht(m)
        # colex order puts the duals ending in 0 in the first half
        h = 1 << (n - 1)
        assert np.abs(wht(b) - full[:h]).max() <= 1e-10
        assert np.abs(wht(c) - full[h:]).max() <= 1e-10


def test_certificate_examples(complex_pair):
    r = greatest_atom_certificate(DyadicMeasure(1, [0.8, 0.2]), 0.6)
    assert r["max_atom"] == 0.8 and r["holds"] and r["agrees"]
    for n in (1, 3, 5):
        g = GroupSpec.finite(*([2] * n))
        r = greatest_atom_certificate(dirac(g), 1.0)
        assert r["holds"] and r["max_atom"] == 1
    with pytest.raises(PreconditionViolated) as info:
        greatest_atom_certificate(complex_pair, 1 / 2 ** 0.5)
    assert info.value.hypothesis == "real measure"


def test_certificate_preconditions():
    with pytest.raises(PreconditionViolated):
        greatest_atom_certificate(DyadicMeasure(1, [0.8, 0.2]), 0.7)
    with pytest.raises(PreconditionViolated):
        greatest_atom_certificate(DyadicMeasure(1, [0.8, 0.3]), 0.6)
    with pytest.raises(PreconditionViolated):
        greatest_atom_certificate(DyadicMeasure(1, [0.8, 0.2]), 0.5)


def random_admissible(rng, n):
    """Real measure with a dominant atom; delta taken as its exact spectral minimum."""
    a = rng.normal(size=1 << n)
    head = rng.integers(1 << n)
    a[head] = 0
    mass = rng.uniform(0.55, 1.0)
    tail = rng.uniform(0, min(1 - mass, mass - 0.5)) * rng.uniform(0.5, 1.0)
    s = np.abs(a).sum()
    a = a * (tail / s) if s else a
    a[head] = mass * rng.choice([-1, 1])
    m = DyadicMeasure(n, a)
    return m, float(np.abs(wht(m)).min())


def test_certificate_randomized_agreement(rng):
    checked = 0
    for i in range(10_000):
        n = 1 + i % 10
        m, delta = random_admissible(rng, n)
        if not delta > 0.5:
            continue
        r = greatest_atom_certificate(m, delta)
        assert r["holds"] and r["agrees"]
        checked += 1
    assert checked > 9_000


def test_roundtrip_measure(rng):
    g = GroupSpec.finite(2, 2, 2)
    mu = DiscreteMeasure(g, {(1, 0, 1): 0.3, (0, 1, 1): -0.2})
    m = DyadicMeasure.from_measure(mu)
    assert m.amplitudes[5] == 0.3 and m.amplitudes[6] == -0.2
    assert m.to_measure() == mu
    with pytest.raises(ValueError):
        DyadicMeasure.from_measure(dirac(GroupSpec.finite(4)))
    with pytest.raises(ValueError):
        m.amplitudes[0] = 1
