import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from measinv.errors import DependentSupport, DimensionMismatch, ParseError
from measinv.groups import (Dense, GroupSpec, RootsOfUnity, add, character_eval,
                            character_value_set, dual_point, element_order, integer_rank,
                            is_independent, kronecker_solve, parse_group)


@pytest.mark.parametrize("text, expected", [
    ("Z2^4", GroupSpec.finite(2, 2, 2, 2)),
    ("Z6xZ4", GroupSpec.finite(6, 4)),
    ("Z^2", GroupSpec.lattice(2)),
    ("Z", GroupSpec.lattice(1)),
    ("Z32", GroupSpec.finite(32)),
    ("Z2^2xZ3", GroupSpec.finite(2, 2, 3)),
])
def test_parse_group(text, expected):
    assert parse_group(text) == expected
    assert parse_group(str(expected)) == expected


@pytest.mark.parametrize("bad", ["Z1", "Q2", "Z2x", "Z^0", "Z2^0", "", "z2"])
def test_parse_group_rejects(bad):
    with pytest.raises(ParseError):
        parse_group(bad)


def test_group_invariants():
    assert GroupSpec.finite(6, 4).order == 24
    assert GroupSpec.lattice(3).order == math.inf
    with pytest.raises(ValueError):
        GroupSpec.finite(1)
    with pytest.raises(ValueError):
        GroupSpec("Lattice", (2,), 1)


def test_add_examples():
    assert add(GroupSpec.finite(2, 2), (1, 0), (1, 1)) == (0, 1)
    assert add(GroupSpec.lattice(1), (3,), (-3,)) == (0,)
    assert add(GroupSpec.finite(6), (4,), (5,)) == (3,)
    with pytest.raises(DimensionMismatch):
        add(GroupSpec.finite(6), (4,), (5, 1))


def test_element_order_examples():
    assert element_order(GroupSpec.finite(6), (4,)) == 3
    assert element_order(GroupSpec.finite(2, 2), (1, 1)) == 2
    assert element_order(GroupSpec.lattice(2), (2, -1)) == math.inf
    assert element_order(GroupSpec.lattice(2), (0, 0)) == 1
    assert element_order(GroupSpec.finite(6, 4), (2, 1)) == 12


def test_character_eval_examples():
    g = GroupSpec.finite(2)
    assert abs(character_eval(g, (1,), (1,)) - (-1)) < 1e-12
    for grp, x in [(GroupSpec.finite(6, 4), (5, 3)), (GroupSpec.lattice(2), (7, -2))]:
        gamma = grp.zero() if grp.is_finite else (0.0, 0.0)
        assert character_eval(grp, gamma, x) == 1
    assert abs(character_eval(GroupSpec.lattice(1), (math.pi / 2,), (3,)) - (-1j)) < 1e-12


def test_dual_point_reduces_angles():
    assert dual_point(GroupSpec.lattice(2), (-math.pi, 5 * math.pi))[0] == pytest.approx(math.pi)
    assert dual_point(GroupSpec.lattice(2), (-math.pi, 5 * math.pi))[1] == pytest.approx(math.pi)


def test_character_value_set_examples():
    assert character_value_set(GroupSpec.finite(4), (1,)) == RootsOfUnity(4)
    assert character_value_set(GroupSpec.lattice(2), (1, 0)) is Dense
    assert character_value_set(GroupSpec.finite(6), (3,)) == RootsOfUnity(2)


finite_groups = st.lists(st.integers(2, 7), min_size=1, max_size=3).map(
    lambda ms: GroupSpec.finite(*ms))


@given(finite_groups, st.data())
@settings(max_examples=150, deadline=None)
def test_character_multiplicative_finite(g, data):
    elem = st.tuples(*(st.integers(0, n - 1) for n in g.moduli))
    x, y, gamma = data.draw(elem), data.draw(elem), data.draw(elem)
    lhs = character_eval(g, gamma, add(g, x, y))
    rhs = character_eval(g, gamma, x) * character_eval(g, gamma, y)
    assert abs(lhs - rhs) <= 1e-12
    assert abs(abs(lhs) - 1) <= 1e-12


@given(st.lists(st.integers(-50, 50), min_size=2, max_size=2),
       st.lists(st.integers(-50, 50), min_size=2, max_size=2),
       st.tuples(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi)))
@settings(max_examples=150, deadline=None)
def test_character_multiplicative_lattice(x, y, theta):
    g = GroupSpec.lattice(2)
    lhs = character_eval(g, theta, add(g, x, y))
    rhs = character_eval(g, theta, x) * character_eval(g, theta, y)
    assert abs(lhs - rhs) <= 1e-12


@pytest.mark.parametrize("moduli", [(4,), (6,), (6, 4), (2, 2, 2), (5, 3)])
def test_value_set_enumerates_roots(moduli):
    g = GroupSpec.finite(*moduli)
    for x in g.elements():
        k = character_value_set(g, x).k
        values = {complex(round(v.real, 9), round(v.imag, 9))
                  for v in (character_eval(g, gamma, x) for gamma in g.elements())}
        roots = {complex(round(math.cos(2 * math.pi * j / k), 9),
                         round(math.sin(2 * math.pi * j / k), 9)) for j in range(k)}
        assert {complex(v.real + 0.0, v.imag + 0.0) for v in values} == \
            {complex(r.real + 0.0, r.imag + 0.0) for r in roots}


def test_integer_rank():
    assert integer_rank([[1, 2], [2, 4]]) == 1
    assert integer_rank([[1, 0], [1, 1]]) == 2
    assert integer_rank([[1], [2]]) == 1
    assert integer_rank([]) == 0


def test_independence():
    g = GroupSpec.lattice(1)
    assert not is_independent(g, [(1,), (2,)])
    assert is_independent(g, [(0,), (5,)])
    g2 = GroupSpec.lattice(2)
    assert is_independent(g2, [(0, 0), (1, 0), (0, 1)])
    assert not is_independent(g2, [(1, 0), (0, 1), (1, 1)])


def test_kronecker_examples():
    g2 = GroupSpec.lattice(2)
    theta = kronecker_solve(g2, [(1, 0), (0, 1)], [-1, -1])
    assert theta == pytest.approx((math.pi, math.pi), abs=1e-9)
    theta = kronecker_solve(GroupSpec.lattice(1), [(1,)], [1j])
    assert theta == pytest.approx((math.pi / 2,), abs=1e-9)
    # hand elimination: theta1 = 0, theta1 + theta2 = pi
    theta = kronecker_solve(g2, [(1, 0), (1, 1)], [1, -1])
    assert theta == pytest.approx((0.0, math.pi), abs=1e-9)
    assert abs(character_eval(g2, theta, (1, 1)) + 1) < 1e-9


def test_kronecker_dependent():
    with pytest.raises(DependentSupport):
        kronecker_solve(GroupSpec.lattice(1), [(1,), (2,)], [1, 1])
    with pytest.raises(DependentSupport):
        kronecker_solve(GroupSpec.lattice(2), [(0, 0)], [1])


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_kronecker_hits_targets(data):
    d = data.draw(st.integers(1, 4))
    k = data.draw(st.integers(1, d))
    rows = data.draw(st.lists(st.lists(st.integers(-6, 6), min_size=d, max_size=d),
                              min_size=k, max_size=k))
    angles = data.draw(st.lists(st.floats(0, 2 * math.pi), min_size=k, max_size=k))
    g = GroupSpec.lattice(d)
    targets = [cmath.exp(1j * t) for t in angles]
    if any(not any(r) for r in rows) or integer_rank(rows) < k:
        with pytest.raises(DependentSupport):
            kronecker_solve(g, rows, targets)
        return
    theta = kronecker_solve(g, rows, targets)
    assert all(0 <= t < 2 * math.pi for t in theta)
    err = max(abs(character_eval(g, theta, r) - t) for r, t in zip(rows, targets))
    assert err <= 1e-9
