import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl3mm.errors import DomainError
from sl3mm.rootdata import OMEGA1, OMEGA1V, OMEGA2V, OMEGA3V, UNIT_FLOWS, Coweight, Weight
from sl3mm.torusfourier import (
    ConeSeries, DiracComb, FourierPoly, LatticeSum, PhaseAngle, PhaseSum,
    comb_grid_check, comb_reduce, cone_expand, eval_numeric, evaluate_exact,
    integrate_torus,
)

# denominators dividing 60 keep the common cyclotomic order of products small
angles = st.builds(lambda k, d: Fraction(k % d, d), st.integers(0, 59),
                   st.sampled_from([1, 2, 3, 4, 5, 6, 10, 12]))
phase_sums = st.lists(st.tuples(angles, st.integers(-3, 3)), max_size=4).map(PhaseSum)
freqs = st.builds(Coweight, st.integers(-3, 3), st.integers(-3, 3))
polys = st.lists(st.tuples(freqs, phase_sums), max_size=4).map(FourierPoly)


def x(c1, c2, coeff=1):
    return FourierPoly.monomial(Coweight(c1, c2), coeff)


# ------------------------------------------------------------- phases

@settings(max_examples=100, deadline=None)
@given(angles, angles)
def test_phase_angle_multiplication_adds_angles(a, b):
    p = PhaseAngle(a) * PhaseAngle(b)
    assert p.angle == (a + b) % 1
    assert 0 <= p.angle < 1
    assert abs(p.value() - PhaseAngle(a).value() * PhaseAngle(b).value()) < 1e-12


def test_cyclotomic_reductions():
    # 1 + w + w^2 = 0 for a primitive cube root of unity
    assert (PhaseSum.phase(0) + PhaseSum.phase(Fraction(1, 3)) + PhaseSum.phase(Fraction(2, 3))).is_zero()
    assert PhaseSum.phase(Fraction(1, 2)) == PhaseSum.integer(-1)
    s = sum((PhaseSum.phase(Fraction(k, 5)) for k in range(5)), PhaseSum())
    assert s.is_zero()
    assert not (PhaseSum.phase(Fraction(1, 4)) + PhaseSum.phase(Fraction(1, 3))).is_zero()
    assert PhaseSum.phase(Fraction(1, 6)) * PhaseSum.phase(Fraction(1, 3)) == PhaseSum.integer(-1)


@settings(max_examples=60, deadline=None)
@given(phase_sums)
def test_cyclotomic_soundness(p):
    """Equality is decided exactly; it must agree with the numbers."""
    rng = random.Random(0)
    q = p * PhaseSum.phase(Fraction(rng.randint(0, 11), 12))
    diff = q * PhaseSum.phase(0) - q
    assert diff.is_zero()
    assert abs(p.value() - sum(n * cmath.exp(2j * math.pi * float(a))
                               for a, n in p.terms.items())) < 1e-10
    if p.is_zero():
        assert abs(p.value()) < 1e-10


def test_vanishing_sums_vanish_numerically():
    rng = random.Random(7)
    found = 0
    while found < 20:
        n = rng.choice([2, 3, 4, 5, 6, 8, 10, 12])
        terms = [(Fraction(rng.randint(0, n - 1), n), rng.randint(-2, 2)) for _ in range(4)]
        p = PhaseSum(terms)
        # force a vanishing combination by subtracting an equal one in disguise
        shift = Fraction(rng.randint(0, n - 1), n)
        z = p - PhaseSum([(a + shift, m) for a, m in terms]) * PhaseSum.phase(-shift)
        assert z.is_zero()
        assert abs(z.value()) < 1e-10
        if not p.is_zero():
            assert abs(p.value()) > 1e-10
        found += 1


def test_single_phase_detection():
    p = -PhaseSum.phase(Fraction(2, 3))
    sign, ang = p.single_phase()
    assert PhaseSum.phase(ang, sign) == p
    assert (PhaseSum.integer(2)).single_phase() is None


# ------------------------------------------------------------- ring axioms

@settings(max_examples=40, deadline=None)
@given(polys, polys, polys)
def test_fourier_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + FourierPoly() == a
    assert a * FourierPoly.constant(1) == a


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_numeric_evaluation_is_a_ring_map(a, b):
    rng = random.Random(1)
    pt = (rng.random(), rng.random())
    assert abs(eval_numeric(a * b, pt) - eval_numeric(a, pt) * eval_numeric(b, pt)) < 1e-8
    assert abs(eval_numeric(a.conj(), pt) - eval_numeric(a, pt).conjugate()) < 1e-8


@settings(max_examples=40, deadline=None)
@given(polys, st.fractions(max_denominator=7), st.fractions(max_denominator=7))
def test_exact_evaluation_matches_numeric(p, a, b):
    mu = Weight(a, b)
    assert abs(evaluate_exact(p, mu).value() - eval_numeric(p, mu)) < 1e-9


# ------------------------------------------------------------- integration

def test_integrate_examples():
    assert integrate_torus(x(1, 0)).is_zero()
    assert integrate_torus(FourierPoly.constant(3)) == PhaseSum.integer(3)
    assert integrate_torus(FourierPoly.constant(2) + x(0, 1)) == PhaseSum.integer(2)


def test_integrate_kills_nonzero_frequencies():
    for c1 in range(-5, 6):
        for c2 in range(-5, 6):
            if (c1, c2) == (0, 0) or abs(c1) + abs(c2) > 5:
                continue
            assert integrate_torus(x(c1, c2, PhaseSum.phase(Fraction(1, 7)))).is_zero()


@settings(max_examples=40, deadline=None)
@given(polys, polys, phase_sums)
def test_integrate_linear(a, b, s):
    assert integrate_torus(a + b * s) == integrate_torus(a) + integrate_torus(b) * s


def test_integration_matches_quadrature():
    """Unit-measure normalisation: the mean over a fine grid of the torus."""
    p = FourierPoly.constant(PhaseSum.phase(Fraction(1, 3))) + x(1, -2) + x(0, 1, 5)
    n = 16
    grid = [(i / n, j / n) for i in range(n) for j in range(n)]
    mean = sum(eval_numeric(p, g) for g in grid) / len(grid)
    assert abs(mean - integrate_torus(p).value()) < 1e-10


# ------------------------------------------------------------- numerics

def test_eval_numeric_examples():
    assert abs(eval_numeric(FourierPoly.constant(1), Weight(Fraction(1, 3), 2)) - 1) < 1e-12
    want = cmath.exp(2j * math.pi * 2 / 3)
    assert abs(eval_numeric(x(1, 0), OMEGA1) - want) < 1e-12
    den = FourierPoly.constant(2)
    for v in UNIT_FLOWS:
        den = den + FourierPoly.monomial(v)
    assert abs(eval_numeric(den, Weight(0, 0)) - 8.0) < 1e-12


# ------------------------------------------------------------- combs

def test_comb_reduce_examples():
    assert comb_reduce(LatticeSum("Q", "zeta")) == DiracComb("Pv", "zeta")
    assert comb_reduce(LatticeSum("Pv", "mu")) == DiracComb("Q", "mu")
    with pytest.raises(DomainError):
        comb_reduce(LatticeSum("P", "mu"))


def test_comb_grid_numeric():
    assert comb_grid_check() < 1e-10
    assert comb_grid_check(dual=True) < 1e-10


def test_comb_grid_independent_oracle():
    """Direct numpy check of finite Fourier orthogonality on (1/12)Z^2."""
    n, r = 12, 6
    m = np.arange(-r, r)
    for j1 in range(n):
        for j2 in range(n):
            phases = np.exp(2j * np.pi * (m[:, None] * j1 + m[None, :] * j2) / n)
            expected = (2 * r) ** 2 if (j1, j2) == (0, 0) else 0
            assert abs(phases.sum() - expected) < 1e-9


# ------------------------------------------------------------- cone series

def test_geometric_series_default_and_opposite_cone():
    xx = x(0, 2)
    s = ConeSeries(FourierPoly.constant(1), FourierPoly.constant(1) - xx, (-OMEGA2V,))
    assert cone_expand(s, 3) == FourierPoly.constant(1) + xx + xx * xx + xx * xx * xx
    opp = cone_expand(s.with_cone((OMEGA2V,)), 3)
    want = -(x(0, -2) + x(0, -4) + x(0, -6) + x(0, -8))
    assert opp == want


def test_half_angle_series():
    # e^{-pi i theta} / (2 cos pi theta) = 1 / (1 + e^{2 pi i theta})
    s = ConeSeries(FourierPoly.constant(1), FourierPoly.constant(1) + x(0, 1), (-OMEGA2V,))
    got = cone_expand(s, 5)
    want = sum((x(0, k, (-1) ** k) for k in range(6)), FourierPoly())
    assert got == want
    theta = 0.3 + 0.7j  # inside the convergence region |e^{2 pi i theta}| < 1
    lhs = cmath.exp(-1j * math.pi * theta) / (2 * cmath.cos(math.pi * theta))
    rhs = 1 / (1 + cmath.exp(2j * math.pi * theta))
    assert abs(lhs - rhs) < 1e-12


def test_cone_expansion_consistent_across_orders():
    num = FourierPoly.constant(2) + x(1, -1)
    den = FourierPoly.constant(1) + x(0, 1) + x(-1, 1)
    s = ConeSeries(num, den, (-OMEGA2V, OMEGA3V))
    low, high = cone_expand(s, 4), cone_expand(s, 8)
    cutoff = max(s.depth(c) for c in low.support())
    trimmed = FourierPoly({c: v for c, v in high.terms.items() if s.depth(c) <= cutoff})
    assert trimmed == low


def test_cone_expansion_times_denominator():
    num = FourierPoly.constant(1) + x(1, 0, PhaseSum.phase(Fraction(1, 3)))
    den = FourierPoly.constant(1) + x(0, 1)
    s = ConeSeries(num, den, (-OMEGA2V,))
    order = 7
    back = cone_expand(s, order) * den - num
    limit = min(s.depth(c) for c in num.support()) + order * 1
    assert all(s.depth(c) > limit for c in back.support())


def test_cone_expand_rejects_bad_leading_term():
    one = FourierPoly.constant(1)
    # leading coefficient 2 is not a unit
    with pytest.raises(DomainError):
        cone_expand(ConeSeries(one, FourierPoly.constant(2) + x(0, 1), (-OMEGA2V,)), 3)
    # x^(2,-1) sits at the same depth as the constant term
    with pytest.raises(DomainError):
        cone_expand(ConeSeries(one, one + x(2, -1), (-OMEGA2V,)), 3)
    with pytest.raises(DomainError):
        cone_expand(ConeSeries(one, one + x(1, 0), (OMEGA3V, -OMEGA3V)), 3)


def test_depth_is_positive_on_cone_directions():
    s = ConeSeries(FourierPoly.constant(1), FourierPoly.constant(1), (-OMEGA2V, OMEGA3V))
    # flows along the cone have frequency -flow, which must sit deeper
    assert s.depth(OMEGA2V) > 0 and s.depth(-OMEGA3V) > 0
    assert s.depth(OMEGA1V) == s.depth(OMEGA2V) + s.depth(-OMEGA3V)
