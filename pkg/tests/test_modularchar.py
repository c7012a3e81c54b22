import cmath
import math
import random
from fractions import Fraction

import pytest

from sl3mm.degen import decompose
from sl3mm.errors import DomainError, ScopeError
from sl3mm.modlabel import LAM32, Label, HW, flow_apply, rel32, semi32
from sl3mm.modularchar import (
    CharacterPoint, StandardCharacter, apply_word, eta, eta_inv_fourth,
    hw_lam_s_entry, modular_action, numeric_character_pairing, require_modular_level,
    s_entry, s_squared_delta, semi_relaxed_s_entry, standard_s_entry, standard_s_value,
    top_weight_multiplicity, unitarity_delta, vacuum_denominator, vacuum_s_entry,
)
from sl3mm.rootdata import (
    ALPHA1, CONJ, D6, M32, OMEGA1V, OMEGA2V, W2, ZERO_CW, Coweight, Level, Weight,
    killing_coweight,
)
from sl3mm.torusfourier import (
    ConeSeries, DeltaSum, FourierPoly, PhaseSum, SymWeight, cone_expand, eval_numeric,
)

RHO_HALF = Weight(Fraction(-1, 2), Fraction(-1, 2))
FLOWS = [Coweight(a, b) for a in range(-2, 3) for b in range(-2, 3)]
SEED = 20240617


def colored_partitions(colors, order):
    """Coefficients of prod (1 - q^n)^(-colors) by repeated coin-change DP."""
    dp = [1] + [0] * order
    for part in range(1, order + 1):
        for _ in range(colors):
            for m in range(part, order + 1):
                dp[m] += dp[m - part]
    return dp


def random_point(rng):
    return CharacterPoint(
        complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5)),
        (complex(rng.uniform(-1, 1), rng.uniform(-0.3, 0.3)),
         complex(rng.uniform(-1, 1), rng.uniform(-0.3, 0.3))),
        complex(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 2.0)))


def value(entry, pt):
    if isinstance(entry, ConeSeries):
        return entry.value(pt)
    return eval_numeric(entry, pt)


# ------------------------------------------------------------- q-series

def test_eta_inverse_fourth_examples():
    s = eta_inv_fourth(0)
    assert s.leading == Fraction(-1, 6) and s.coefficients == (1,)
    assert eta_inv_fourth(4).coefficients == (1, 4, 14, 40, 105)


def test_eta_inverse_fourth_against_oracle():
    assert list(eta_inv_fourth(50).coefficients) == colored_partitions(4, 50)


def test_eta_inverse_fourth_numeric():
    tau = 0.1 + 0.9j
    assert abs(eta_inv_fourth(60).evaluate(tau) - eta(tau) ** -4) < 1e-10


def test_qseries_rendering():
    text = str(eta_inv_fourth(2))
    assert text.startswith("q^(-1/6) * (1 + 4 q + 14 q^2")


def test_eta_order_bounds():
    with pytest.raises(DomainError):
        eta_inv_fourth(-1)
    with pytest.raises(DomainError):
        eta_inv_fourth(10_001)


def test_ground_level_multiplicity():
    assert top_weight_multiplicity() == 1


# ------------------------------------------------------------- standard entries

def test_standard_entry_examples():
    zero = Weight(0, 0)
    assert standard_s_value(ZERO_CW, zero, ZERO_CW, zero) == PhaseSum.integer(1)
    assert killing_coweight(OMEGA1V, OMEGA2V) == Fraction(1, 3)
    assert standard_s_value(OMEGA1V, zero, OMEGA2V, zero) == PhaseSum.integer(-1)


def test_standard_entry_symmetry():
    rng = random.Random(SEED)
    for _ in range(30):
        xa, xb = rng.choice(FLOWS), rng.choice(FLOWS)
        ma = Weight(Fraction(rng.randint(-9, 9), 7), Fraction(rng.randint(-9, 9), 5))
        mb = Weight(Fraction(rng.randint(-9, 9), 4), Fraction(rng.randint(-9, 9), 3))
        assert standard_s_value(xa, ma, xb, mb) == standard_s_value(xb, mb, xa, ma)


def test_standard_entry_as_function():
    mu, mu2 = Weight(Fraction(1, 3), Fraction(2, 5)), Weight(Fraction(3, 7), Fraction(-1, 2))
    xi, xi2 = Coweight(1, -2), Coweight(2, 1)
    p = standard_s_entry(xi, mu, xi2)
    assert abs(eval_numeric(p, mu2) - standard_s_value(xi, mu, xi2, mu2).value()) < 1e-12


# ------------------------------------------------------------- unitarity, S^2

def test_unitarity_exact():
    want = DeltaSum([(SymWeight.var("mu") - SymWeight.var("nu"), PhaseSum.integer(1))])
    for x in FLOWS:
        for y in FLOWS:
            d = unitarity_delta(x, y)
            assert d == want if x == y else d.is_zero()


def test_s_squared_is_conjugation():
    want = DeltaSum([(SymWeight.var("mu") + SymWeight.var("nu"), PhaseSum.integer(1))])
    for x in FLOWS:
        for y in FLOWS:
            d = s_squared_delta(x, y)
            assert d == want if x == -y else d.is_zero()


# ------------------------------------------------------------- atypical entries

def _termwise(mu, xi2, flows_and_signs):
    out = FourierPoly()
    for k, sign, m in flows_and_signs:
        out = out + sign * standard_s_entry(k, m, xi2)
    return out


@pytest.mark.parametrize("t", [Fraction(1, 3), Fraction(2, 7)])
@pytest.mark.parametrize("xi2", [ZERO_CW, Coweight(1, -1), Coweight(-2, 1)])
def test_semi_entry_default_cone_matches_resolution(t, xi2):
    """The cone expansion equals the S-transform of the resolution of S[mu]
    by alternating flowed standards, term by term (order 10)."""
    mu = LAM32 + t * ALPHA1
    shifted = mu - Fraction(1, 2) * ALPHA1
    got = cone_expand(semi_relaxed_s_entry(ZERO_CW, xi2, mu), 10)
    terms = [(-k * OMEGA2V, (-1) ** k, mu if k % 2 == 0 else shifted) for k in range(11)]
    assert got == _termwise(mu, xi2, terms)


@pytest.mark.parametrize("xi2", [ZERO_CW, Coweight(1, -1)])
def test_semi_entry_opposite_cone(xi2):
    mu = LAM32 + Fraction(1, 3) * ALPHA1
    shifted = mu - Fraction(1, 2) * ALPHA1
    s = semi_relaxed_s_entry(ZERO_CW, xi2, mu).with_cone((OMEGA2V,))
    got = cone_expand(s, 10)
    terms = [(k * OMEGA2V, (-1) ** (k + 1), shifted if k % 2 else mu) for k in range(1, 12)]
    assert got == _termwise(mu, xi2, terms)


def test_twisted_semi_entry_shape():
    mu = LAM32 + Fraction(2, 5) * ALPHA1
    xi, xi2 = Coweight(1, 1), Coweight(0, -1)
    for g in D6:
        s = semi_relaxed_s_entry(xi, xi2, mu, g)
        assert s.numerator == standard_s_entry(xi, g.act(mu), xi2)
        v = g.act_coweight(OMEGA2V)
        assert s.denominator == FourierPoly.constant(1) + FourierPoly.monomial(v)


def test_vacuum_entry():
    s = vacuum_s_entry(ZERO_CW)
    assert abs(s.value(Weight(0, 0)) - 1 / 8) < 1e-12
    assert s.numerator == FourierPoly.constant(1)
    assert s.denominator == vacuum_denominator()
    # the L(-3/2 omega1) numerator phase at xi = -omega1v collapses to 1
    assert hw_lam_s_entry(-OMEGA1V, Coweight(2, -1)).numerator == FourierPoly.constant(1)


def test_vacuum_denominator_even():
    d = vacuum_denominator()
    assert d.map_frequencies(lambda x: -x) == d
    assert len(d.support()) == 7


def _decomposition_cases():
    return [rel32(RHO_HALF), rel32(LAM32), rel32(Weight(0, Fraction(-3, 2))),
            rel32(LAM32 + Fraction(1, 5) * ALPHA1), semi32(0), semi32(Fraction(1, 2)),
            rel32(RHO_HALF, W2, Coweight(1, 2)), semi32(0, CONJ, Coweight(-1, 1))]


@pytest.mark.parametrize("idx", range(8))
def test_entries_add_over_degenerations(idx):
    """A reducible module's S-entry is the sum of its summands' entries."""
    m = _decomposition_cases()[idx]
    rng = random.Random(idx)
    for xi2 in (ZERO_CW, Coweight(1, -2), Coweight(2, 1)):
        if m.kind == "Semi":
            lhs = semi_relaxed_s_entry(m.flow, xi2, m.core.mu, m.twist)
        else:
            lhs = standard_s_entry(m.flow, m.twist.act(m.core.mu), xi2)
        for _ in range(3):
            pt = (rng.random(), rng.random())
            a = value(lhs, pt)
            b = sum(n * value(s_entry(lab, xi2), pt) for lab, n in decompose(m).items())
            assert abs(a - b) < 1e-9 * max(1.0, abs(a))


def test_hw_entries_flow_equivariance():
    rng = random.Random(4)
    for lam in (Weight(0, 0), LAM32, RHO_HALF):
        m = Label(HW(lam))
        for zeta in (OMEGA1V, Coweight(1, -1), Coweight(-2, 1)):
            for xi2 in (ZERO_CW, Coweight(1, 1)):
                pt = (rng.random(), rng.random())
                lhs = value(s_entry(flow_apply(zeta, m), xi2), pt)
                phase = cmath.exp(2j * math.pi * float(Fraction(3, 2) * killing_coweight(zeta, xi2)))
                mono = eval_numeric(FourierPoly.monomial(-zeta), pt)
                rhs = phase * mono * value(s_entry(m, xi2), pt)
                assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs))


# ------------------------------------------------------------- modular action

def test_modular_group_relations():
    rng = random.Random(SEED)
    for _ in range(20):
        pt = random_point(rng)
        assert apply_word("SSSS", pt).distance(pt) < 1e-10
        assert apply_word("STSTST", pt).distance(apply_word("SS", pt)) < 1e-10


def test_t_action():
    pt = CharacterPoint(0.2 + 0.1j, (0.3 + 0j, -0.1 + 0.2j), 0.1 + 1.3j)
    t = modular_action("T", pt)
    assert t.tau == pt.tau + 1 and t.zeta == pt.zeta
    assert abs(t.theta - (pt.theta - math.pi / (9 * math.pi))) < 1e-12
    with pytest.raises(DomainError):
        modular_action("U", pt)


def test_character_point_requires_upper_half_plane():
    with pytest.raises(DomainError):
        CharacterPoint(0j, (0j, 0j), 1 - 0.5j)


# ------------------------------------------------------------- characters

def test_character_pairing_unflowed():
    ch = StandardCharacter(ZERO_CW, Weight(Fraction(1, 4), 0))
    theta, tau = 0.3 - 0.1j, 0.2 + 1.1j
    got = numeric_character_pairing(ch, (0, 0), theta, tau)
    assert abs(got - cmath.exp(-3j * math.pi * theta) / eta(tau) ** 4) < 1e-12
    assert numeric_character_pairing(ch, (Fraction(1, 2), 0), theta, tau) == 0


def test_flow_covariance():
    rng = random.Random(SEED)
    for _ in range(20):
        xi = Coweight(rng.randint(-2, 2), rng.randint(-2, 2))
        mu = Weight(Fraction(rng.randint(0, 11), 12), Fraction(rng.randint(0, 35), 12))
        ch = StandardCharacter(xi, mu)
        test = (rng.randint(-3, 3), rng.randint(-3, 3))
        theta = complex(rng.uniform(-1, 1), rng.uniform(-0.2, 0.2))
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.7, 1.5))
        a = ch.comb_coefficient(test, theta, tau)
        b = ch.flowed_comb_coefficient(test, theta, tau)
        assert abs(a - b) < 1e-10 * max(1.0, abs(a))


# ------------------------------------------------------------- scope

@pytest.mark.parametrize("lvl", [Level(4, 3), Level(5, 2), Level(3, 4), Level(7, 5)], ids=str)
def test_scope_guard(lvl):
    with pytest.raises(ScopeError, match="linearly dependent"):
        require_modular_level(lvl)


def test_scope_guard_allows_32_only():
    require_modular_level(M32)
    with pytest.raises(DomainError):
        require_modular_level(Level(4, 1))
