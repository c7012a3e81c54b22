from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from sl3mm.errors import LevelError, NonAdmissibleLevelError
from sl3mm.rootdata import (
    ALPHA1, ALPHA2, CONJ, D6, DYN, E, M32, OMEGA1, OMEGA1V, OMEGA2, OMEGA2V, RHO,
    W1, W2, W3, WEYL, Coweight, Level, Weight, casimir_eigenvalues, central_charge,
    conformal_weight, d6_apply, d6_compose, d6_from_word, killing_coweight,
    killing_dual, pairing,
)

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=12)
weights = st.builds(Weight, rationals, rationals)
coweights = st.builds(Coweight, st.integers(-5, 5), st.integers(-5, 5))


# ------------------------------------------------------------- Casimir oracle
#
# The quadratic and cubic Casimirs are written in the basis e^i, h^i, f^i of
# traceless 3x3 matrices.  The oracle realises sl3 on small tensor products of
# the defining representation, builds both operators as explicit matrices and
# reads their eigenvalues on a highest-weight vector.

def _E(i, j, n=3):
    m = sp.zeros(n, n)
    m[i, j] = 1
    return m


def _defining():
    e1, e2, e3 = _E(0, 1), _E(1, 2), _E(0, 2)
    f1, f2, f3 = _E(1, 0), _E(2, 1), _E(2, 0)
    h1, h2 = _E(0, 0) - _E(1, 1), _E(1, 1) - _E(2, 2)
    return dict(e1=e1, e2=e2, e3=e3, f1=f1, f2=f2, f3=f3, h1=h1, h2=h2)


def _dual(rep):
    return {k: -v.T for k, v in rep.items()}


def _tensor(a, b):
    ia, ib = sp.eye(next(iter(a.values())).rows), sp.eye(next(iter(b.values())).rows)
    return {k: sp.kronecker_product(a[k], ib) + sp.kronecker_product(ia, b[k]) for k in a}


def _casimirs(r):
    n = r["h1"].rows
    one = sp.eye(n)
    h3 = r["h1"] + r["h2"]
    q = (sp.Rational(1, 3) * (r["h1"] ** 2 + r["h2"] ** 2 + h3 ** 2) + r["h1"] + r["h2"] + h3
         + 2 * (r["f1"] * r["e1"] + r["f2"] * r["e2"] + r["f3"] * r["e3"]))
    a = r["h1"] + 2 * r["h2"] + 3 * one
    b = 2 * r["h1"] + r["h2"] + 3 * one
    c = r["h1"] - r["h2"]
    cub = (a * b * c + 9 * r["f1"] * r["e1"] * a - 9 * r["f2"] * r["e2"] * b
           + 9 * r["f3"] * r["e3"] * c + 27 * r["f1"] * r["f2"] * r["e3"]
           + 27 * r["f3"] * r["e1"] * r["e2"])
    return q, cub


def _basis(n, i):
    v = sp.zeros(n, 1)
    v[i] = 1
    return v


def _oracle(rep, vec):
    for k in ("e1", "e2", "e3"):
        assert rep[k] * vec == sp.zeros(vec.rows, 1)
    idx = next(i for i in range(vec.rows) if vec[i] != 0)
    out = []
    for op in _casimirs(rep):
        w = op * vec
        val = sp.Rational(w[idx] / vec[idx])
        assert w == val * vec
        out.append(Fraction(int(val.p), int(val.q)))
    return tuple(out)


def _weight_of(rep, vec):
    idx = next(i for i in range(vec.rows) if vec[i] != 0)
    return tuple(int((rep[h] * vec)[idx] / vec[idx]) for h in ("h1", "h2"))


def _oracle_cases():
    v3 = _defining()
    v3b = _dual(v3)
    return [
        ((1, 0), v3, _basis(3, 0)),
        ((0, 1), v3b, _basis(3, 2)),
        ((2, 0), _tensor(v3, v3), _basis(9, 0)),
        ((1, 1), _tensor(v3, v3b), _basis(9, 2)),
        ((0, 2), _tensor(v3b, v3b), _basis(9, 8)),
    ]


@pytest.mark.parametrize("case", range(5))
def test_casimir_matches_matrix_oracle(case):
    lam, rep, vec = _oracle_cases()[case]
    assert _weight_of(rep, vec) == lam
    assert casimir_eigenvalues(Weight(*lam)) == _oracle(rep, vec)


def test_casimir_examples():
    assert casimir_eigenvalues(Weight(0, 0)) == (0, 0)
    # the closed formula and the oracle both give 8/3 here (see the ledger)
    assert casimir_eigenvalues(Weight(1, 0)) == (Fraction(8, 3), 20)
    a = Fraction(-7, 5)
    assert casimir_eigenvalues(Weight(a, a))[1] == 0


def test_casimir_symbolic_from_generic_hw():
    """Formula check on a generic highest weight: on a highest-weight vector
    every term with a raising operator on the right vanishes."""
    l1, l2 = sp.symbols("l1 l2")
    q = sp.Rational(1, 3) * (l1 ** 2 + l2 ** 2 + (l1 + l2) ** 2) + 2 * (l1 + l2)
    c = (l1 + 2 * l2 + 3) * (2 * l1 + l2 + 3) * (l1 - l2)
    for a, b in [(Fraction(-3, 2), 0), (Fraction(1, 3), Fraction(-5, 7)), (4, 1)]:
        got = casimir_eigenvalues(Weight(a, b))
        sub = {l1: sp.Rational(a), l2: sp.Rational(b)}
        assert got == (Fraction(str(q.subs(sub))), Fraction(str(c.subs(sub))))


# ------------------------------------------------------------- pairings

def test_pairing_examples():
    assert pairing(ALPHA1, OMEGA1V) == 1
    assert pairing(OMEGA1, OMEGA1V) == Fraction(2, 3)
    assert pairing(RHO, OMEGA1V + OMEGA2V) == 2


def test_killing_examples():
    assert killing_dual(ALPHA1, ALPHA1) == 2
    assert killing_dual(OMEGA1, OMEGA2) == Fraction(1, 3)
    assert killing_dual(RHO, RHO) == 2
    assert killing_coweight(OMEGA2V, OMEGA2V) == Fraction(2, 3)
    assert killing_coweight(OMEGA1V, OMEGA2V) == Fraction(1, 3)
    d = OMEGA1V - OMEGA2V
    assert killing_coweight(d, d) == Fraction(2, 3)


def test_cartan_consistency():
    alphas, cows = (ALPHA1, ALPHA2), (OMEGA1V, OMEGA2V)
    cartan = ((2, -1), (-1, 2))
    for i in range(2):
        for j in range(2):
            assert pairing(alphas[i], cows[j]) == (1 if i == j else 0)
            assert killing_dual(alphas[i], alphas[j]) == cartan[i][j]


# ------------------------------------------------------------- D6

def test_d6_apply_examples():
    lam = Weight(Fraction(-3, 2), 0)
    assert d6_apply(W1, lam, shifted=True) == Weight(Fraction(-1, 2), Fraction(-1, 2))
    assert d6_apply(CONJ, Weight(3, -2)) == Weight(-3, 2)
    assert d6_apply(DYN, Weight(3, -2)) == Weight(-2, 3)


def test_d6_compose_examples():
    assert d6_compose(W1, W1) == E
    assert d6_compose(DYN, W1) == W2 * DYN
    assert d6_compose(DYN, W3) == CONJ


def test_d6_from_word():
    assert d6_from_word(["d", "w3"]) == CONJ
    assert d6_from_word([]) == E
    with pytest.raises(ValueError):
        d6_from_word(["w4"])


def test_d6_group_axioms():
    assert len(set(D6)) == 12
    for g in D6:
        assert g * E == g == E * g
        assert g * g.inverse() == E
        for h in D6:
            assert g * h in D6
            for k in D6:
                assert (g * h) * k == g * (h * k)
    assert all(CONJ * g == g * CONJ for g in D6)


@settings(max_examples=30, deadline=None)
@given(weights)
def test_d6_is_an_action(lam):
    for g in D6:
        for h in D6:
            assert (g * h).act(lam) == g.act(h.act(lam))
            assert (g * h).act_shifted(lam) == g.act_shifted(h.act_shifted(lam))


@settings(max_examples=50, deadline=None)
@given(weights)
def test_weyl_reflection_formula(lam):
    assert W1.act(lam) == lam - lam.d1 * ALPHA1
    assert W2.act(lam) == lam - lam.d2 * ALPHA2


@settings(max_examples=50, deadline=None)
@given(weights, coweights)
def test_pairing_invariant(lam, xi):
    for g in D6:
        assert pairing(g.act(lam), g.act_coweight(xi)) == pairing(lam, xi)


# ------------------------------------------------------------- invariants

@settings(max_examples=60, deadline=None)
@given(weights)
def test_central_character_is_shifted_weyl_invariant(lam):
    ref = casimir_eigenvalues(lam)
    for w in WEYL:
        assert casimir_eigenvalues(w.act_shifted(lam)) == ref


@settings(max_examples=60, deadline=None)
@given(weights)
def test_cubic_flips_under_conjugation(lam):
    q, c = casimir_eigenvalues(lam)
    q2, c2 = casimir_eigenvalues(CONJ.act_shifted(lam))
    assert (q2, c2) == (q, -c)


@settings(max_examples=60, deadline=None)
@given(weights)
def test_conformal_weight_shifted_weyl_invariant(lam):
    for w in WEYL:
        assert conformal_weight(w.act_shifted(lam), M32) == conformal_weight(lam, M32)


# ------------------------------------------------------------- levels

def test_conformal_weights_at_32():
    assert conformal_weight(Weight(0, 0), M32) == 0
    assert conformal_weight(Weight(Fraction(-3, 2), 0), M32) == Fraction(-1, 2)
    assert conformal_weight(Weight(Fraction(-1, 2), Fraction(-1, 2)), M32) == Fraction(-1, 2)


def test_central_charge():
    assert central_charge(M32) == -8
    assert central_charge(Level(3, 1)) == 0
    assert central_charge(Level(4, 3)) == -10


def test_level_validation():
    with pytest.raises(LevelError):
        Level(4, 2)
    with pytest.raises(LevelError):
        Level(3, 0)
    with pytest.raises(NonAdmissibleLevelError):
        Level(2, 1).require_admissible()
    Level(3, 2).require_admissible()


def test_root_coordinates_round_trip():
    for lam in (OMEGA1, OMEGA2, RHO, Weight(Fraction(1, 3), Fraction(-2, 5))):
        assert Weight.from_roots(*lam.roots()) == lam
    assert RHO.roots() == (1, 1)
    assert OMEGA1.roots() == (Fraction(2, 3), Fraction(1, 3))
