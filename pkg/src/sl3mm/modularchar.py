"""Characters and modular S-transforms for M(3,2).

Standard characters are kept as (prefactor, comb) data rather than as
functions.  S-matrix entries are exact: a single phase times a character
of the torus variable mu' for standard modules, and a :class:`ConeSeries`
for atypical ones.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ScopeError, LINEAR_DEPENDENCE_MESSAGE
from .modlabel import HW, LAM32, Label, Rel, Semi, canonicalize, identification_orbit
from .rootdata import (
    E, M32, OMEGA1V, OMEGA2V, OMEGA3V, UNIT_FLOWS, W2, ZERO_CW,
    Coweight, D6Element, Level, Weight, killing_coweight, pairing,
)
from .torusfourier import (
    ConeSeries, ExpTerm, FourierPoly, Integrand, PhaseSum, SymWeight, frac_part,
    sym_pair_constant,
)

DEFAULT_CONE = (-OMEGA2V, OMEGA3V)
HW32 = (Weight(0, 0), LAM32, Weight(0, Fraction(-3, 2)),
        Weight(Fraction(-1, 2), Fraction(-1, 2)))
RHO_HALF = HW32[3]


def require_modular_level(lvl: Level) -> None:
    """Refuse character and S-matrix data away from (3,2)."""
    lvl.require_admissible()
    if lvl.v > 1 and lvl != M32:
        raise ScopeError(LINEAR_DEPENDENCE_MESSAGE)
    if lvl.v == 1:
        raise DomainError("integrable levels are rational; their S-matrices are not provided here")


# ---------------------------------------------------------------- q-series

@dataclass(frozen=True)
class QSeries:
    """q^leading * sum_n coefficients[n] q^n, known through ``order``."""

    leading: Fraction
    coefficients: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __str__(self) -> str:
        terms = []
        for n, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if n == 0 else ("q" if n == 1 else f"q^{n}")
            if n == 0:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c} {mono}")
        return f"q^({self.leading}) * ({' + '.join(terms)} + ...)"

    def evaluate(self, tau: complex) -> complex:
        q = cmath.exp(2j * math.pi * tau)
        lead = cmath.exp(2j * math.pi * float(self.leading) * tau)
        return lead * sum(c * q ** n for n, c in enumerate(self.coefficients))


def eta_inv_fourth(order: int) -> QSeries:
    """eta(q)^(-4) through q^order (relative to the leading q^(-1/6)).

    Uses a(n) = (4/n) sum_{k=1}^n sigma_1(k) a(n-k), the logarithmic
    derivative of prod (1-q^n)^(-4).
    """
    if not 0 <= order <= 10_000:
        raise DomainError("order must lie in [0, 10000]")
    sigma = [0] * (order + 1)
    for d in range(1, order + 1):
        for m in range(d, order + 1, d):
            sigma[m] += d
    a = [1] + [0] * order
    for n in range(1, order + 1):
        a[n] = 4 * sum(sigma[k] * a[n - k] for k in range(1, n + 1)) // n
    return QSeries(Fraction(-1, 6), tuple(a))


def top_weight_multiplicity() -> int:
    """Common multiplicity of the ground-state weights of R[mu].

    It is lambda^I_2 + 1, which is 1 at (3,2): the q^0 coefficient of the
    trivial minimal reduction character times the leading eta coefficient.
    """
    from .admissible import require_r2, top_multiplicity
    return top_multiplicity(require_r2(LAM32, M32)) * eta_inv_fourth(0).coefficients[0]


def eta(tau: complex) -> complex:
    """Dedekind eta by its product, truncated below double precision."""
    q = cmath.exp(2j * math.pi * tau)
    if abs(q) >= 1:
        raise DomainError("tau must lie in the upper half plane")
    out = cmath.exp(2j * math.pi * tau / 24)
    n = 1
    while abs(q) ** n > 1e-18:
        out *= 1 - q ** n
        n += 1
    return out


# ---------------------------------------------------------------- characters

@dataclass(frozen=True)
class StandardCharacter:
    """The character of sigma^flow R[coset] as prefactor and comb."""

    flow: Coweight
    coset: Weight

    def comb_coefficient(self, test: tuple, theta: complex, tau: complex) -> complex:
        """Coefficient of delta(zeta + tau*flow - test) with the prefactor
        evaluated on that support; zero unless ``test`` is a coweight."""
        t = tuple(Fraction(x) for x in test)
        if any(x.denominator != 1 for x in t):
            return 0j
        xt = Coweight(int(t[0]), int(t[1]))
        xi = self.flow
        zeta = _cw_vec(xt) - tau * _cw_vec(xi)
        expo = (-1.5 * theta - 1.5 * _kappa(_cw_vec(xi), zeta + tau * _cw_vec(xi) / 2)
                + float(pairing(self.coset, xt)))
        return cmath.exp(2j * math.pi * expo) / eta(tau) ** 4

    def flowed_comb_coefficient(self, test: tuple, theta: complex, tau: complex) -> complex:
        """The same coefficient computed from the unflowed character through
        the spectral-flow substitution on (theta, zeta)."""
        base = StandardCharacter(ZERO_CW, self.coset)
        xi = _cw_vec(self.flow)
        zeta = _cw_vec(Coweight(*(int(x) for x in test))) - tau * xi
        theta2 = theta + _kappa(zeta, xi) + _kappa(xi, xi) * tau / 2
        return base.comb_coefficient(test, theta2, tau)


def numeric_character_pairing(ch: StandardCharacter, test, theta: complex,
                              tau: complex) -> complex:
    return ch.comb_coefficient(test, theta, tau)


_KAPPA = np.array([[2, 1], [1, 2]]) / 3


def _cw_vec(xi: Coweight) -> np.ndarray:
    return np.array([xi.c1, xi.c2], dtype=complex)


def _kappa(a, b) -> complex:
    return complex(np.asarray(a) @ _KAPPA @ np.asarray(b))


# ---------------------------------------------------------------- modular action

@dataclass(frozen=True)
class CharacterPoint:
    theta: complex
    zeta: tuple[complex, complex]
    tau: complex

    def __post_init__(self):
        if self.tau.imag <= 0:
            raise DomainError("tau must lie in the upper half plane")

    def distance(self, other: "CharacterPoint") -> float:
        return max(abs(self.theta - other.theta), abs(self.tau - other.tau),
                   *(abs(a - b) for a, b in zip(self.zeta, other.zeta)))


def modular_action(op: str, pt: CharacterPoint) -> CharacterPoint:
    """S or T on (theta, zeta, tau), with principal arguments."""
    arg_m1 = cmath.phase(-1 + 0j)
    if op == "S":
        z = np.array(pt.zeta)
        theta = (pt.theta - _kappa(z, z) / (2 * pt.tau)
                 - (2 * cmath.phase(pt.tau) - arg_m1) / (3 * math.pi))
        return CharacterPoint(theta, tuple(complex(x) for x in z / pt.tau), -1 / pt.tau)
    if op == "T":
        return CharacterPoint(pt.theta - arg_m1 / (9 * math.pi), pt.zeta, pt.tau + 1)
    raise DomainError(f"unknown modular generator {op!r}")


def apply_word(word: str, pt: CharacterPoint) -> CharacterPoint:
    """Apply a word such as "STS", rightmost letter first."""
    for op in reversed(word):
        pt = modular_action(op, pt)
    return pt


# ---------------------------------------------------------------- S-matrix

def standard_s_entry(xi: Coweight, mu: Weight, xi2: Coweight) -> FourierPoly:
    """S[(xi,[mu]),(xi2,[mu'])] as a function of the torus variable mu'."""
    angle = Fraction(3, 2) * killing_coweight(xi, xi2) - pairing(mu, xi2)
    return FourierPoly.monomial(-xi, PhaseSum.phase(angle))


def standard_s_value(xi: Coweight, mu: Weight, xi2: Coweight, mu2: Weight) -> PhaseSum:
    angle = (Fraction(3, 2) * killing_coweight(xi, xi2) - pairing(mu, xi2)
             - pairing(mu2, xi))
    return PhaseSum.phase(angle)


def _x(v: Coweight) -> FourierPoly:
    return FourierPoly.monomial(v)


def semi_relaxed_s_entry(xi: Coweight, xi2: Coweight, mu: Weight,
                         g: D6Element = E, cone: tuple | None = None) -> ConeSeries:
    """S-entry of sigma^xi g S[mu] against the standard (xi2, [mu'])."""
    v = g.act_coweight(OMEGA2V)
    num = standard_s_entry(xi, g.act(mu), xi2)
    den = FourierPoly.constant(1) + _x(v)
    return ConeSeries(num, den, cone if cone is not None else (-v,))


def vacuum_denominator() -> FourierPoly:
    """2(1 + cos + cos + cos) written as 2 + sum of six characters."""
    p = FourierPoly.constant(2)
    for v in UNIT_FLOWS:
        p = p + _x(v)
    return p


def _hw_lam_entry(xi: Coweight, xi2: Coweight) -> FourierPoly:
    """Numerator of the L(-3/2 omega1) entry flowed by xi."""
    z = xi + OMEGA1V
    return FourierPoly.monomial(-z, PhaseSum.phase(Fraction(3, 2) * killing_coweight(z, xi2)))


def _flow_factor(zeta: Coweight, xi2: Coweight) -> FourierPoly:
    """S_{sigma^zeta M} = this * S_M."""
    return FourierPoly.monomial(-zeta, PhaseSum.phase(Fraction(3, 2) * killing_coweight(zeta, xi2)))


def hw_s_entry(m: Label, xi2: Coweight, cone: tuple = DEFAULT_CONE) -> ConeSeries:
    """S-entry of a highest-weight M(3,2) module against (xi2, [mu']).

    The module is brought to the form sigma^a g L(-3/2 omega1); the entry
    follows from the closed formula by flow and twist equivariance.
    """
    if not isinstance(m.core, HW):
        raise DomainError(f"{m} is not highest-weight")
    target = canonicalize(m, M32)
    form = next((f for f in sorted(identification_orbit(target, M32), key=Label.sort_key)
                 if f.core == HW(LAM32)), None)
    if form is None:
        raise DomainError(f"{m} has no form over L(-3/2 omega1)")
    g, a = form.twist, form.flow
    ginv = g.inverse()
    inner = _hw_lam_entry(ZERO_CW, ginv.act_coweight(xi2)).map_frequencies(g.act_coweight)
    num = _flow_factor(a, xi2) * inner
    return ConeSeries(num, vacuum_denominator(), cone)


def hw_lam_s_entry(xi: Coweight, xi2: Coweight, cone: tuple = DEFAULT_CONE) -> ConeSeries:
    """The closed L(-3/2 omega1) entry, flowed by xi."""
    return ConeSeries(_hw_lam_entry(xi, xi2), vacuum_denominator(), cone)


def vacuum_s_entry(xi2: Coweight, cone: tuple = DEFAULT_CONE) -> ConeSeries:
    return hw_lam_s_entry(-OMEGA1V, xi2, cone)


def rho_half_s_entry(xi2: Coweight, cone: tuple = DEFAULT_CONE) -> ConeSeries:
    """The L(-rho/2) entry, from L(-rho/2) = sigma^{omega2v}(w2 S[lam] - L(lam))
    with lam = -3/2 omega1."""
    den = vacuum_denominator()
    semi = semi_relaxed_s_entry(OMEGA2V, xi2, LAM32, W2)
    # bring the semi entry over the common denominator D = (1 + x^{w2 omega2v}) * rest
    v = W2.act_coweight(OMEGA2V)
    rest = _exact_quotient(den, FourierPoly.constant(1) + _x(v))
    num = semi.numerator * rest - _hw_lam_entry(OMEGA2V, xi2)
    return ConeSeries(num, den, cone)


def _exact_quotient(a: FourierPoly, b: FourierPoly) -> FourierPoly:
    """a / b for Laurent polynomials with b dividing a exactly."""
    q = FourierPoly()
    r = a
    def order(x):  # lexicographic, a total group order on Z^2
        return (x.c1, x.c2)
    lead_b = max(b.support(), key=order)
    cb = b.coefficient(lead_b)
    unit = cb.single_phase()
    if unit is None:
        raise DomainError("divisor has a non-unit leading coefficient")
    sign, ang = unit
    inv = PhaseSum.phase(-ang, sign)
    for _ in range(64):
        if r.is_zero():
            return q
        lead_r = max(r.support(), key=order)
        t = FourierPoly.monomial(lead_r - lead_b, r.coefficient(lead_r) * inv)
        q = q + t
        r = r - t * b
    raise DomainError("polynomial division did not terminate")


def s_entry(m: Label, xi2: Coweight) -> ConeSeries | FourierPoly:
    """S-entry of any canonical M(3,2) label against the standard (xi2, [mu'])."""
    m = canonicalize(m, M32)
    core = m.core
    if isinstance(core, Rel):
        return standard_s_entry(m.flow, m.twist.act(core.mu), xi2)
    if isinstance(core, Semi):
        return semi_relaxed_s_entry(m.flow, xi2, core.mu, m.twist)
    if core.lam == RHO_HALF and not any(f.core == HW(LAM32) for f in identification_orbit(m, M32)):
        g, a = m.twist, m.flow
        ginv = g.inverse()
        inner = rho_half_s_entry(ginv.act_coweight(xi2))
        num = _flow_factor(a, xi2) * inner.numerator.map_frequencies(g.act_coweight)
        return ConeSeries(num, vacuum_denominator(), DEFAULT_CONE)
    return hw_s_entry(m, xi2)


# ---------------------------------------------------------------- symbolic S-entries

INTEGRATION = "M"
SUMMATION = "X"


def _pair_term(mu, xi) -> ExpTerm:
    """e^{2 pi i <mu, xi>} with mu a SymWeight or the integration variable,
    xi a coweight or the summation variable."""
    if mu == INTEGRATION and xi == SUMMATION:
        raise DomainError("the integration and summation variables cannot be paired")
    if mu == INTEGRATION:
        return ExpTerm(1, Fraction(0), xi, SymWeight())
    if xi == SUMMATION:
        return ExpTerm(1, Fraction(0), ZERO_CW, mu)
    return ExpTerm(1, frac_part(sym_pair_constant(mu, xi)), ZERO_CW, SymWeight())


def _kappa_term(xa, xb) -> ExpTerm:
    """e^{2 pi i (3/2) kappa(xa, xb)}."""
    if xa == SUMMATION and xb == SUMMATION:
        raise DomainError("quadratic terms in the summation variable do not occur")
    if xa == SUMMATION:
        xa, xb = xb, xa
    if xb == SUMMATION:
        w = Weight(Fraction(3, 2) * xa.c1, Fraction(3, 2) * xa.c2)
        return ExpTerm(1, Fraction(0), ZERO_CW, SymWeight(w))
    return ExpTerm(1, frac_part(Fraction(3, 2) * killing_coweight(xa, xb)), ZERO_CW, SymWeight())


def symbolic_s(xa, ma, xb, mb) -> Integrand:
    """The standard entry S[(xa, ma), (xb, mb)] in delta-reduction form.

    Flows are coweights or SUMMATION; cosets are SymWeights or INTEGRATION.
    """
    t = _kappa_term(xa, xb)
    a = _pair_term(ma, xb)
    b = _pair_term(mb, xa)
    return Integrand([t * a.conj() * b.conj()])


def vacuum_inverse_integrand() -> Integrand:
    """1 / S_vac as a polynomial in the integration variable."""
    return Integrand.from_poly(vacuum_denominator())


def unitarity_delta(xi: Coweight, xi2: Coweight, mu: str = "mu", mu2: str = "nu"):
    """sum_{xi''} int S[(xi,mu),(xi'',mu'')] conj S[(xi'',mu''),(xi2,mu2)] dmu''."""
    from .torusfourier import delta_reduce
    a, b = SymWeight.var(mu), SymWeight.var(mu2)
    f = (symbolic_s(xi, a, SUMMATION, INTEGRATION)
         * symbolic_s(SUMMATION, INTEGRATION, xi2, b).conj())
    return delta_reduce(f)


def s_squared_delta(xi: Coweight, xi2: Coweight, mu: str = "mu", mu2: str = "nu"):
    """sum_{xi''} int S[(xi,mu),(xi'',mu'')] S[(xi'',mu''),(xi2,mu2)] dmu''."""
    from .torusfourier import delta_reduce
    a, b = SymWeight.var(mu), SymWeight.var(mu2)
    f = (symbolic_s(xi, a, SUMMATION, INTEGRATION)
         * symbolic_s(SUMMATION, INTEGRATION, xi2, b))
    return delta_reduce(f)
