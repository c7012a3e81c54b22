"""Exact Fourier analysis on the torus h*_R / Q.

Functions of a weight mu modulo the root lattice are finite sums
``sum_xi c_xi e^{2 pi i <mu, xi>}`` over coweights xi.  The coefficients are
integer combinations of roots of unity, held in :class:`PhaseSum` and kept
in a canonical cyclotomic form so that zero can be decided exactly.
"""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Mapping

import numpy as np
import sympy

from .errors import DomainError
from .rootdata import Coweight, Weight, ZERO_CW, frac_part, killing_coweight, pairing

TOLERANCE = 1e-10
TRUNCATION_RADIUS = 6
COMB_GRID = 12


# ---------------------------------------------------------------- phases

@dataclass(frozen=True, order=True)
class PhaseAngle:
    """e^{2 pi i angle} with the angle reduced to [0, 1)."""

    angle: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "angle", frac_part(Fraction(self.angle)))

    def __mul__(self, other: "PhaseAngle") -> "PhaseAngle":
        return PhaseAngle(self.angle + other.angle)

    def conj(self) -> "PhaseAngle":
        return PhaseAngle(-self.angle)

    def value(self) -> complex:
        return cmath.exp(2j * math.pi * float(self.angle))


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(n, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def _reduce(coeffs: list[int], n: int) -> list[int]:
    """Remainder of sum coeffs[k] x^k modulo the n-th cyclotomic polynomial."""
    phi = _cyclotomic(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for top in range(len(c) - 1, deg - 1, -1):
        lead = c[top]
        if lead:
            shift = top - deg
            for i, p in enumerate(phi):
                c[shift + i] -= lead * p
    return c[:deg]


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


class PhaseSum:
    """An element of Z[Q/Z]: a finite integer combination of roots of unity.

    Two sums are equal when they agree as complex numbers; this is decided
    exactly by reducing both modulo the cyclotomic polynomial of a common
    order.  Because the canonical form depends on that order, the class is
    deliberately unhashable.
    """

    __slots__ = ("_terms",)
    __hash__ = None

    def __init__(self, terms: Mapping[Fraction, int] | Iterable[tuple[Fraction, int]] = ()):
        acc: dict[Fraction, int] = defaultdict(int)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for a, n in items:
            if n:
                acc[frac_part(Fraction(a))] += n
        self._terms = self._canonical(acc)

    @staticmethod
    def _canonical(acc: Mapping[Fraction, int]) -> dict[Fraction, int]:
        live = {a: n for a, n in acc.items() if n}
        if not live:
            return {}
        n = _lcm(a.denominator for a in live)
        if n == 1:
            return {Fraction(0): live[Fraction(0)]}
        coeffs = [0] * n
        for a, m in live.items():
            coeffs[int(a * n)] += m
        red = _reduce(coeffs, n)
        return {Fraction(k, n): m for k, m in enumerate(red) if m}

    @classmethod
    def phase(cls, angle, mult: int = 1) -> "PhaseSum":
        return cls({Fraction(angle): mult})

    @classmethod
    def integer(cls, n: int) -> "PhaseSum":
        return cls({Fraction(0): n})

    @property
    def terms(self) -> dict[Fraction, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def order(self) -> int:
        return _lcm(a.denominator for a in self._terms) if self._terms else 1

    def __add__(self, other: "PhaseSum") -> "PhaseSum":
        other = _as_phase_sum(other)
        return PhaseSum(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "PhaseSum":
        return PhaseSum({a: -n for a, n in self._terms.items()})

    def __sub__(self, other: "PhaseSum") -> "PhaseSum":
        return self + (-_as_phase_sum(other))

    def __mul__(self, other) -> "PhaseSum":
        other = _as_phase_sum(other)
        out: dict[Fraction, int] = defaultdict(int)
        for a, n in self._terms.items():
            for b, m in other._terms.items():
                out[frac_part(a + b)] += n * m
        return PhaseSum(out)

    __rmul__ = __mul__

    def conj(self) -> "PhaseSum":
        return PhaseSum({-a: n for a, n in self._terms.items()})

    def __eq__(self, other) -> bool:
        try:
            other = _as_phase_sum(other)
        except TypeError:
            return NotImplemented
        return (self - other).is_zero()

    def value(self) -> complex:
        return sum((n * cmath.exp(2j * math.pi * float(a)) for a, n in self._terms.items()),
                   0j)

    def as_integer(self) -> int | None:
        """The integer this sum equals, or None if it is not an integer."""
        if not self._terms:
            return 0
        if set(self._terms) == {Fraction(0)}:
            return self._terms[Fraction(0)]
        return None

    def single_phase(self) -> tuple[int, Fraction] | None:
        """(m, a) if the sum is m e^{2 pi i a} with m = +-1."""
        if len(self._terms) == 1:
            (a, m), = self._terms.items()
            if m in (1, -1):
                return m, a
        # a unit may hide behind a longer canonical form, e.g. -zeta_3^2
        for sign in (1, -1):
            for a in self._candidate_angles():
                if self == PhaseSum({a: sign}):
                    return sign, a
        return None

    def _candidate_angles(self):
        n = self.order()
        return (Fraction(k, 2 * n) for k in range(2 * n))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{n}*e({a})" for a, n in sorted(self._terms.items()))


def _as_phase_sum(x) -> PhaseSum:
    if isinstance(x, PhaseSum):
        return x
    if isinstance(x, int):
        return PhaseSum.integer(x)
    if isinstance(x, PhaseAngle):
        return PhaseSum.phase(x.angle)
    raise TypeError(f"cannot use {x!r} as a phase sum")


ONE = PhaseSum.integer(1)
ZERO = PhaseSum()


# ---------------------------------------------------------------- Fourier polys

class FourierPoly:
    """sum_xi c_xi e^{2 pi i <mu, xi>} as a function of mu in h*/Q."""

    __slots__ = ("_terms",)
    __hash__ = None

    def __init__(self, terms: Mapping[Coweight, PhaseSum] | Iterable = ()):
        acc: dict[Coweight, PhaseSum] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for xi, c in items:
            c = _as_phase_sum(c)
            acc[xi] = acc[xi] + c if xi in acc else c
        self._terms = {xi: c for xi, c in acc.items() if not c.is_zero()}

    @classmethod
    def monomial(cls, xi: Coweight, coeff=1) -> "FourierPoly":
        return cls({xi: _as_phase_sum(coeff)})

    @classmethod
    def constant(cls, coeff) -> "FourierPoly":
        return cls.monomial(ZERO_CW, coeff)

    @property
    def terms(self) -> dict[Coweight, PhaseSum]:
        return dict(self._terms)

    def support(self) -> list[Coweight]:
        return sorted(self._terms)

    def coefficient(self, xi: Coweight) -> PhaseSum:
        return self._terms.get(xi, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "FourierPoly") -> "FourierPoly":
        return FourierPoly(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "FourierPoly":
        return FourierPoly({xi: -c for xi, c in self._terms.items()})

    def __sub__(self, other: "FourierPoly") -> "FourierPoly":
        return self + (-other)

    def __mul__(self, other) -> "FourierPoly":
        if not isinstance(other, FourierPoly):
            c = _as_phase_sum(other)
            return FourierPoly({xi: v * c for xi, v in self._terms.items()})
        out: list = []
        for xi, a in self._terms.items():
            for eta, b in other._terms.items():
                out.append((xi + eta, a * b))
        return FourierPoly(out)

    __rmul__ = __mul__

    def conj(self) -> "FourierPoly":
        """Complex conjugate as a function of real mu."""
        return FourierPoly({-xi: c.conj() for xi, c in self._terms.items()})

    def shift(self, xi: Coweight) -> "FourierPoly":
        """Multiply by e^{2 pi i <mu, xi>}."""
        return FourierPoly({eta + xi: c for eta, c in self._terms.items()})

    def map_frequencies(self, f) -> "FourierPoly":
        return FourierPoly([(f(xi), c) for xi, c in self._terms.items()])

    def __eq__(self, other) -> bool:
        if not isinstance(other, FourierPoly):
            return NotImplemented
        return (self - other).is_zero()

    def evaluate(self, mu: Weight) -> complex:
        return eval_numeric(self, mu)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c})x^{xi}" for xi, c in sorted(self._terms.items()))


def integrate_torus(p: FourierPoly) -> PhaseSum:
    """Integral over h*_R/Q with unit total measure: the constant term."""
    return p.coefficient(ZERO_CW)


def evaluate_exact(p: FourierPoly, mu: Weight) -> PhaseSum:
    """Value at a rational weight, as an exact sum of roots of unity."""
    out = ZERO
    for xi, c in p.terms.items():
        out = out + c * PhaseSum.phase(pairing(mu, xi))
    return out


def eval_numeric(p: FourierPoly, mu: Weight | tuple[float, float]) -> complex:
    """Evaluate at a weight; a float pair is read as root coordinates."""
    if isinstance(mu, Weight):
        # reduce mod Z first so large rationals keep full precision
        t1, t2 = (float(frac_part(x)) for x in mu.roots())
    else:
        t1, t2 = mu
    total = 0j
    for xi, c in p.terms.items():
        total += c.value() * cmath.exp(2j * math.pi * (t1 * xi.c1 + t2 * xi.c2))
    return total


# ---------------------------------------------------------------- cone series

def _depth_functional(cone: tuple[Coweight, ...]) -> tuple[Fraction, Fraction]:
    """A linear form on frequencies, equal to 1 on each frequency direction.

    Flow directions f correspond to frequency directions -f.
    """
    dirs = [-f for f in cone]
    if len(dirs) == 1:
        (d,) = dirs
        # kappa(d, -), normalised
        n = killing_coweight(d, d)
        return (Fraction(2 * d.c1 + d.c2, 3) / n, Fraction(d.c1 + 2 * d.c2, 3) / n)
    if len(dirs) == 2:
        (p, q), (r, s) = dirs[0].as_tuple(), dirs[1].as_tuple()
        det = p * s - q * r
        if det == 0:
            raise DomainError("cone generators are parallel")
        # solve a*p + b*q = 1, a*r + b*s = 1
        return (Fraction(s - q, det), Fraction(p - r, det))
    raise DomainError("a cone needs one or two generators")


@dataclass(frozen=True)
class ConeSeries:
    """numerator / denominator, expanded along a cone of flow directions."""

    numerator: FourierPoly
    denominator: FourierPoly
    cone: tuple[Coweight, ...]

    def depth(self, xi: Coweight) -> Fraction:
        a, b = _depth_functional(self.cone)
        return a * xi.c1 + b * xi.c2

    def leading(self) -> tuple[Coweight, PhaseSum]:
        support = self.denominator.support()
        if not support:
            raise DomainError("zero denominator")
        depths = sorted((self.depth(x), x) for x in support)
        if len(depths) > 1 and depths[0][0] == depths[1][0]:
            raise DomainError("denominator has no unique leading term along this cone")
        lead = depths[0][1]
        return lead, self.denominator.coefficient(lead)

    def with_cone(self, cone: tuple[Coweight, ...]) -> "ConeSeries":
        return ConeSeries(self.numerator, self.denominator, tuple(cone))

    def _ratio(self) -> tuple[FourierPoly, FourierPoly, Fraction]:
        lead, coeff = self.leading()
        unit = coeff.single_phase()
        if unit is None:
            raise DomainError(f"leading coefficient {coeff} is not invertible")
        sign, angle = unit
        inv = FourierPoly.monomial(-lead, PhaseSum.phase(-angle, sign))
        ratio = -(self.denominator * inv - FourierPoly.constant(1))
        step = min((self.depth(x) for x in ratio.support()), default=Fraction(1))
        if step <= 0:
            raise DomainError("denominator terms do not increase along the cone")
        return inv, ratio, step

    def expand(self, order: int) -> FourierPoly:
        """Partial expansion keeping depth at most ``order`` geometric steps
        beyond the leading numerator term; earlier coefficients are final."""
        inv, ratio, step = self._ratio()
        num = self.numerator * inv
        if num.is_zero():
            return num
        base = min(self.depth(x) for x in num.support())
        limit = base + order * step
        series = FourierPoly.constant(1)
        power = FourierPoly.constant(1)
        for _ in range(order):
            power = _truncate(power * ratio, self, limit - base)
            if power.is_zero():
                break
            series = series + power
        out = num * series
        return _truncate(out, self, limit)

    def value(self, mu: Weight | tuple[float, float]) -> complex:
        return eval_numeric(self.numerator, mu) / eval_numeric(self.denominator, mu)


def _truncate(p: FourierPoly, s: ConeSeries, limit: Fraction) -> FourierPoly:
    return FourierPoly({x: c for x, c in p.terms.items() if s.depth(x) <= limit})


def cone_expand(s: ConeSeries, order: int) -> FourierPoly:
    return s.expand(order)


# ---------------------------------------------------------------- symbolic weights

@dataclass(frozen=True)
class SymWeight:
    """const + sum_v n_v * v for symbolic weights v, with integer n_v.

    The constant is only meaningful modulo Q.
    """

    const: Weight = Weight(0, 0)
    coeffs: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        merged: dict[str, int] = defaultdict(int)
        for name, n in self.coeffs:
            merged[name] += n
        object.__setattr__(
            self, "coeffs", tuple(sorted((k, v) for k, v in merged.items() if v)))

    @classmethod
    def var(cls, name: str) -> "SymWeight":
        return cls(Weight(0, 0), ((name, 1),))

    @classmethod
    def of(cls, w: Weight) -> "SymWeight":
        return cls(w)

    def __add__(self, other) -> "SymWeight":
        if isinstance(other, Weight):
            other = SymWeight(other)
        return SymWeight(self.const + other.const, self.coeffs + other.coeffs)

    def __neg__(self) -> "SymWeight":
        return SymWeight(-self.const, tuple((k, -v) for k, v in self.coeffs))

    def __sub__(self, other) -> "SymWeight":
        if isinstance(other, Weight):
            other = SymWeight(other)
        return self + (-other)

    def __mul__(self, n: int) -> "SymWeight":
        return SymWeight(self.const * n, tuple((k, v * n) for k, v in self.coeffs))

    __rmul__ = __mul__

    def is_constant(self) -> bool:
        return not self.coeffs

    def substitute(self, values: Mapping[str, Weight]) -> "SymWeight":
        out = SymWeight(self.const)
        for name, n in self.coeffs:
            if name in values:
                out = out + SymWeight(values[name] * n)
            else:
                out = out + SymWeight(Weight(0, 0), ((name, n),))
        return out

    def reduced(self) -> "SymWeight":
        from .modlabel import reduce_mod_q
        return SymWeight(reduce_mod_q(self.const), self.coeffs)

    def delta_normal(self) -> "SymWeight":
        """Representative of {W, -W} modulo Q, since delta([W]) = delta([-W])."""
        a, b = self.reduced(), (-self).reduced()
        if self.coeffs:
            return a if self.coeffs[0][1] > 0 else b
        return min(a, b, key=lambda w: (w.const.d1, w.const.d2))

    def __str__(self) -> str:
        parts = [f"{'+' if n > 0 else '-'}{'' if abs(n) == 1 else abs(n)}{k}"
                 for k, n in self.coeffs]
        c = self.const
        if not c.is_zero() or not parts:
            parts.append(f"+{c}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def sym_pair_constant(w: SymWeight, xi: Coweight) -> Fraction:
    if not w.is_constant():
        raise DomainError(f"the phase <{w}, {xi}> depends on a free parameter")
    return pairing(w.const, xi)


# ---------------------------------------------------------------- combs

@dataclass(frozen=True)
class LatticeSum:
    """The formal sum over a lattice of e^{2 pi i <element, argument>}.

    ``lattice`` is "Q" (the argument is coweight-valued) or "Pv" (the
    argument is weight-valued).
    """

    lattice: str
    argument: object


@dataclass(frozen=True)
class DiracComb:
    """sum over the lattice of delta(argument - element)."""

    lattice: str
    argument: object


def comb_reduce(s: LatticeSum) -> DiracComb:
    """Poisson summation: a Q-sum is a comb on the coweight lattice and a
    coweight-lattice sum is a comb on Q (unit covolume normalisation)."""
    if s.lattice == "Q":
        return DiracComb("Pv", s.argument)
    if s.lattice == "Pv":
        return DiracComb("Q", s.argument)
    raise DomainError(f"unknown lattice {s.lattice!r}")


def comb_grid_check(n: int = COMB_GRID, radius: int = TRUNCATION_RADIUS,
                    dual: bool = False) -> float:
    """Largest deviation of a full-period lattice sum from its comb.

    Points of the grid (1/n) Z^2 are tested.  With ``dual`` false the sum is
    over alpha in Q (root coordinates in [-radius, radius)) at coweight
    arguments; otherwise over coweights at weight arguments given in root
    coordinates.  Both sums equal (2 radius)^2 on the lattice and vanish
    off it when 2 radius is a multiple of n.
    """
    m = np.arange(-radius, radius)
    a1, a2 = np.meshgrid(m, m, indexing="ij")
    worst = 0.0
    count = (2 * radius) ** 2
    for j1 in range(n):
        for j2 in range(n):
            z1, z2 = j1 / n, j2 / n
            # <alpha, zeta> = a1 z1 + a2 z2 in both readings
            total = np.exp(2j * np.pi * (a1 * z1 + a2 * z2)).sum()
            on_lattice = (j1 % n == 0) and (j2 % n == 0)
            expected = count if on_lattice else 0
            worst = max(worst, abs(total - expected) / count)
    del dual  # the two readings give the same numbers in these coordinates
    return worst


# ---------------------------------------------------------------- delta reduction

@dataclass(frozen=True)
class ExpTerm:
    """coeff * e^{2 pi i angle} * e^{2 pi i <M, freq>} * e^{2 pi i <W, X>}.

    M is the integration variable on h*/Q and X the coweight summation
    variable.  W is a symbolic weight.
    """

    coeff: int
    angle: Fraction
    freq: Coweight
    W: SymWeight

    def __mul__(self, other: "ExpTerm") -> "ExpTerm":
        return ExpTerm(self.coeff * other.coeff, frac_part(self.angle + other.angle),
                       self.freq + other.freq, self.W + other.W)

    def conj(self) -> "ExpTerm":
        return ExpTerm(self.coeff, frac_part(-self.angle), -self.freq, -self.W)


@dataclass
class Integrand:
    terms: list[ExpTerm] = field(default_factory=list)

    def __mul__(self, other: "Integrand") -> "Integrand":
        return Integrand([a * b for a in self.terms for b in other.terms])

    def conj(self) -> "Integrand":
        return Integrand([t.conj() for t in self.terms])

    @classmethod
    def from_poly(cls, p: FourierPoly) -> "Integrand":
        """A function of the integration variable M only."""
        out = []
        for xi, c in p.terms.items():
            for a, n in c.terms.items():
                out.append(ExpTerm(n, a, xi, SymWeight()))
        return cls(out)


class DeltaSum:
    """A finite sum sum_W c_W delta([W]) of Dirac deltas on h*/Q."""

    __hash__ = None

    def __init__(self, items: Iterable[tuple[SymWeight, PhaseSum]] = ()):
        acc: dict[SymWeight, PhaseSum] = {}
        for w, c in items:
            key = w.delta_normal()
            acc[key] = acc[key] + c if key in acc else c
        self._terms = {w: c for w, c in acc.items() if not c.is_zero()}

    @property
    def terms(self) -> dict[SymWeight, PhaseSum]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, DeltaSum):
            return NotImplemented
        keys = set(self._terms) | set(other._terms)
        return all(self._terms.get(k, ZERO) == other._terms.get(k, ZERO) for k in keys)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c}) delta([{w}])" for w, c in self._terms.items())


def delta_reduce(f: Integrand) -> DeltaSum:
    """Integrate over M and sum over X.

    The integral keeps the terms without M-dependence; the sum over the
    coweight lattice of e^{2 pi i <W, X>} is the Q-comb delta([W]).
    """
    items = []
    for t in f.terms:
        if t.freq.is_zero():
            items.append((t.W, PhaseSum.phase(t.angle, t.coeff)))
    return DeltaSum(items)
