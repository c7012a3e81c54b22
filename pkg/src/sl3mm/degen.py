"""Composition factors of reducible family members.

A semirelaxed module is reducible at two parameter values and a relaxed
one along three coset curves; at the pairwise intersections of those
curves the relaxed module breaks into four highest-weight modules.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import admissible as adm
from .errors import DegenerateParameterError, DomainError, InvariantError
from .modlabel import (
    HW, LAM32, Label, Rel, Semi, canonicalize, flow_free_forms,
    is_semi_degenerate, semi_parameter, twist, flow_apply,
)
from .rootdata import (
    ALPHA1, ALPHA2, ALPHA3, CONJ, E, M32, W1, W1W2, W2, W2W1,
    D6Element, Level, Weight,
)


class GrClass:
    """A finite integer combination of canonical labels."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Label, int] | Iterable[tuple[Label, int]] = ()):
        acc: Counter = Counter()
        items = terms.items() if isinstance(terms, Mapping) else terms
        for lab, n in items:
            acc[lab] += n
        self._terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def of(cls, *labels: Label) -> "GrClass":
        return cls((lab, 1) for lab in labels)

    @property
    def terms(self) -> dict[Label, int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def __iter__(self):
        return iter(lab for lab, _ in self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __getitem__(self, lab: Label) -> int:
        return self._terms.get(lab, 0)

    def __add__(self, other: "GrClass") -> "GrClass":
        return GrClass(list(self._terms.items()) + list(other._terms.items()))

    def __sub__(self, other: "GrClass") -> "GrClass":
        return self + (-1) * other

    def __rmul__(self, n: int) -> "GrClass":
        return GrClass((lab, n * m) for lab, m in self._terms.items())

    def __neg__(self) -> "GrClass":
        return (-1) * self

    def __eq__(self, other) -> bool:
        return isinstance(other, GrClass) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def total(self) -> int:
        return sum(self._terms.values())

    def is_effective(self) -> bool:
        return all(n > 0 for n in self._terms.values())

    def map(self, f) -> "GrClass":
        return GrClass((f(lab), n) for lab, n in self._terms.items())

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for lab, n in self.items():
            coeff = "" if n == 1 else ("-" if n == -1 else f"{n} ")
            out.append(f"{coeff}{lab}")
        return " + ".join(out).replace("+ -", "- ")

    __repr__ = __str__


# ---------------------------------------------------------------- helpers

def _semi_label(lam: Weight, nu: Weight, g: D6Element) -> Label:
    return Label(Semi(lam, semi_parameter(lam, nu)), g)


def _relaxed_partner(lam: Weight, lvl: Level) -> Weight:
    """lambda' = (c w2) . lambda, which again lies in Sigma^1."""
    lp = (CONJ * W2).act_shifted(lam)
    adm.require_sigma1(lp, lvl)
    return lp


def decompose(m: Label, lvl: Level = M32, route: int | None = None) -> GrClass:
    """Irreducible canonical summands of a possibly reducible label."""
    core = m.core
    if isinstance(core, HW):
        return GrClass.of(canonicalize(m, lvl))
    if isinstance(core, Semi):
        adm.require_sigma1(core.lam, lvl)
        if not is_semi_degenerate(core.lam, core.t):
            return GrClass.of(canonicalize(m, lvl))
        inner = decompose_semi(core.lam, core.mu, lvl)
    elif isinstance(core, Rel):
        adm.require_r2(core.lam, lvl)
        if not adm.singular_locus(core.lam, lvl).containing(core.mu):
            return GrClass.of(canonicalize(m, lvl))
        inner = decompose_rel(core.lam, core.mu, lvl, route)
    else:
        raise TypeError(f"not a label core: {core!r}")
    return inner.map(lambda x: canonicalize(
        flow_apply(m.flow, twist(m.twist, x)), lvl))


def decompose_class(c: GrClass, lvl: Level = M32) -> GrClass:
    out = GrClass()
    for lab, n in c.items():
        out = out + n * decompose(lab, lvl)
    return out


def decompose_semi(lam: Weight, mu: Weight, lvl: Level = M32) -> GrClass:
    """Summands of S^lam[mu] at its two reducible parameters."""
    adm.require_sigma1(lam, lvl)
    t = semi_parameter(lam, mu)
    lam_r = W1.act_shifted(lam)
    if t == 0:
        summands = [Label(HW(lam)), Label(HW(lam_r), W1)]
    elif t == semi_parameter(lam, lam_r):
        summands = [Label(HW(lam_r)), Label(HW(lam), W1)]
    else:
        raise DomainError(f"S^{lam}[{mu}] is irreducible")
    return GrClass.of(*(canonicalize(s, lvl) for s in summands))


def rel_curve_summands(lam: Weight, mu: Weight, curve: int,
                       lvl: Level = M32) -> list[Label]:
    """The two semirelaxed summands of R^lam[mu] read off along one curve.

    ``mu`` may be any representative of its coset; it is moved onto the
    curve first.  Outputs are raw labels whose parameters may still be
    degenerate.
    """
    a = adm.require_r2(lam, lvl)
    locus = adm.singular_locus(lam, lvl)
    rep = locus.curves[curve].representative(mu)
    if rep is None:
        raise DomainError(f"[{mu}] is not on curve {curve} of Sing({lam})")
    i2 = a.integral[2]
    lp = _relaxed_partner(lam, lvl)
    try:
        if curve == 0:
            return [_semi_label(lam, rep, E),
                    _semi_label(lp, CONJ.act(rep) + (i2 - 1) * ALPHA2, CONJ)]
        if curve == 1:
            return [_semi_label(lam, W2W1.act(rep) + (i2 - 1) * ALPHA2, W1W2),
                    _semi_label(lp, (CONJ * W2 * W1).act(rep), CONJ * W1W2)]
        if curve == 2:
            return [_semi_label(lam, W2.act(rep) + i2 * ALPHA2, W2),
                    _semi_label(lp, (CONJ * W2).act_shifted(rep), CONJ * W2)]
    except DegenerateParameterError as exc:
        raise InvariantError(f"relaxed degeneration left the alpha1-line: {exc}")
    raise ValueError("curve index must be 0, 1 or 2")


def decompose_rel(lam: Weight, mu: Weight, lvl: Level = M32,
                  route: int | None = None) -> GrClass:
    """Summands of R^lam[mu] for [mu] in Sing(lam).

    On a double point the route (curve) used can be chosen; by default the
    first curve through [mu] is taken.
    """
    hits = adm.singular_locus(lam, lvl).containing(mu)
    if not hits:
        raise DomainError(f"R^{lam}[{mu}] is irreducible")
    if route is None:
        route = hits[0]
    elif route not in hits:
        raise DomainError(f"[{mu}] is not on curve {route}")
    out = GrClass()
    for s in rel_curve_summands(lam, mu, route, lvl):
        out = out + decompose(s, lvl)
    if len(hits) == 1 and any(lab.kind != "Semi" for lab in out):
        raise InvariantError("single-curve degeneration produced non-semirelaxed summands")
    return out


def atypicality_degree(m: Label, lvl: Level = M32) -> int:
    core = m.core
    if isinstance(core, HW):
        return 2
    if isinstance(core, Semi):
        return 2 if is_semi_degenerate(core.lam, core.t) else 1
    hits = adm.singular_locus(core.lam, lvl).containing(core.mu)
    return min(len(hits), 2)


# ---------------------------------------------------------------- top spaces

@dataclass(frozen=True)
class WeightCone:
    """{base + sum n_i gens_i + sum m_j lines_j : n_i in N, m_j in Z}."""

    base: Weight
    gens: tuple[Weight, ...] = ()
    lines: tuple[Weight, ...] = ()

    def twisted(self, g: D6Element) -> "WeightCone":
        return WeightCone(g.act(self.base), tuple(g.act(x) for x in self.gens),
                          tuple(g.act(x) for x in self.lines))

    def contains(self, nu: Weight) -> bool:
        dirs = self.gens + self.lines
        diff = nu - self.base
        if not dirs:
            return diff.is_zero()
        if len(dirs) != 2:
            raise ValueError("cones here are two-dimensional or a point")
        (a1, a2), (b1, b2) = dirs[0].roots(), dirs[1].roots()
        d1, d2 = diff.roots()
        det = a1 * b2 - a2 * b1
        x = (d1 * b2 - d2 * b1) / det
        y = (a1 * d2 - a2 * d1) / det
        coeffs = (x, y)
        for i, c in enumerate(coeffs):
            if c.denominator != 1:
                return False
            if i < len(self.gens) and c < 0:
                return False
        return True


_TOP32 = {
    Weight(0, 0): (),
    Weight(Fraction(-3, 2), 0): (-ALPHA1, -ALPHA3),
    Weight(0, Fraction(-3, 2)): (-ALPHA2, -ALPHA3),
    Weight(Fraction(-1, 2), Fraction(-1, 2)): (-ALPHA1, -ALPHA2),
}


def top_space_support(m: Label) -> WeightCone:
    """Weight support of the ground states of a positive-energy M(3,2) module.

    Every top-space weight multiplicity at (3,2) equals one, so the support
    determines the top space's character.
    """
    forms = flow_free_forms(m, M32)
    if not forms:
        raise DomainError(f"{m} is not positive-energy")
    f = forms[0]
    core = f.core
    if isinstance(core, HW):
        cone = WeightCone(core.lam, _TOP32[core.lam])
    elif isinstance(core, Semi):
        cone = WeightCone(core.mu, (-ALPHA2,), (ALPHA1,))
    else:
        cone = WeightCone(core.mu, (), (ALPHA1, ALPHA2))
    return cone.twisted(f.twist)


def coset_window(mu: Weight, radius: int) -> list[Weight]:
    return [mu + a * ALPHA1 + b * ALPHA2
            for a in range(-radius, radius + 1) for b in range(-radius, radius + 1)]


def support_multiplicities(summands: GrClass, mu: Weight, radius: int) -> Counter:
    """Count, for each weight of mu+Q in a window, the summands containing it."""
    cones = [(top_space_support(lab), n) for lab, n in summands.items()]
    out: Counter = Counter()
    for nu in coset_window(mu, radius):
        out[nu] = sum(n for c, n in cones if c.contains(nu))
    return out


def default_family(lvl: Level = M32) -> Weight:
    if lvl == M32:
        return LAM32
    raise DomainError("a family weight must be given away from (3,2)")
