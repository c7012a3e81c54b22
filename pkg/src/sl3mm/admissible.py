"""Admissible highest weights of M(u,v) and their classification."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import DomainError
from .rootdata import (
    ALPHA1, ALPHA2, ALPHA3, W1, W2W1, Level, Weight, is_integer, is_natural,
)

PLANAR = "planar"
REFLECTED = "reflected"

O_ZERO = "O0"
O_MIN = "Omin"
O_PR = "Opr"


def _compositions(total: int):
    """Triples of naturals with the given sum, in lexicographic order."""
    for a, b in product(range(total + 1), repeat=2):
        if a + b <= total:
            yield (total - a - b, a, b)


@dataclass(frozen=True)
class AdmWeight:
    """An admissible weight with the integral and fractional data producing it.

    ``integral`` and ``fractional`` are indexed (0, 1, 2) like the affine
    Dynkin labels.
    """

    weight: Weight
    type: str
    integral: tuple[int, int, int]
    fractional: tuple[int, int, int]

    def affine(self, lvl: Level) -> tuple[Fraction, Fraction, Fraction]:
        lam = self.weight
        return (lvl.k - lam.d1 - lam.d2, lam.d1, lam.d2)


def planar_weight(integral, fractional, lvl: Level) -> Weight:
    r = Fraction(lvl.u, lvl.v)
    return Weight(integral[1] - r * fractional[1], integral[2] - r * fractional[2])


def reflected_weight(integral, fractional, lvl: Level) -> Weight:
    u, v = lvl.u, lvl.v
    r = Fraction(u, v)
    return Weight(
        u - 2 - integral[1] - r * (v - fractional[1]),
        u - 2 - integral[0] - r * (v - 1 - fractional[0]),
    )


@lru_cache(maxsize=None)
def enumerate_admissible(lvl: Level) -> tuple[AdmWeight, ...]:
    """All admissible weights at the level, planar ones first."""
    lvl.require_admissible()
    out = []
    for kind in (PLANAR, REFLECTED):
        for f in _compositions(lvl.v - 1):
            if kind == REFLECTED and f[1] < 1:
                continue
            for i in _compositions(lvl.u - 3):
                build = planar_weight if kind == PLANAR else reflected_weight
                out.append(AdmWeight(build(i, f, lvl), kind, i, f))
    seen = {a.weight for a in out}
    if len(seen) != len(out):
        raise AssertionError("planar and reflected admissible weights overlap")
    return tuple(out)


def find_admissible(lam: Weight, lvl: Level) -> AdmWeight | None:
    for a in enumerate_admissible(lvl):
        if a.weight == lam:
            return a
    return None


def require_admissible(lam: Weight, lvl: Level) -> AdmWeight:
    a = find_admissible(lam, lvl)
    if a is None:
        raise DomainError(f"{lam} is not admissible at level {lvl}")
    return a


def dynkin_flip_parts(a: AdmWeight) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Integral and fractional data of d(lambda)."""
    i, f = a.integral, a.fractional
    if a.type == PLANAR:
        return (i[0], i[2], i[1]), (f[0], f[2], f[1])
    return (i[1], i[0], i[2]), (f[1] - 1, f[0] + 1, f[2])


@dataclass(frozen=True)
class ClassTag:
    inAdm: bool
    inSigma1: bool
    inR1: bool
    inR2: bool
    inR3: bool
    fdimTop: bool
    orbit: str

    @property
    def relaxed(self) -> bool:
        return self.inR1 or self.inR2 or self.inR3

    def flags(self) -> list[str]:
        names = ("inSigma1", "inR1", "inR2", "inR3", "fdimTop")
        return [n for n in names if getattr(self, n)]


def _flags(a: AdmWeight) -> dict:
    f = a.fractional
    planar = a.type == PLANAR
    return {
        "inSigma1": planar and f[1] != 0,
        "inR1": planar and f[1] == 0 and f[2] != 0,
        "inR2": planar and f[1] != 0 and f[2] == 0,
        "inR3": (not planar) and f[2] == 0,
        "fdimTop": planar and f[1] == 0 and f[2] == 0,
    }


def in_sigma(a: AdmWeight) -> bool:
    """Membership in the union of Sigma^1 and the reflected weights."""
    return a.type == REFLECTED or _flags(a)["inSigma1"]


def classify(a: AdmWeight, lvl: Level) -> ClassTag:
    fl = _flags(a)
    relaxed = fl["inR1"] or fl["inR2"] or fl["inR3"]
    flipped = find_admissible(Weight(a.weight.d2, a.weight.d1), lvl)
    if flipped is None:
        raise AssertionError("Dynkin flip left the admissible set")
    if relaxed:
        orbit = O_MIN
    elif in_sigma(a) or in_sigma(flipped):
        orbit = O_PR
    else:
        orbit = O_ZERO
    return ClassTag(inAdm=True, orbit=orbit, **fl)


def counts(lvl: Level) -> tuple[int, int, int, int]:
    """Sizes of Adm, the finite-top subset, Sigma^1 and R^2."""
    ws = enumerate_admissible(lvl)
    tags = [classify(a, lvl) for a in ws]
    return (
        len(ws),
        sum(t.fdimTop for t in tags),
        sum(t.inSigma1 for t in tags),
        sum(t.inR2 for t in tags),
    )


def count_formulas(lvl: Level) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """The closed count formulas as usually quoted, kept exact.

    The last entry, (1/4)(u-1)(u-2)(v-1), is off by a factor of two from
    the enumeration (it is not even integral at (3,2)); see
    :func:`r2_count_formula` for the value the enumeration satisfies.
    """
    u, v = lvl.u, lvl.v
    a = Fraction((u - 1) * (u - 2))
    return (a * v * v / 2, a / 2, a * v * (v - 1) / 4, a * (v - 1) / 4)


def r2_count_formula(lvl: Level) -> int:
    return (lvl.u - 1) * (lvl.u - 2) * (lvl.v - 1) // 2


def sigma1(lvl: Level) -> list[AdmWeight]:
    return [a for a in enumerate_admissible(lvl) if _flags(a)["inSigma1"]]


def r_set(lvl: Level, which: int) -> list[AdmWeight]:
    key = {1: "inR1", 2: "inR2", 3: "inR3"}[which]
    return [a for a in enumerate_admissible(lvl) if _flags(a)[key]]


def require_sigma1(lam: Weight, lvl: Level) -> AdmWeight:
    a = find_admissible(lam, lvl)
    if a is None or not _flags(a)["inSigma1"]:
        raise DomainError(f"{lam} does not parametrise a semirelaxed family at {lvl}")
    return a


def require_r2(lam: Weight, lvl: Level) -> AdmWeight:
    a = find_admissible(lam, lvl)
    if a is None or not _flags(a)["inR2"]:
        raise DomainError(f"{lam} does not parametrise a relaxed family at {lvl}")
    return a


def top_multiplicity(a: AdmWeight) -> int:
    """Common weight multiplicity of a relaxed top space."""
    return a.integral[2] + 1


# ---------------------------------------------------------------- Sing

@dataclass(frozen=True)
class Curve:
    """The coset curve [basepoint + C*direction] in h*/Q."""

    basepoint: Weight
    direction: Weight

    def parameter(self, mu: Weight) -> Fraction | None:
        """Return t with mu = basepoint + t*direction mod Q, or None."""
        s1, s2 = (mu - self.basepoint).roots()
        if self.direction == ALPHA1:
            return s1 if is_integer(s2) else None
        if self.direction == ALPHA2:
            return s2 if is_integer(s1) else None
        if self.direction == ALPHA3:
            return s1 if is_integer(s1 - s2) else None
        raise ValueError("curve direction must be a positive root")

    def point(self, t) -> Weight:
        return self.basepoint + Fraction(t) * self.direction

    def representative(self, mu: Weight) -> Weight | None:
        t = self.parameter(mu)
        return None if t is None else self.point(t)


@dataclass(frozen=True)
class SingularLocus:
    curves: tuple[Curve, Curve, Curve]

    def containing(self, mu: Weight) -> list[int]:
        """Indices (0, 1, 2) of the curves through [mu]."""
        return [i for i, c in enumerate(self.curves) if c.parameter(mu) is not None]


def singular_locus(lam: Weight, lvl: Level) -> SingularLocus:
    require_r2(lam, lvl)
    return SingularLocus((
        Curve(lam, ALPHA1),
        Curve(W1.act_shifted(lam), ALPHA2),
        Curve(lam, ALPHA3),
    ))


def double_points(lam: Weight, lvl: Level) -> list[Weight]:
    require_r2(lam, lvl)
    return [lam, W1.act_shifted(lam), W2W1.act_shifted(lam)]


def bounded_hw_test(lam: Weight) -> bool:
    n1, n2 = is_natural(lam.d1), is_natural(lam.d2)
    if n1 and not n2:
        return True
    if n2 and not n1:
        return True
    s = lam.d1 + lam.d2
    return (not n1) and (not n2) and is_integer(s) and s >= -1
