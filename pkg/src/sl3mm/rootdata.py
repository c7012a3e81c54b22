"""Exact root data for sl3.

Weights are stored by their Dynkin labels, coweights by their integer
coordinates in the basis dual to the simple roots.  Everything here is
rational; floating point never enters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterator

from .errors import LevelError, NonAdmissibleLevelError

Rational = Fraction

# inverse Cartan matrix, times 3
_AINV3 = ((2, 1), (1, 2))


def Q(x) -> Fraction:
    """Coerce ints, strings like '-3/2' and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def is_natural(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0


def is_integer(x: Fraction) -> bool:
    return x.denominator == 1


def frac_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True, order=True)
class Weight:
    """A weight of sl3 given by its Dynkin labels (d1, d2)."""

    d1: Fraction
    d2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "d1", Q(self.d1))
        object.__setattr__(self, "d2", Q(self.d2))

    @classmethod
    def from_roots(cls, t1, t2) -> "Weight":
        """Build the weight t1*alpha1 + t2*alpha2."""
        t1, t2 = Q(t1), Q(t2)
        return cls(2 * t1 - t2, 2 * t2 - t1)

    def roots(self) -> tuple[Fraction, Fraction]:
        """Coordinates in the simple-root basis."""
        return (
            (2 * self.d1 + self.d2) / 3,
            (self.d1 + 2 * self.d2) / 3,
        )

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.d1 + other.d1, self.d2 + other.d2)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.d1 - other.d1, self.d2 - other.d2)

    def __neg__(self) -> "Weight":
        return Weight(-self.d1, -self.d2)

    def __mul__(self, s) -> "Weight":
        s = Q(s)
        return Weight(s * self.d1, s * self.d2)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.d1 == 0 and self.d2 == 0

    def in_root_lattice(self) -> bool:
        t1, t2 = self.roots()
        return is_integer(t1) and is_integer(t2)

    def __str__(self) -> str:
        return f"({self.d1},{self.d2})"


@dataclass(frozen=True, order=True)
class Coweight:
    """An element c1*omega1v + c2*omega2v of the coweight lattice."""

    c1: int
    c2: int

    def __post_init__(self):
        for c in (self.c1, self.c2):
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError("coweight coordinates must be integers")
            elif not isinstance(c, int):
                raise TypeError("coweight coordinates must be integers")
        object.__setattr__(self, "c1", int(self.c1))
        object.__setattr__(self, "c2", int(self.c2))

    def __add__(self, other: "Coweight") -> "Coweight":
        return Coweight(self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other: "Coweight") -> "Coweight":
        return Coweight(self.c1 - other.c1, self.c2 - other.c2)

    def __neg__(self) -> "Coweight":
        return Coweight(-self.c1, -self.c2)

    def __mul__(self, n: int) -> "Coweight":
        return Coweight(n * self.c1, n * self.c2)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.c1 == 0 and self.c2 == 0

    def norm1(self) -> int:
        return abs(self.c1) + abs(self.c2)

    def dual(self) -> Weight:
        """The weight kappa(xi, -); its Dynkin labels are (c1, c2)."""
        return Weight(self.c1, self.c2)

    def as_tuple(self) -> tuple[int, int]:
        return (self.c1, self.c2)

    def __str__(self) -> str:
        return f"({self.c1},{self.c2})"


ZERO_W = Weight(0, 0)
RHO = Weight(1, 1)
OMEGA1 = Weight(1, 0)
OMEGA2 = Weight(0, 1)
OMEGA3 = Weight(-1, 1)  # omega2 - omega1
ALPHA1 = Weight(2, -1)
ALPHA2 = Weight(-1, 2)
ALPHA3 = Weight(1, 1)
ALPHAS = (ALPHA1, ALPHA2, ALPHA3)

ZERO_CW = Coweight(0, 0)
OMEGA1V = Coweight(1, 0)
OMEGA2V = Coweight(0, 1)
OMEGA3V = Coweight(-1, 1)
UNIT_FLOWS = (OMEGA1V, -OMEGA1V, OMEGA2V, -OMEGA2V, OMEGA3V, -OMEGA3V)


def pairing(lam: Weight, xi: Coweight) -> Fraction:
    t1, t2 = lam.roots()
    return t1 * xi.c1 + t2 * xi.c2


def killing_dual(lam: Weight, mu: Weight) -> Fraction:
    a, b = lam.d1, lam.d2
    c, d = mu.d1, mu.d2
    return (2 * a * c + a * d + b * c + 2 * b * d) / 3


def killing_coweight(xi: Coweight, eta: Coweight) -> Fraction:
    return Fraction(2 * xi.c1 * eta.c1 + xi.c1 * eta.c2 + xi.c2 * eta.c1
                    + 2 * xi.c2 * eta.c2, 3)


# ---------------------------------------------------------------- D6

WEYL_NAMES = ("e", "w1", "w2", "w1w2", "w2w1", "w3")

_M_E = ((1, 0), (0, 1))
_M_W1 = ((-1, 0), (1, 1))
_M_W2 = ((1, 1), (0, -1))
_M_D = ((0, 1), (1, 0))


def _mm(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2))
        for i in range(2)
    )


_WEYL_MATS = {
    "e": _M_E,
    "w1": _M_W1,
    "w2": _M_W2,
    "w1w2": _mm(_M_W1, _M_W2),
    "w2w1": _mm(_M_W2, _M_W1),
    "w3": _mm(_mm(_M_W1, _M_W2), _M_W1),
}


@dataclass(frozen=True)
class D6Element:
    """w o d^flag with w one of the six Weyl elements."""

    weyl: str = "e"
    d: bool = False

    def __post_init__(self):
        if self.weyl not in _WEYL_MATS:
            raise ValueError(f"unknown Weyl element {self.weyl!r}")

    @property
    def matrix(self):
        m = _WEYL_MATS[self.weyl]
        return _mm(m, _M_D) if self.d else m

    @property
    def index(self) -> int:
        return WEYL_NAMES.index(self.weyl) + (6 if self.d else 0)

    def __mul__(self, other: "D6Element") -> "D6Element":
        return d6_compose(self, other)

    def inverse(self) -> "D6Element":
        return _INVERSES[self]

    def is_weyl(self) -> bool:
        return not self.d

    def act(self, lam: Weight) -> Weight:
        (a, b), (c, d) = self.matrix
        return Weight(a * lam.d1 + b * lam.d2, c * lam.d1 + d * lam.d2)

    def act_shifted(self, lam: Weight) -> Weight:
        return self.act(lam + RHO) - RHO

    def act_coweight(self, xi: Coweight) -> Coweight:
        (a, b), (c, d) = self.matrix
        return Coweight(a * xi.c1 + b * xi.c2, c * xi.c1 + d * xi.c2)

    def word(self) -> str:
        parts = [] if self.weyl == "e" else [_SPELL[self.weyl]]
        if self.d:
            parts.append("d")
        return " ".join(parts) if parts else "e"

    def __str__(self) -> str:
        return self.word()

    def __lt__(self, other: "D6Element") -> bool:
        return self.index < other.index


_SPELL = {"w1": "w1", "w2": "w2", "w1w2": "w1 w2", "w2w1": "w2 w1", "w3": "w3"}

D6 = tuple(D6Element(w, f) for f in (False, True) for w in WEYL_NAMES)
WEYL = D6[:6]
E = D6Element("e")
W1 = D6Element("w1")
W2 = D6Element("w2")
W1W2 = D6Element("w1w2")
W2W1 = D6Element("w2w1")
W3 = D6Element("w3")
DYN = D6Element("e", True)

_BY_MATRIX = {g.matrix: g for g in D6}
if len(_BY_MATRIX) != 12:  # pragma: no cover - structural sanity
    raise RuntimeError("D6 matrices are not distinct")

_TABLE = {(g, h): _BY_MATRIX[_mm(g.matrix, h.matrix)] for g in D6 for h in D6}
_INVERSES = {g: next(h for h in D6 if _TABLE[(g, h)] == E) for g in D6}
CONJ = _TABLE[(DYN, W3)]


def d6_compose(g: D6Element, h: D6Element) -> D6Element:
    return _TABLE[(g, h)]


def d6_apply(g: D6Element, lam: Weight, shifted: bool = False) -> Weight:
    return g.act_shifted(lam) if shifted else g.act(lam)


def d6_from_word(tokens) -> D6Element:
    """Multiply out a word over w1 w2 w3 d c (left to right)."""
    gens = {"e": E, "w1": W1, "w2": W2, "w3": W3, "d": DYN, "c": CONJ}
    g = E
    for tok in tokens:
        if tok not in gens:
            raise ValueError(f"unknown D6 generator {tok!r}")
        g = g * gens[tok]
    return g


# ---------------------------------------------------------------- level

@dataclass(frozen=True)
class Level:
    """The admissible level k = -3 + u/v."""

    u: int
    v: int

    def __post_init__(self):
        if not isinstance(self.u, int) or not isinstance(self.v, int):
            raise LevelError("u and v must be integers")
        if self.v < 1:
            raise LevelError(f"v must be at least 1, got {self.v}")
        if self.u < 2:
            raise LevelError(f"u must be at least 2, got {self.u}")
        if gcd(self.u, self.v) != 1:
            raise LevelError(f"u={self.u} and v={self.v} are not coprime")

    @property
    def k(self) -> Fraction:
        return Fraction(self.u, self.v) - 3

    def require_admissible(self) -> None:
        if self.u < 3:
            raise NonAdmissibleLevelError(
                f"u={self.u} gives a non-admissible level; u >= 3 is needed")

    def __str__(self) -> str:
        return f"({self.u},{self.v})"


M32 = Level(3, 2)


def admissible_levels(umax: int, vmax: int) -> Iterator[Level]:
    for u in range(3, umax + 1):
        for v in range(1, vmax + 1):
            if gcd(u, v) == 1:
                yield Level(u, v)


# ---------------------------------------------------------------- Casimirs

def casimir_eigenvalues(lam: Weight) -> tuple[Fraction, Fraction]:
    """Eigenvalues (q, cubic) of the quadratic and cubic Casimirs on a
    highest-weight vector of weight lam."""
    a, b = lam.d1, lam.d2
    q = (a * a + b * b + (a + b) ** 2) / 3 + 2 * (a + b)
    cubic = (a + 2 * b + 3) * (2 * a + b + 3) * (a - b)
    return q, cubic


def conformal_weight(lam: Weight, lvl: Level) -> Fraction:
    return killing_dual(lam, lam + 2 * RHO) / (2 * (lvl.k + 3))


def central_charge(lvl: Level) -> Fraction:
    return 8 * lvl.k / (lvl.k + 3)


@lru_cache(maxsize=None)
def weyl_length(g: D6Element) -> int:
    return {"e": 0, "w1": 1, "w2": 1, "w1w2": 2, "w2w1": 2, "w3": 3}[g.weyl]
