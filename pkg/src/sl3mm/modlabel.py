"""Labels for irreducible weight modules and their canonical forms.

A label reads ``sigma^flow twist core``: the core module is twisted by a
D6 element and then spectrally flowed.  Different labels may name
isomorphic modules; :func:`canonicalize` closes the identification orbit
under the known isomorphisms and picks its least element.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

from . import admissible as adm
from .errors import DegenerateParameterError, InvariantError, LabelSyntaxError
from .rootdata import (
    ALPHA1, CONJ, DYN, E, M32, OMEGA1V, OMEGA2V, W1, W1W2, W2, W2W1, ZERO_CW,
    Coweight, D6Element, Level, Weight, d6_from_word, frac_part, is_natural,
    killing_coweight, pairing,
)

ORBIT_CAP = 10_000


# ---------------------------------------------------------------- cosets

def reduce_mod_q(mu: Weight) -> Weight:
    """Canonical representative of mu + Q, with d1 in [0,1) and d2 in [0,3).

    Q is spanned by (1,1) and (0,3) in Dynkin coordinates.
    """
    n = mu.d1.numerator // mu.d1.denominator
    a, b = mu.d1 - n, mu.d2 - n
    m = (b / 3).numerator // (b / 3).denominator
    return Weight(a, b - 3 * m)


def same_coset(mu: Weight, nu: Weight) -> bool:
    return (mu - nu).in_root_lattice()


def semi_parameter(lam: Weight, mu: Weight) -> Fraction:
    """t in [0,1) with [mu] = [lam + t alpha1] on the alpha1-line through lam."""
    s1, s2 = (mu - lam).roots()
    if s2.denominator != 1:
        raise DegenerateParameterError(
            f"{mu} is not on the line {lam} + C alpha1 modulo Q")
    return frac_part(s1)


# ---------------------------------------------------------------- cores

@dataclass(frozen=True)
class HW:
    lam: Weight

    def key(self) -> tuple:
        return (0, self.lam.d1, self.lam.d2)

    def __str__(self) -> str:
        return f"H({_fmt(self.lam.d1)},{_fmt(self.lam.d2)})"


@dataclass(frozen=True)
class Semi:
    """The semirelaxed module with top-space support [lam + t alpha1]."""

    lam: Weight
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", frac_part(Fraction(self.t)))

    def key(self) -> tuple:
        return (1, self.lam.d1, self.lam.d2, self.t)

    @property
    def mu(self) -> Weight:
        return self.lam + self.t * ALPHA1

    def __str__(self) -> str:
        if self.lam == LAM32:
            return f"S[{_fmt(self.t)}]"
        return f"S({_fmt(self.lam.d1)},{_fmt(self.lam.d2)})[{_fmt(self.t)}]"


@dataclass(frozen=True)
class Rel:
    """The relaxed module with top-space support [mu]."""

    lam: Weight
    mu: Weight

    def __post_init__(self):
        object.__setattr__(self, "mu", reduce_mod_q(self.mu))

    def key(self) -> tuple:
        return (2, self.lam.d1, self.lam.d2, self.mu.d1, self.mu.d2)

    def __str__(self) -> str:
        body = f"[{_fmt(self.mu.d1)},{_fmt(self.mu.d2)}]"
        if self.lam == LAM32:
            return "R" + body
        return f"R({_fmt(self.lam.d1)},{_fmt(self.lam.d2)})" + body


Core = Union[HW, Semi, Rel]

LAM32 = Weight(Fraction(-3, 2), 0)


@dataclass(frozen=True)
class Label:
    """sigma^flow twist(core)."""

    core: Core
    twist: D6Element = E
    flow: Coweight = ZERO_CW

    def sort_key(self) -> tuple:
        f = self.flow
        return (f.norm1(), f.c1, f.c2, self.twist.index) + self.core.key()

    def __lt__(self, other: "Label") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        parts = []
        if not self.flow.is_zero():
            parts.append(f"sf({self.flow.c1},{self.flow.c2})*")
        if self.twist != E:
            parts.append(self.twist.word() + " ")
        parts.append(str(self.core))
        return "".join(parts)

    @property
    def kind(self) -> str:
        return type(self.core).__name__


def twist(g: D6Element, m: Label) -> Label:
    return Label(m.core, g * m.twist, g.act_coweight(m.flow))


def flow_apply(xi: Coweight, m: Label) -> Label:
    return Label(m.core, m.twist, m.flow + xi)


def flowed_weight_shift(nu: Weight, delta: Fraction, xi: Coweight,
                        lvl: Level) -> tuple[Weight, Fraction]:
    """Weight and conformal weight of a vector after spectral flow by xi."""
    k = lvl.k
    return (nu + k * xi.dual(),
            delta + pairing(nu, xi) + killing_coweight(xi, xi) * k / 2)


# ---------------------------------------------------------------- validity

def semi_degenerate_values(lam: Weight) -> tuple[Fraction, Fraction]:
    """Parameters t at which the semirelaxed module S^lam[t] is reducible."""
    return (Fraction(0), frac_part(-(lam.d1 + 1)))


def is_semi_degenerate(lam: Weight, t: Fraction) -> bool:
    return frac_part(Fraction(t)) in semi_degenerate_values(lam)


def is_rel_singular(lam: Weight, mu: Weight, lvl: Level) -> bool:
    return bool(adm.singular_locus(lam, lvl).containing(mu))


def validate_core(core: Core, lvl: Level) -> None:
    if isinstance(core, HW):
        adm.require_admissible(core.lam, lvl)
    elif isinstance(core, Semi):
        adm.require_sigma1(core.lam, lvl)
        if is_semi_degenerate(core.lam, core.t):
            raise DegenerateParameterError(
                f"S^{core.lam}[t={core.t}] is reducible; decompose it with degen")
    elif isinstance(core, Rel):
        adm.require_r2(core.lam, lvl)
        if is_rel_singular(core.lam, core.mu, lvl):
            raise DegenerateParameterError(
                f"R^{core.lam}[{core.mu}] is reducible; decompose it with degen")
    else:
        raise TypeError(f"not a module core: {core!r}")


# ---------------------------------------------------------------- rewrite rules

def r2_representative(lam: Weight, lvl: Level) -> Weight:
    """The R^2 weight in the shifted Weyl orbit of a relaxed weight."""
    for g in (E, W1, W1W2):
        cand = g.act_shifted(lam)
        a = adm.find_admissible(cand, lvl)
        if a is not None and adm.classify(a, lvl).inR2:
            return cand
    raise InvariantError(f"no R^2 representative for {lam} at {lvl}")


@lru_cache(maxsize=None)
def core_rules(core: Core, lvl: Level) -> tuple[tuple[Coweight, D6Element, Core], ...]:
    """Isomorphisms core = sigma^a h(core') valid at this level.

    The list is closed under inversion (checked in the test suite), so a
    breadth-first search along it explores whole identification orbits.
    """
    rules: list[tuple[Coweight, D6Element, Core]] = []
    if isinstance(core, HW):
        lam = core.lam
        m0, m1, m2 = lvl.k - lam.d1 - lam.d2, lam.d1, lam.d2
        if is_natural(m1):
            rules.append((ZERO_CW, W1, core))
        if is_natural(m2):
            rules.append((ZERO_CW, W2, core))
        rules.append((ZERO_CW, DYN, HW(Weight(lam.d2, lam.d1))))
        rules.append((OMEGA1V, W1W2, HW(Weight(m2, m0))))
        rules.append((OMEGA2V, W2W1, HW(Weight(m0, m1))))
        if is_natural(m0) and is_natural(m1) and is_natural(m2):
            rules.append((-OMEGA1V, E, HW(Weight(m0, m1))))
            rules.append((-OMEGA2V, E, HW(Weight(m2, m0))))
        if is_natural(m1):
            rules.append((OMEGA2V - OMEGA1V, W2, HW(Weight(m2, m0))))
        if is_natural(m2):
            rules.append((OMEGA1V - OMEGA2V, W1, HW(Weight(m0, m1))))
    elif isinstance(core, Semi):
        lam = core.lam
        rules.append((ZERO_CW, W1, Semi(lam, -lam.d1 - core.t)))
        flipped = Weight(lam.d1, lvl.k - lam.d1 - lam.d2)
        rules.append((OMEGA2V, CONJ * W1, Semi(flipped, core.t)))
    elif isinstance(core, Rel):
        lam, mu = core.lam, core.mu
        rules.append((ZERO_CW, W1, Rel(lam, W1.act(mu))))
        rules.append((ZERO_CW, W2, Rel(lam, W2.act(mu))))
        star = r2_representative((CONJ * W2).act_shifted(lam), lvl)
        rules.append((ZERO_CW, DYN, Rel(star, DYN.act(mu))))
    return tuple(rules)


def neighbours(m: Label, lvl: Level) -> Iterator[Label]:
    g = m.twist
    for a, h, core in core_rules(m.core, lvl):
        yield Label(core, g * h, m.flow + g.act_coweight(a))


def identification_orbit(m: Label, lvl: Level) -> frozenset[Label]:
    """All labels reachable from m through the identification rules.

    At v = 1 every flow by the coroot lattice acts trivially, so orbits are
    infinite; there the search is confined to flows no longer (in the l1
    sense) than the start plus two, which still contains every flow-free
    member.
    """
    window = m.flow.norm1() + 2 if lvl.v == 1 else None
    seen = {m}
    todo = deque([m])
    while todo:
        cur = todo.popleft()
        for nxt in neighbours(cur, lvl):
            if nxt in seen:
                continue
            if window is not None and nxt.flow.norm1() > window:
                continue
            seen.add(nxt)
            if len(seen) > ORBIT_CAP:
                raise InvariantError(
                    f"identification orbit of {m} exceeds {ORBIT_CAP} labels")
            todo.append(nxt)
    return frozenset(seen)


@lru_cache(maxsize=200_000)
def _canonical(m: Label, lvl: Level) -> Label:
    return min(identification_orbit(m, lvl), key=Label.sort_key)


def canonicalize(m: Label, lvl: Level = M32) -> Label:
    validate_core(m.core, lvl)
    return _canonical(m, lvl)


def is_positive_energy(m: Label, lvl: Level = M32) -> bool:
    return canonicalize(m, lvl).flow.is_zero()


def positive_energy_flow_image(m: Label, xi: Coweight,
                               lvl: Level = M32) -> Label | None:
    """The flow-free label isomorphic to sigma^xi(m), if there is one."""
    c = canonicalize(flow_apply(xi, m), lvl)
    return c if c.flow.is_zero() else None


def flow_free_forms(m: Label, lvl: Level = M32) -> list[Label]:
    """Members of the orbit carrying no spectral flow, sorted."""
    validate_core(m.core, lvl)
    return sorted((x for x in identification_orbit(m, lvl) if x.flow.is_zero()),
                  key=Label.sort_key)


# ---------------------------------------------------------------- grammar

def _fmt(x: Fraction) -> str:
    return str(Fraction(x))


_NUM = r"-?\d+(?:/\d+)?"
_CORE_RE = re.compile(
    rf"^(?P<kind>[HSR])"
    rf"(?:\((?P<l1>{_NUM}),(?P<l2>{_NUM})\))?"
    rf"(?:\[(?P<p1>{_NUM})(?:,(?P<p2>{_NUM}))?\])?$"
)
_FLOW_RE = re.compile(r"^sf\((?P<c1>-?\d+),(?P<c2>-?\d+)\)\*")
_WORD_TOKENS = {"e": ["e"], "w1": ["w1"], "w2": ["w2"], "w3": ["w3"], "d": ["d"],
                "c": ["c"], "w1w2": ["w1", "w2"], "w2w1": ["w2", "w1"]}


def _default_family(kind: str, lvl: Level) -> Weight:
    pool = adm.sigma1(lvl) if kind == "S" else adm.r_set(lvl, 2)
    if len(pool) != 1:
        raise LabelSyntaxError(
            f"{kind}[...] needs an explicit family weight at level {lvl}; "
            f"write {kind}(d1,d2)[...]")
    return pool[0].weight


def parse_label(text: str, lvl: Level = M32) -> Label:
    """Parse e.g. ``sf(0,-1)*c w1 S[1/3]`` into a (not yet canonical) label."""
    s = " ".join(text.split())
    flow = ZERO_CW
    fm = _FLOW_RE.match(s)
    if fm:
        flow = Coweight(int(fm["c1"]), int(fm["c2"]))
        s = s[fm.end():].strip()
    pieces = s.split(" ")
    core_txt = pieces[-1].replace(" ", "")
    tokens: list[str] = []
    for p in pieces[:-1]:
        if p not in _WORD_TOKENS:
            raise LabelSyntaxError(f"unknown twist token {p!r} in {text!r}")
        tokens.extend(_WORD_TOKENS[p])
    cm = _CORE_RE.match(core_txt)
    if not cm:
        raise LabelSyntaxError(f"cannot parse module core {core_txt!r}")
    kind = cm["kind"]
    lam = None
    if cm["l1"] is not None:
        lam = Weight(Fraction(cm["l1"]), Fraction(cm["l2"]))
    p1, p2 = cm["p1"], cm["p2"]
    if kind == "H":
        if lam is None or p1 is not None:
            raise LabelSyntaxError(f"highest-weight labels read H(d1,d2): {text!r}")
        core: Core = HW(lam)
    elif kind == "S":
        if p1 is None or p2 is not None:
            raise LabelSyntaxError(f"semirelaxed labels read S[t]: {text!r}")
        core = Semi(lam if lam is not None else _default_family("S", lvl),
                    Fraction(p1))
    else:
        if p1 is None or p2 is None:
            raise LabelSyntaxError(f"relaxed labels read R[a,b]: {text!r}")
        core = Rel(lam if lam is not None else _default_family("R", lvl),
                   Weight(Fraction(p1), Fraction(p2)))
    return Label(core, d6_from_word(tokens), flow)


def format_label(m: Label) -> str:
    return str(m)


# convenient constructors for M(3,2)

def hw(d1, d2, twist_: D6Element = E, flow: Coweight = ZERO_CW) -> Label:
    return Label(HW(Weight(d1, d2)), twist_, flow)


def semi32(t, twist_: D6Element = E, flow: Coweight = ZERO_CW) -> Label:
    return Label(Semi(LAM32, Fraction(t)), twist_, flow)


def rel32(mu: Weight, twist_: D6Element = E, flow: Coweight = ZERO_CW) -> Label:
    return Label(Rel(LAM32, mu), twist_, flow)
