"""The Grothendieck fusion ring of M(3,2).

Two independent routes are provided.  :func:`fuse` applies the closed
fusion rules after moving both factors into a tabulated form with the
twist and flow equivariances.  :func:`fuse_by_resolution` instead expands
every factor into flowed standard modules along a fixed cone, multiplies
with the standard (Verlinde) rule and reads the product back as labels.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .degen import GrClass, decompose
from .errors import DegenerateParameterError, DomainError, ResolutionError
from .modlabel import (
    HW, LAM32, Label, Rel, Semi, canonicalize, flow_apply, identification_orbit,
    is_rel_singular, is_semi_degenerate, reduce_mod_q, semi_parameter, twist,
)
from .rootdata import (
    ALPHA1, ALPHA2, ALPHA3, CONJ, D6, E, M32, OMEGA1, OMEGA1V, OMEGA2, OMEGA2V,
    OMEGA3, OMEGA3V, W1W2, W2, ZERO_CW, Coweight, D6Element, Level, Weight,
)

RHO_HALF = Weight(Fraction(-1, 2), Fraction(-1, 2))
VACUUM = Label(HW(Weight(0, 0)))
L_RHO = Label(HW(RHO_HALF))
HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)

DEFAULT_DEPTH = 6
DEPTH_MARGIN = 4
HEAD_LEVELS = 4
BASE_BOUND = 24

DIMENSIONS = {"Rel": 8, "Semi": 4, "rho": 3, "vacuum": 1}


def _require32(lvl: Level) -> None:
    from .modularchar import require_modular_level
    require_modular_level(lvl)


# ---------------------------------------------------------------- closed rules

def _R(mu: Weight, flow: Coweight = ZERO_CW) -> Label:
    return Label(Rel(LAM32, mu), E, flow)


def _S(mu: Weight, flow: Coweight = ZERO_CW) -> Label:
    return Label(Semi(LAM32, semi_parameter(LAM32, mu)), E, flow)


_UNIT = ((OMEGA1V, OMEGA1), (OMEGA2V, OMEGA2), (OMEGA3V, OMEGA3))


def rule_rr(mu: Weight, nu: Weight) -> list[tuple[Label, int]]:
    s = mu + nu
    out = [(_R(s), 2)]
    for v, w in _UNIT:
        out += [(_R(s + THREE_HALVES * w, v), 1), (_R(s + THREE_HALVES * w, -v), 1)]
    return out


def rule_rs(mu_s: Weight, nu: Weight) -> list[tuple[Label, int]]:
    s = mu_s + nu
    return [(_R(s), 1)] + [(_R(s + THREE_HALVES * w, v), 1) for v, w in _UNIT]


def rule_lr(nu: Weight) -> list[tuple[Label, int]]:
    return [(_R(nu + HALF * ALPHA3), 1), (_R(nu + HALF * ALPHA1, OMEGA1V), 1),
            (_R(nu + HALF * ALPHA2, OMEGA2V), 1)]


def rule_ss(mu: Weight, nu: Weight) -> list[tuple[Label, int]]:
    s = mu + nu
    return [(_S(s + THREE_HALVES * OMEGA1, OMEGA1V), 1),
            (_R(s + THREE_HALVES * OMEGA2, OMEGA2V), 1),
            (_S(s + THREE_HALVES * OMEGA3, OMEGA3V), 1)]


def rule_ss_w2(mu: Weight, nu: Weight) -> list[tuple[Label, int]]:
    s = mu + W2.act(nu)
    return [(_R(s), 1), (_R(s + THREE_HALVES * OMEGA1, OMEGA1V), 1)]


def rule_ss_w1w2(mu: Weight, nu: Weight) -> list[tuple[Label, int]]:
    s = mu + W1W2.act(nu)
    return [(_R(s), 1), (_R(s + THREE_HALVES * OMEGA3, OMEGA3V), 1)]


def rule_ls(nu: Weight) -> list[tuple[Label, int]]:
    return [(_S(nu + HALF * ALPHA1, OMEGA1V), 1), (_R(nu + HALF * ALPHA2, OMEGA2V), 1)]


def rule_ll() -> list[tuple[Label, int]]:
    return [(VACUUM, 1), (flow_apply(2 * OMEGA1V, VACUUM), 1),
            (flow_apply(2 * OMEGA2V, VACUUM), 1),
            (Label(HW(RHO_HALF), CONJ, OMEGA1V + OMEGA2V), 2)]


def rule_l_conj_l() -> list[tuple[Label, int]]:
    return [(_R(Weight(0, 0)), 1), (VACUUM, 1)]


def _rule(c1, k: D6Element, c2) -> list[tuple[Label, int]] | None:
    """The product c1 x k(c2) if it is tabulated."""
    if isinstance(c1, Rel) and isinstance(c2, Rel):
        return rule_rr(c1.mu, k.act(c2.mu))
    if isinstance(c1, Semi) and isinstance(c2, Rel):
        return rule_rs(c1.mu, k.act(c2.mu))
    if isinstance(c1, HW) and c1.lam == RHO_HALF and isinstance(c2, Rel):
        return rule_lr(k.act(c2.mu))
    if isinstance(c1, Semi) and isinstance(c2, Semi):
        if k == E:
            return rule_ss(c1.mu, c2.mu)
        if k == W2:
            return rule_ss_w2(c1.mu, c2.mu)
        if k == W1W2:
            return rule_ss_w1w2(c1.mu, c2.mu)
        return None
    if isinstance(c1, HW) and c1.lam == RHO_HALF and isinstance(c2, Semi) and k == E:
        return rule_ls(c2.mu)
    if isinstance(c1, HW) and isinstance(c2, HW) and c1.lam == RHO_HALF == c2.lam:
        if k == E:
            return rule_ll()
        if k == CONJ:
            return rule_l_conj_l()
    return None


@lru_cache(maxsize=100_000)
def _forms(m: Label) -> tuple[Label, ...]:
    return tuple(sorted(identification_orbit(m, M32), key=Label.sort_key))


def _finish(flow: Coweight, g: D6Element, raw: Iterable[tuple[Label, int]]) -> GrClass:
    out = GrClass()
    for lab, n in raw:
        out = out + n * decompose(flow_apply(flow, twist(g, lab)))
    return out


def irreducible(m: Label) -> GrClass:
    """The class of a label, split into irreducibles if it is reducible."""
    return decompose(m)


@lru_cache(maxsize=100_000)
def fuse_labels(a: Label, b: Label) -> GrClass:
    """Product of two canonical irreducible labels by the closed rules."""
    fa_all, fb_all = _forms(a), _forms(b)
    for fa in fa_all:
        if fa.core == VACUUM.core:
            return GrClass.of(canonicalize(flow_apply(fa.flow, b)))
    for fb in fb_all:
        if fb.core == VACUUM.core:
            return GrClass.of(canonicalize(flow_apply(fb.flow, a)))
    for fa in fa_all:
        for fb in fb_all:
            k = fa.twist.inverse() * fb.twist
            flow = fa.flow + fb.flow
            r = _rule(fa.core, k, fb.core)
            if r is not None:
                return _finish(flow, fa.twist, r)
            r = _rule(fb.core, k.inverse(), fa.core)
            if r is not None:
                return _finish(flow, fb.twist, r)
    raise ResolutionError(f"no tabulated rule covers {a} x {b}")


def _as_class(x) -> GrClass:
    if isinstance(x, GrClass):
        return x
    if isinstance(x, Label):
        return decompose(x)
    raise TypeError(f"cannot fuse {x!r}")


def fuse(a, b, lvl: Level = M32) -> GrClass:
    """Bilinear Grothendieck product of labels or classes."""
    _require32(lvl)
    ca, cb = _as_class(a), _as_class(b)
    out = GrClass()
    for la, n in ca.items():
        for lb, m in cb.items():
            out = out + (n * m) * fuse_labels(la, lb)
    return out


# ---------------------------------------------------------------- dimensions

def _hw_class(m: Label) -> str:
    return "vacuum" if any(f.core == VACUUM.core for f in _forms(m)) else "rho"


def dimension_rep(a) -> int:
    """The one-dimensional representation R -> 8, S -> 4, L(-rho/2) -> 3, L(0) -> 1."""
    total = 0
    for lab, n in _as_class(a).items():
        kind = lab.kind
        key = _hw_class(canonicalize(lab)) if kind == "HW" else kind
        total += n * DIMENSIONS[key]
    return total


# ---------------------------------------------------------------- standard expansions
#
# Internally a flow is a pair of ints and a coset is an interned id of its
# reduced representative; a standard term (flow, coset) is sigma^flow R[coset].

Flow = tuple[int, int]
Std = tuple  # (Flow, coset id)


def _f(xi: Coweight) -> Flow:
    return (xi.c1, xi.c2)


def depth(xi) -> int:
    """Depth along the cone spanned by -omega2v and omega3v (both depth 1)."""
    c1, c2 = (xi.c1, xi.c2) if isinstance(xi, Coweight) else xi
    return -2 * c1 - c2


def _in_cone(v: Coweight) -> bool:
    return depth(v) > 0


_COSETS: list[Weight] = []
_COSET_IDS: dict[Weight, int] = {}


def _cid(mu: Weight) -> int:
    """Interned id of the coset mu + Q."""
    r = reduce_mod_q(mu)
    i = _COSET_IDS.get(r)
    if i is None:
        i = _COSET_IDS[r] = len(_COSETS)
        _COSETS.append(r)
    return i


def coset_of(i: int) -> Weight:
    return _COSETS[i]


def _red(mu: Weight) -> Weight:
    return reduce_mod_q(mu)


@dataclass(frozen=True)
class Tail:
    """sum_{n>=0} sign_n sigma^{start + n step} R[coset_n], with the pattern
    (coset_n, sign_n) alternating with period two."""

    start: Coweight
    step: Coweight
    pattern: tuple[tuple[Weight, int], tuple[Weight, int]]

    def __post_init__(self):
        if depth(self.step) <= 0:
            raise ResolutionError(f"tail step {self.step} does not point into the cone")
        object.__setattr__(self, "_ids", tuple((_cid(mu), n) for mu, n in self.pattern))

    def negated(self) -> "Tail":
        (a, s), (b, t) = self.pattern
        return Tail(self.start, self.step, ((a, -s), (b, -t)))

    def shifted(self, xi: Coweight) -> "Tail":
        return Tail(self.start + xi, self.step, self.pattern)

    def _emit(self, acc: dict, shift: Flow, bound: int) -> None:
        x1, x2 = self.start.c1 + shift[0], self.start.c2 + shift[1]
        s1, s2 = self.step.c1, self.step.c2
        n = 0
        while -2 * x1 - x2 <= bound:
            mu, sign = self._ids[n % 2]
            acc[((x1, x2), mu)] += sign
            x1, x2, n = x1 + s1, x2 + s2, n + 1


@dataclass(frozen=True)
class TailFamily:
    """A finite set of tails, summed over sigma^{k repeat} for k >= 0 when
    ``repeat`` is set."""

    tails: tuple[Tail, ...]
    repeat: Coweight | None = None

    def __post_init__(self):
        if self.repeat is not None and depth(self.repeat) <= 0:
            raise ResolutionError(f"repeat {self.repeat} does not point into the cone")

    def _emit(self, acc: dict, shift: Flow, bound: int) -> None:
        lowest = min(depth(t.start) for t in self.tails) + depth(shift)
        k = 0
        while True:
            if self.repeat is None:
                sh = shift
            else:
                sh = (shift[0] + k * self.repeat.c1, shift[1] + k * self.repeat.c2)
            if self.repeat is not None and lowest + k * depth(self.repeat) > bound:
                break
            for t in self.tails:
                t._emit(acc, sh, bound)
            if self.repeat is None:
                break
            k += 1


@dataclass(frozen=True)
class GrExpansion:
    """A Grothendieck class written as flowed standard modules: a finite part
    and eventually periodic tails along the resolution cone."""

    finite: tuple[tuple[Coweight, Weight, int], ...] = ()
    families: tuple[TailFamily, ...] = ()

    def _terms(self, bound: int, shift: Flow = (0, 0)) -> dict[Std, int]:
        acc: dict = defaultdict(int)
        for xi, mu, n in self.finite:
            f = (xi.c1 + shift[0], xi.c2 + shift[1])
            if depth(f) <= bound:
                acc[(f, _cid(mu))] += n
        for fam in self.families:
            fam._emit(acc, shift, bound)
        return {k: v for k, v in acc.items() if v}

    def terms(self, bound: int) -> dict[tuple[Coweight, Weight], int]:
        """Every standard term of depth at most ``bound``."""
        return {(Coweight(*f), coset_of(i)): n for (f, i), n in self._terms(bound).items()}

    def is_finite(self) -> bool:
        return not self.families


def _semi_tail(a: Coweight, g: D6Element, mu: Weight, sign: int = 1) -> Tail:
    """sigma^a g S[mu] along whichever of +-g(omega2v) points into the cone."""
    v = g.act_coweight(OMEGA2V)
    if _in_cone(-v):
        return Tail(a, -v, ((_red(g.act(mu)), sign), (_red(g.act(mu - HALF * ALPHA1)), -sign)))
    return Tail(a + v, v, ((_red(g.act(mu + HALF * ALPHA1)), sign), (_red(g.act(mu)), -sign)))


def _hw_lam_family(a: Coweight, g: D6Element, sign: int = 1) -> TailFamily:
    """sigma^a g L(-3/2 omega1), from L = A + sigma^{-2 omega1v} L with
    A = w2 S[lam] - sigma^{-omega2v} S[-rho/2]."""
    u = g.act_coweight(OMEGA1V)
    if _in_cone(-u):
        step, b, s = -2 * u, a, sign
    else:
        step, b, s = 2 * u, a + 2 * u, -sign
    return TailFamily((_semi_tail(b, g * W2, LAM32, s),
                       _semi_tail(b - g.act_coweight(OMEGA2V), g, RHO_HALF, -s)), step)


@lru_cache(maxsize=100_000)
def gr_expand(m: Label) -> GrExpansion:
    """The standard-module expansion of a label along the resolution cone."""
    core = m.core
    if isinstance(core, Rel):
        return GrExpansion(((m.flow, _red(m.twist.act(core.mu)), 1),))
    if isinstance(core, Semi):
        return GrExpansion((), (TailFamily((_semi_tail(m.flow, m.twist, core.mu),)),))
    forms = _forms(canonicalize(m))
    lam_form = next((f for f in forms if f.core == HW(LAM32)), None)
    if lam_form is not None:
        return GrExpansion((), (_hw_lam_family(lam_form.flow, lam_form.twist),))
    f = next(f for f in forms if f.core == HW(RHO_HALF))
    # sigma^a g L(-rho/2) = sigma^{a + g omega2v} g (w2 S[lam] - L(lam))
    b = f.flow + f.twist.act_coweight(OMEGA2V)
    return GrExpansion((), (TailFamily((_semi_tail(b, f.twist * W2, LAM32),)),
                            _hw_lam_family(b, f.twist, -1)))


def expand(m: Label, bound: int) -> dict[Std, int]:
    """Flowed standard terms of a label with depth at most ``bound``."""
    return gr_expand(m)._terms(bound)


def expand_class(c: GrClass, bound: int) -> dict[Std, int]:
    acc: dict = defaultdict(int)
    for lab, n in c.items():
        for k, v in expand(lab, bound).items():
            acc[k] += n * v
    return {k: v for k, v in acc.items() if v}


def min_depth(e: dict) -> int:
    return min((depth(f) for f, _ in e), default=0)


def leading_depth(m: Label) -> int:
    """Least depth of a term of the expansion of m."""
    e = gr_expand(m)
    lows = [depth(xi) for xi, _, _ in e.finite]
    for fam in e.families:
        lows += [depth(t.start) for t in fam.tails]
    return min(lows)


@lru_cache(maxsize=1)
def _rr_shape() -> tuple[tuple[Flow, Weight, int], ...]:
    """The standard product read off the Verlinde computation: output flow
    offset, coset shift relative to mu + nu, multiplicity."""
    from .verlinde import standard_fusion_coefficients
    table = standard_fusion_coefficients("mu", "nu")
    out = []
    for xi, e in table.entries.items():
        if dict(e.coset.coeffs) != {"mu": 1, "nu": 1}:
            raise ResolutionError(f"unexpected standard coset {e.coset}")
        out.append((_f(xi), e.coset.const, e.multiplicity))
    return tuple(out)


@lru_cache(maxsize=200_000)
def _rr_cosets(i1: int, i2: int) -> tuple[tuple[Flow, int, int], ...]:
    s = coset_of(i1) + coset_of(i2)
    return tuple((dx, _cid(s + shift), n) for dx, shift, n in _rr_shape())


def multiply(e1: dict, e2: dict, bound: int) -> dict[Std, int]:
    """Product of two standard expansions, kept to depth ``bound``."""
    acc: dict = defaultdict(int)
    for ((a1, a2), m1), n1 in e1.items():
        d1 = -2 * a1 - a2
        for ((b1, b2), m2), n2 in e2.items():
            if d1 - 2 * b1 - b2 - 2 > bound:
                continue
            n12 = n1 * n2
            for (c1, c2), mu, mult in _rr_cosets(m1, m2):
                x = (a1 + b1 + c1, a2 + b2 + c2)
                if -2 * x[0] - x[1] <= bound:
                    acc[(x, mu)] += n12 * mult
    return {k: v for k, v in acc.items() if v}


def product_expansion(a: Label, b: Label, bound: int) -> dict[Std, int]:
    """Expansion of a x b, exact for every term of depth at most ``bound``."""
    ma, mb = leading_depth(a), leading_depth(b)
    return multiply(expand(a, bound + 2 - mb), expand(b, bound + 2 - ma), bound)


# ---------------------------------------------------------------- recognition

PRIME = 2**61 - 1


def _semi_candidates(flow: Flow, mu: Weight) -> Iterable[Label]:
    xi = Coweight(*flow)
    mu = coset_of(mu)
    for g in D6:
        v = g.act_coweight(OMEGA2V)
        nu = g.inverse().act(mu)
        try:
            t = semi_parameter(LAM32, nu)
        except DegenerateParameterError:
            continue
        if is_semi_degenerate(LAM32, t):
            continue
        for n in range(3):
            for a in (xi + n * v, xi - n * v):
                yield Label(Semi(LAM32, t), g, a)


@lru_cache(maxsize=None)
def _hw_bases() -> tuple[tuple[Label, tuple[Flow, ...]], ...]:
    """The three hw classes up to flow, with the flows of their lowest terms."""
    out = []
    for lab in (VACUUM, L_RHO, canonicalize(twist(CONJ, L_RHO))):
        m = leading_depth(lab)
        heads = {f for f, _ in expand(lab, m + HEAD_LEVELS)}
        out.append((lab, tuple(sorted(heads))))
    return tuple(out)


@lru_cache(maxsize=None)
def _base_terms(base: Label, bound: int) -> tuple:
    """Terms of base sorted by depth, as (depth, c1, c2, coset, n)."""
    return tuple(sorted((depth(f), f[0], f[1], mu, n) for (f, mu), n in expand(base, bound).items()))


def _flowed_terms(base: Label, zeta: Flow, bound: int) -> dict[Std, int]:
    z1, z2 = zeta
    inner = bound - depth(zeta)
    out = {}
    for d, c1, c2, mu, n in _base_terms(base, max(BASE_BOUND, inner)):
        if d > inner:
            break
        out[((c1 + z1, c2 + z2), mu)] = n
    return out


def _candidates(p: dict, bound: int, wide: bool) -> dict[Label, dict[Std, int]]:
    """Irreducible labels that may occur in a product with expansion p, each
    with its expansion to depth ``bound``.

    Flowed hw classes are searched over a box around the product's flows;
    unless ``wide`` is set only those meeting a term of p are kept.
    """
    out: dict = {}
    flows = set()
    for (flow, mu) in p:
        flows.add(flow)
        if not is_rel_singular(LAM32, coset_of(mu), M32):
            out[_R(coset_of(mu), Coweight(*flow))] = {(flow, mu): 1}
        for lab in _semi_candidates(flow, mu):
            if lab not in out:
                out[lab] = expand(lab, bound)
    if not flows:
        return out
    # hw heads can cancel inside a product, so those are searched over a box
    lo1, hi1 = min(f[0] for f in flows) - HEAD_LEVELS, max(f[0] for f in flows) + HEAD_LEVELS
    lo2, hi2 = min(f[1] for f in flows) - HEAD_LEVELS, max(f[1] for f in flows) + HEAD_LEVELS
    for base, heads in _hw_bases():
        zetas = {(c1 - h[0], c2 - h[1]) for h in heads
                 for c1 in range(lo1, hi1 + 1) for c2 in range(lo2, hi2 + 1)
                 if -2 * c1 - c2 <= bound}
        for z in zetas:
            e = _flowed_terms(base, z, bound)
            if wide or not p.keys().isdisjoint(e):
                out[flow_apply(Coweight(*z), base)] = e
    return out


def _solve_mod_p(columns: list[dict], target: dict) -> tuple[dict[int, int], set[int]]:
    """Row-reduce sum_j x_j columns[j] = target over GF(PRIME).

    Returns the pivot values (free variables set to zero) and the variables
    touched by the null space.  Ranks over GF(p) never exceed those over Q,
    so a variable determined here is determined over Q as well.
    """
    by_key: dict = defaultdict(dict)
    for j, c in enumerate(columns):
        for key, v in c.items():
            by_key[key][j] = v % PRIME
    for key in target:
        by_key.setdefault(key, {})
    pivots: dict[int, tuple[dict, int]] = {}
    # rows by depth and pivots on the latest-leading column keep the system
    # close to triangular when the columns are sorted by leading depth
    for key in sorted(by_key, key=lambda k: -2 * k[0][0] - k[0][1]):
        row = by_key[key]
        rhs = target.get(key, 0) % PRIME
        for j in [j for j in row if j in pivots]:
            f = row.get(j, 0)
            if not f:
                continue
            prow, prhs = pivots[j]
            for i, v in prow.items():
                w = (row.get(i, 0) - f * v) % PRIME
                if w:
                    row[i] = w
                else:
                    row.pop(i, None)
            rhs = (rhs - f * prhs) % PRIME
        if not row:
            if rhs:
                raise ResolutionError("product is not a combination of the candidate labels")
            continue
        j = max(row)
        inv = pow(row[j], PRIME - 2, PRIME)
        row = {i: v * inv % PRIME for i, v in row.items()}
        rhs = rhs * inv % PRIME
        for k, (prow, prhs) in pivots.items():
            g = prow.get(j, 0)
            if g:
                for i, v in row.items():
                    w = (prow.get(i, 0) - g * v) % PRIME
                    if w:
                        prow[i] = w
                    else:
                        prow.pop(i, None)
                pivots[k] = (prow, (prhs - g * rhs) % PRIME)
        pivots[j] = (row, rhs)
    free = set(range(len(columns))) - set(pivots)
    loose = set(free)
    for j, (row, _) in pivots.items():
        if free & row.keys():
            loose.add(j)
    return {j: rhs for j, (_, rhs) in pivots.items()}, loose


def _lift(x: int) -> int:
    return x - PRIME if x > PRIME // 2 else x


def recognise(p: dict, bound: int, limit: int) -> GrClass:
    """Write a product expansion (exact to depth ``bound``) as labels.

    Every label whose expansion meets the window is a candidate; only those
    leading at depth at most ``limit`` are reported, and those must be fixed
    uniquely by the window.
    """
    try:
        return _recognise(p, bound, limit, wide=False)
    except ResolutionError:
        # summands whose terms cancel completely need the full search box
        return _recognise(p, bound, limit, wide=True)


def _recognise(p: dict, bound: int, limit: int, wide: bool) -> GrClass:
    cands = _candidates(p, bound, wide)
    keep, cols, lead = [], [], []
    seen = set()
    for c in sorted(cands, key=Label.sort_key):
        e = cands[c]
        sig = frozenset(e.items())
        if e and sig not in seen:
            seen.add(sig)
            keep.append((min_depth(e), c, e))
    keep.sort(key=lambda x: x[0])
    lead = [x[0] for x in keep]
    cols = [x[2] for x in keep]
    keep = [x[1] for x in keep]
    sol, loose = _solve_mod_p(cols, p)
    out = GrClass()
    for j, lab in enumerate(keep):
        if lead[j] > limit:
            continue
        if j in loose:
            raise ResolutionError(f"the window does not determine the multiplicity of {lab}")
        x = _lift(sol.get(j, 0))
        if x:
            out = out + x * GrClass.of(canonicalize(lab))
    return out


def fuse_by_resolution(a: Label, b: Label, bound: int = DEFAULT_DEPTH) -> GrClass:
    """Product of two labels through standard expansions.

    Labels are reported up to ``bound`` levels past the combined leading
    depth of the factors.  The answer is read at two window sizes, must agree
    between them and must reproduce the product expansion exactly.
    """
    a, b = canonicalize(a), canonicalize(b)
    base = leading_depth(a) + leading_depth(b)
    results = []
    for limit in (base + bound, base + bound + 2):
        d = limit + DEPTH_MARGIN
        p = product_expansion(a, b, d)
        res = recognise(p, d, limit)
        check = expand_class(res, limit - 2)
        for k in set(check) | {k for k in p if depth(k[0]) <= limit - 2}:
            if check.get(k, 0) != p.get(k, 0):
                raise ResolutionError("recognised labels do not reproduce the product")
        results.append(res)
    if results[0] != results[1]:
        raise ResolutionError(f"resolution of {a} x {b} depends on the truncation depth")
    return results[0]


def fuse_class_by_resolution(a: GrClass, b: GrClass, bound: int = DEFAULT_DEPTH) -> GrClass:
    out = GrClass()
    for la, n in a.items():
        for lb, m in b.items():
            out = out + (n * m) * fuse_by_resolution(la, lb, bound)
    return out


def conj(c) -> GrClass:
    return _as_class(c).map(lambda lab: canonicalize(twist(CONJ, lab)))


def vacuum_multiplicity(c: GrClass) -> int:
    return c[canonicalize(VACUUM)]


def random_semi(rng, flow: Coweight = ZERO_CW, g: D6Element = E) -> Label:
    """A non-degenerate S[t] with rational t."""
    while True:
        t = Fraction(rng.randint(1, 29), rng.choice([7, 11, 13, 31]))
        if not is_semi_degenerate(LAM32, t):
            return canonicalize(Label(Semi(LAM32, t), g, flow))


def random_rel(rng, flow: Coweight = ZERO_CW, g: D6Element = E) -> Label:
    """A typical R[mu] with rational mu."""
    while True:
        mu = Weight(Fraction(rng.randint(-20, 20), rng.choice([5, 7, 11])),
                    Fraction(rng.randint(-20, 20), rng.choice([5, 7, 13])))
        if not is_rel_singular(LAM32, mu, M32):
            return canonicalize(Label(Rel(LAM32, mu), g, flow))


def random_flow(rng, radius: int = 2) -> Coweight:
    return Coweight(rng.randint(-radius, radius), rng.randint(-radius, radius))


def check_domain(m: Label) -> None:
    if m.core.lam != LAM32 and not isinstance(m.core, HW):
        raise DomainError(f"{m} is not an M(3,2) label")


# ---------------------------------------------------------------- harness

def random_hw(rng, flow: Coweight = ZERO_CW, g: D6Element = E) -> Label:
    lam = rng.choice([Weight(0, 0), LAM32, Weight(0, -THREE_HALVES), RHO_HALF])
    return canonicalize(Label(HW(lam), g, flow))


def random_label(rng) -> Label:
    """Any irreducible M(3,2) label, with random twist and flow."""
    make = rng.choice([random_hw, random_semi, random_rel])
    return make(rng, random_flow(rng), rng.choice(D6))


RULES = ("S x R", "L x R", "S x S", "S x w2 S", "S x w1w2 S", "L x S", "L x L", "L x cL")


def rule_sample(rng, rule: str) -> tuple[Label, Label]:
    """A random pair whose product is governed by the named closed rule.

    L stands for L(-rho/2).  Both factors share a random D6 twist g (the
    relaxed factor of the first two rules gets its own), and each carries
    an independent random flow.
    """
    g = rng.choice(D6)
    lrho = lambda h: canonicalize(Label(HW(RHO_HALF), h, random_flow(rng)))
    semi = lambda h: random_semi(rng, random_flow(rng), h)
    rel = lambda h: random_rel(rng, random_flow(rng), h)
    pairs = {
        "S x R": lambda: (semi(g), rel(rng.choice(D6))),
        "L x R": lambda: (lrho(g), rel(rng.choice(D6))),
        "S x S": lambda: (semi(g), semi(g)),
        "S x w2 S": lambda: (semi(g), semi(g * W2)),
        "S x w1w2 S": lambda: (semi(g), semi(g * W1W2)),
        "L x S": lambda: (lrho(g), semi(g)),
        "L x L": lambda: (lrho(g), lrho(g)),
        "L x cL": lambda: (lrho(g), lrho(g * CONJ)),
    }
    return pairs[rule]()
