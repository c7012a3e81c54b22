"""Self-checks run by ``sl3mm verify``.

Each suite is a list of named checks returning ``(ok, detail)``.  They are
smaller than the test suite but exercise the same invariants, so a user can
confirm an installation without pytest.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import admissible as adm
from .errors import Sl3mmError
from .rootdata import (
    CONJ, D6, E, M32, Coweight, Weight, admissible_levels, central_charge,
    pairing,
)

SEED = 20240617


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    ok: bool
    detail: str = ""


def _rootdata() -> dict[str, Callable[[], tuple[bool, str]]]:
    def group():
        closed = all(g * h in D6 for g in D6 for h in D6)
        inv = all(g * g.inverse() == E for g in D6)
        return closed and inv, "D6 closed under composition with inverses"

    def conj():
        lam = Weight(Fraction(2, 3), Fraction(-5, 7))
        return CONJ.act(lam) == -lam, "c acts as -1"

    def invariance():
        rng = random.Random(SEED)
        for _ in range(50):
            lam = Weight(Fraction(rng.randint(-9, 9), 4), Fraction(rng.randint(-9, 9), 3))
            xi = Coweight(rng.randint(-4, 4), rng.randint(-4, 4))
            for g in D6:
                if pairing(g.act(lam), g.act_coweight(xi)) != pairing(lam, xi):
                    return False, f"pairing not invariant under {g}"
        return True, "pairing is D6-invariant"

    def charge():
        return central_charge(M32) == -8, f"c(3,2) = {central_charge(M32)}"

    return {"group": group, "conjugation": conj, "invariance": invariance,
            "central-charge": charge}


def _admissible() -> dict:
    def spectrum():
        ws = sorted((a.weight for a in adm.enumerate_admissible(M32)), key=lambda w: (w.d1, w.d2))
        want = sorted([Weight(0, 0), Weight(Fraction(-3, 2), 0), Weight(0, Fraction(-3, 2)),
                       Weight(Fraction(-1, 2), Fraction(-1, 2))], key=lambda w: (w.d1, w.d2))
        return ws == want, f"{len(ws)} admissible weights at (3,2)"

    def counts():
        for lvl in admissible_levels(6, 5):
            n_adm, n_fin, n_sig, n_r2 = adm.counts(lvl)
            f = adm.count_formulas(lvl)
            if (n_adm, n_fin, n_sig) != tuple(f[:3]) or n_r2 != adm.r2_count_formula(lvl):
                return False, f"count mismatch at {lvl}"
        return True, "enumeration matches the count formulas for u<=6, v<=5"

    return {"spectrum": spectrum, "counts": counts}


def _labels() -> dict:
    from .modlabel import canonicalize, identification_orbit, parse_label, semi32

    def round_trip():
        seeds = ["S[1/3]", "R[1/4,0]", "H(-1/2,-1/2)", "H(0,0)", "w2 w1 d S[1/6]"]
        for s in seeds:
            for m in identification_orbit(parse_label(s), M32):
                c = canonicalize(m)
                if parse_label(str(c)) != c or canonicalize(parse_label(str(m))) != c:
                    return False, f"round trip failed for {m}"
        return True, "parse(print(m)) = m on identification orbits"

    def idempotent():
        m = canonicalize(semi32(Fraction(1, 3), CONJ))
        return canonicalize(m) == m, f"c S[1/3] -> {m}"

    return {"round-trip": round_trip, "idempotent": idempotent}


def _degen() -> dict:
    from .degen import decompose_rel
    from .modlabel import LAM32

    def routes():
        for mu in adm.double_points(LAM32, M32):
            hits = adm.singular_locus(LAM32, M32).containing(mu)
            results = {decompose_rel(LAM32, mu, M32, r) for r in hits}
            if len(results) != 1 or len(next(iter(results))) != 4:
                return False, f"routes disagree at {mu}"
        return True, "both curve routes agree at the three double points"

    return {"double-points": routes}


def _modular() -> dict:
    from .modularchar import (
        CharacterPoint, apply_word, eta_inv_fourth, s_squared_delta, unitarity_delta,
    )

    def eta():
        n = 12
        dp = [1] + [0] * n
        for k in range(1, n + 1):
            for _ in range(4):
                for m in range(k, n + 1):
                    dp[m] += dp[m - k]
        return list(eta_inv_fourth(n).coefficients) == dp, "eta^-4 against colored partitions"

    def modular():
        rng = random.Random(SEED)
        worst = 0.0
        for _ in range(5):
            pt = CharacterPoint(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                                (complex(rng.uniform(-1, 1), rng.uniform(-.3, .3)),
                                 complex(rng.uniform(-1, 1), rng.uniform(-.3, .3))),
                                complex(rng.uniform(-.5, .5), rng.uniform(.6, 2)))
            worst = max(worst, apply_word("SSSS", pt).distance(pt),
                        apply_word("STSTST", pt).distance(apply_word("SS", pt)))
        return worst < 1e-10, f"max deviation {worst:.2e}"

    def unitarity():
        flows = [Coweight(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)]
        for x in flows:
            for y in flows:
                d = unitarity_delta(x, y)
                if (x == y) == d.is_zero():
                    return False, f"unitarity fails at {x}, {y}"
                e = s_squared_delta(x, y)
                if (x == -y) == e.is_zero():
                    return False, f"S^2 fails at {x}, {y}"
        return True, "unitarity and S^2 = c on flows in [-1,1]^2"

    return {"eta": eta, "modular-group": modular, "unitarity": unitarity}


def _verlinde() -> dict:
    from .verlinde import expected_rr, standard_fusion_coefficients

    def symbolic():
        return (standard_fusion_coefficients("mu", "nu") == expected_rr("mu", "nu"),
                "Verlinde output equals the relaxed-by-relaxed rule")

    return {"rr-rule": symbolic}


def _fusion(samples: int = 2) -> dict:
    from . import fusion32 as fz
    from .modlabel import twist

    def resolution():
        rng = random.Random(SEED)
        for _ in range(samples):
            for rule in fz.RULES:
                a, b = fz.rule_sample(rng, rule)
                if fz.fuse(a, b) != fz.fuse_by_resolution(a, b):
                    return False, f"{a} x {b} differs between the two routes"
        return True, f"closed rules equal resolution on {len(fz.RULES) * samples} products"

    def vacuum():
        s = fz.random_semi(random.Random(SEED))
        r = fz.random_rel(random.Random(SEED))
        ms = fz.vacuum_multiplicity(fz.fuse(s, twist(CONJ, s)))
        mr = fz.vacuum_multiplicity(fz.fuse(r, twist(CONJ, r)))
        return (ms, mr) == (2, 6), f"vacuum multiplicities {ms}, {mr}"

    def dimension():
        rng = random.Random(SEED)
        for _ in range(10):
            a, b = fz.random_semi(rng), fz.random_rel(rng)
            if fz.dimension_rep(fz.fuse(a, b)) != 32:
                return False, f"dimension fails on {a} x {b}"
        return True, "dimension map multiplicative on samples"

    return {"resolution": resolution, "vacuum": vacuum, "dimension": dimension}


SUITES = {
    "rootdata": _rootdata,
    "admissible": _admissible,
    "labels": _labels,
    "degen": _degen,
    "modular": _modular,
    "verlinde": _verlinde,
    "fusion": _fusion,
}


def run_suite(name: str) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for suite in names:
        for check, fn in SUITES[suite]().items():
            try:
                ok, detail = fn()
            except Sl3mmError as exc:
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            out.append(CheckResult(suite, check, bool(ok), detail))
    return out
