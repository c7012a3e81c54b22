"""The standard Verlinde formula for M(3,2), evaluated exactly.

Each Grothendieck fusion coefficient is an integral over the torus and a
sum over the coweight lattice.  Both are carried out symbolically: the
integral keeps the frequency-zero part of the integrand and the lattice
sum turns into a Dirac delta on h*/Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import InvariantError
from .modularchar import INTEGRATION, SUMMATION, symbolic_s, vacuum_inverse_integrand
from .modlabel import reduce_mod_q
from .rootdata import ZERO_CW, Coweight, D6Element, Weight
from .torusfourier import DeltaSum, SymWeight, delta_reduce

SCAN_RADIUS = 3
OUTPUT = "mu_out"


@dataclass(frozen=True)
class FusionEntry:
    """Multiplicity and output coset of one flowed standard summand."""

    multiplicity: int
    coset: SymWeight


class FusionCoefficientTable:
    """{output flow: (multiplicity, coset)} for a standard-by-standard product."""

    def __init__(self, entries: Mapping[Coweight, FusionEntry]):
        self.entries = dict(entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FusionCoefficientTable):
            return NotImplemented
        if set(self.entries) != set(other.entries):
            return False
        for xi, e in self.entries.items():
            f = other.entries[xi]
            if e.multiplicity != f.multiplicity:
                return False
            if (e.coset - f.coset).reduced() != SymWeight():
                return False
        return True

    __hash__ = None

    def support(self) -> list[Coweight]:
        return sorted(self.entries)

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{xi}: {e.multiplicity}[{e.coset}]"
                               for xi, e in sorted(self.entries.items())) + "}"


def _as_sym(mu) -> SymWeight:
    if isinstance(mu, SymWeight):
        return mu
    if isinstance(mu, str):
        return SymWeight.var(mu)
    return SymWeight(mu)


def fusion_coefficient(mu, mu2, xi_out: Coweight, xi: Coweight = ZERO_CW,
                       xi2: Coweight = ZERO_CW) -> DeltaSum:
    """N(sigma^xi R[mu], sigma^xi2 R[mu2]; sigma^xi_out R[mu_out]) as a
    multiple of delta functions in the output coset variable."""
    a, b = _as_sym(mu), _as_sym(mu2)
    out = SymWeight.var(OUTPUT)
    f = (symbolic_s(xi, a, SUMMATION, INTEGRATION)
         * symbolic_s(xi2, b, SUMMATION, INTEGRATION)
         * symbolic_s(xi_out, out, SUMMATION, INTEGRATION).conj()
         * vacuum_inverse_integrand())
    return delta_reduce(f)


def _read_entry(ds: DeltaSum) -> FusionEntry | None:
    terms = ds.terms
    if not terms:
        return None
    if len(terms) != 1:
        raise InvariantError(f"expected a single delta, found {ds}")
    (w, c), = terms.items()
    n = c.as_integer()
    if n is None or n < 0:
        raise InvariantError(f"multiplicity {c} is not a nonnegative integer")
    coeffs = dict(w.coeffs)
    a = coeffs.pop(OUTPUT, 0)
    if a not in (1, -1):
        raise InvariantError(f"delta argument {w} does not fix the output coset")
    rest = SymWeight(w.const, tuple(coeffs.items()))
    return FusionEntry(n, (rest * (-a)).reduced())


def standard_fusion_coefficients(mu, mu2, xi: Coweight = ZERO_CW,
                                 xi2: Coweight = ZERO_CW,
                                 radius: int = SCAN_RADIUS) -> FusionCoefficientTable:
    """Scan output flows within ``radius`` of xi + xi2 and collect the
    nonzero coefficients."""
    base = xi + xi2
    entries = {}
    for c1 in range(-radius, radius + 1):
        for c2 in range(-radius, radius + 1):
            out = base + Coweight(c1, c2)
            e = _read_entry(fusion_coefficient(mu, mu2, out, xi, xi2))
            if e is not None:
                entries[out] = e
    return FusionCoefficientTable(entries)


def expected_rr(mu, mu2) -> FusionCoefficientTable:
    """The relaxed-by-relaxed rule written out directly."""
    from .rootdata import OMEGA1, OMEGA2, OMEGA3, OMEGA1V, OMEGA2V, OMEGA3V
    s = _as_sym(mu) + _as_sym(mu2)
    entries = {ZERO_CW: FusionEntry(2, s.reduced())}
    for v, w in ((OMEGA1V, OMEGA1), (OMEGA2V, OMEGA2), (OMEGA3V, OMEGA3)):
        shift = (s + Fraction(3, 2) * w).reduced()
        entries[v] = FusionEntry(1, shift)
        entries[-v] = FusionEntry(1, shift)
    return FusionCoefficientTable(entries)


def d6_equivariance(table: FusionCoefficientTable, g: D6Element) -> FusionCoefficientTable:
    """Apply g to every output label."""
    out = {}
    for xi, e in table.entries.items():
        c = e.coset
        if not c.is_constant():
            raise InvariantError("twisting a symbolic coset needs the twisted variables")
        out[g.act_coweight(xi)] = FusionEntry(e.multiplicity, SymWeight(reduce_mod_q(g.act(c.const))))
    return FusionCoefficientTable(out)


def flow_equivariance(table: FusionCoefficientTable, xi: Coweight,
                      xi2: Coweight) -> FusionCoefficientTable:
    """Shift every output flow by xi + xi2."""
    return FusionCoefficientTable({k + xi + xi2: e for k, e in table.entries.items()})


def table_to_class(table: FusionCoefficientTable):
    """The product as a Grothendieck class (concrete cosets only)."""
    from .degen import GrClass, decompose
    from .modlabel import LAM32, Label, Rel
    out = GrClass()
    for xi, e in table.entries.items():
        if not e.coset.is_constant():
            raise InvariantError("a symbolic coset has no label")
        lab = Label(Rel(LAM32, e.coset.const), flow=xi)
        out = out + e.multiplicity * decompose(lab)
    return out


def coset_value(e: FusionEntry) -> Weight:
    if not e.coset.is_constant():
        raise InvariantError("symbolic coset")
    return e.coset.const
