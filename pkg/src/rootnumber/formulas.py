"""Global root numbers of twisted fibers.

Closed-form products for the three twist kinds:

    sextic  (y^2 = x^3 + b*t):   W = -W2 * W3 * (-1/|s'|) * (sq'/3)
    quartic (y^2 = x^3 + a*t*x): W = -W2 * W3 * (-2/|s'|) * (-1/sq')
    quadratic (y^2 = x^3 + a*t^2*x + b*t^3):
            W = -W2 * W3 * (-1/|t''|) * prod of type-based local terms over
            the primes >= 5 of bad reduction,

where s' is the prime-to-6 part of the (powerfree-reduced) effective
parameter, sq' its prime-to-6 square support, and t'' the part of t coprime
to 6 and the discriminant.  Alongside: the relative-variation factors of a
quadratic twist, and an independent per-prime oracle used only to
cross-validate the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import prod

from .arith import (DEFAULT_FACTOR_EFFORT, Factored, Sign, factor, jacobi,
                    kth_powerfree_part, merge_factors, sgn, valuation,
                    _valuation_unchecked)
from .errors import DomainError
from .local import (LocalRootResult, LocalTable, RULE_QUARTIC_2, RULE_QUARTIC_3,
                    RULE_SEXTIC_2, RULE_SEXTIC_3, quadratic_w2, quadratic_w3,
                    rohrlich_local, w2_quartic, w2_sextic, w3_quartic, w3_sextic)
from .reduction import (Curve, I0, KodairaType, base_reduction,
                        kodaira_at_large_prime, quadratic_twist_pair,
                        _QUARTIC_CYCLE, _SEXTIC_CYCLE)


@dataclass(frozen=True)
class RootNumberBreakdown:
    """A global root number with every listed factor, so that
    total == leading_infinity * w2 * w3 * prod(jacobi) * prod(large primes)."""

    family: str
    parameter: int
    total: Sign
    w2: LocalRootResult
    w3: LocalRootResult
    jacobi_factors: tuple[tuple[str, Sign], ...]
    large_prime_factors: tuple[tuple[int, Sign, KodairaType], ...]
    leading_infinity: Sign = -1
    notes: tuple[str, ...] = ()

    def factor_product(self) -> Sign:
        out = self.leading_infinity * self.w2.sign * self.w3.sign
        for _, s in self.jacobi_factors:
            out *= s
        for _, s, _ in self.large_prime_factors:
            out *= s
        return out


@dataclass(frozen=True)
class VariationFactor:
    """W_p(E_t) relative to W_p(E) at a prime p >= 5, with the branch that
    produced it."""

    p: int
    dp: Sign
    reason: str


@dataclass(frozen=True)
class CFactorReport:
    """Sign-independent part of the relative variation of a quadratic twist,
    split by source: c2/c3 measure the failure of W_2/W_3 to follow the
    special laws, c_mult the residue of t at multiplicative places, c_additive
    the additive places dividing t, c_delta the Jacobi correction at bad
    primes dividing t.  The product is +1 for every squarefree t exactly when
    the family's root number depends on t only through sgn(t)."""

    c2: Sign
    c3: Sign
    c_mult: Sign
    c_additive: Sign
    c_delta: Sign

    @property
    def product(self) -> Sign:
        return self.c2 * self.c3 * self.c_mult * self.c_additive * self.c_delta


def _value_of(sign: Sign, factors) -> int:
    return sign * prod(p ** e for p, e in factors)


def _tau_parts(factors) -> tuple[int, int]:
    """(odd-exponent part, even-exponent part) over the primes >= 5."""
    tau1 = sq = 1
    for p, e in factors:
        if p == 2 or p == 3:
            continue
        if e & 1:
            tau1 *= p
        else:
            sq *= p
    return tau1, sq


def _effective(coeff: int, t: int, k: int, effort: int,
               t_factors=None) -> tuple[int, tuple, bool]:
    """Powerfree-reduced effective parameter coeff*t and its factorization."""
    if coeff == 0:
        raise DomainError("family coefficient must be nonzero")
    if t == 0:
        raise DomainError("t must be nonzero")
    if t_factors is None:
        fac = factor(coeff * t, effort)
    else:
        fac = merge_factors(_coeff_factored(coeff, effort), Factored(sgn(t), t_factors))
    sign, reduced, changed = kth_powerfree_part(fac, k)
    return _value_of(sign, reduced), reduced, changed


@lru_cache(maxsize=256)
def _coeff_factored(coeff: int, effort: int) -> Factored:
    return factor(coeff, effort)


# ---------------------------------------------------------------------------
# Sextic twists: y^2 = x^3 + b*t, fiber determined by s = b*t mod 6th powers.

def _sextic_parts(s: int, factors) -> tuple[Sign, Sign, Sign, Sign]:
    tau1, sq = _tau_parts(factors)
    return w2_sextic(s), w3_sextic(s), jacobi(-1, tau1), jacobi(sq, 3)


def _sextic_total(s: int, factors) -> Sign:
    w2, w3, j1, j2 = _sextic_parts(s, factors)
    return -w2 * w3 * j1 * j2


def _sextic_oracle_total(s: int, factors) -> Sign:
    out = -w2_sextic(s) * w3_sextic(s)
    for p, e in factors:
        if p >= 5:
            out *= rohrlich_local(_SEXTIC_CYCLE[e % 6], p)
    return out


def root_number_sextic(b: int, t: int, *, effort: int = DEFAULT_FACTOR_EFFORT) -> RootNumberBreakdown:
    """Root number of y^2 = x^3 + b*t.

    The effective parameter is b*t, reduced sixth-power-free first (with a
    note in the breakdown when the reduction was nontrivial).
    """
    s, factors, changed = _effective(b, t, 6, effort)
    w2, w3, j1, j2 = _sextic_parts(s, factors)
    tau1, sq = _tau_parts(factors)
    total = -w2 * w3 * j1 * j2
    notes = (f"parameter {b * t} reduced sixth-power-free to {s}",) if changed else ()
    return RootNumberBreakdown(
        family="sextic", parameter=s, total=total,
        w2=LocalRootResult(2, w2, RULE_SEXTIC_2),
        w3=LocalRootResult(3, w3, RULE_SEXTIC_3),
        jacobi_factors=((f"(-1/{tau1})", j1), (f"({sq}/3)", j2)),
        large_prime_factors=(), notes=notes)


# ---------------------------------------------------------------------------
# Quartic twists: y^2 = x^3 + a*t*x, fiber determined by s = a*t mod 4th powers.

def _quartic_parts(s: int, factors) -> tuple[Sign, Sign, Sign, Sign]:
    tau1, sq = _tau_parts(factors)
    return w2_quartic(s), w3_quartic(s), jacobi(-2, tau1), jacobi(-1, sq)


def _quartic_total(s: int, factors) -> Sign:
    w2, w3, j1, j2 = _quartic_parts(s, factors)
    return -w2 * w3 * j1 * j2


def _quartic_oracle_total(s: int, factors) -> Sign:
    out = -w2_quartic(s) * w3_quartic(s)
    for p, e in factors:
        if p >= 5:
            out *= rohrlich_local(_QUARTIC_CYCLE[e % 4], p)
    return out


def root_number_quartic(a: int, t: int, *, effort: int = DEFAULT_FACTOR_EFFORT) -> RootNumberBreakdown:
    """Root number of y^2 = x^3 + a*t*x, parameter a*t reduced fourth-power-free."""
    s, factors, changed = _effective(a, t, 4, effort)
    w2, w3, j1, j2 = _quartic_parts(s, factors)
    tau1, sq = _tau_parts(factors)
    total = -w2 * w3 * j1 * j2
    notes = (f"parameter {a * t} reduced fourth-power-free to {s}",) if changed else ()
    return RootNumberBreakdown(
        family="quartic", parameter=s, total=total,
        w2=LocalRootResult(2, w2, RULE_QUARTIC_2),
        w3=LocalRootResult(3, w3, RULE_QUARTIC_3),
        jacobi_factors=((f"(-2/{tau1})", j1), (f"(-1/{sq})", j2)),
        large_prime_factors=(), notes=notes)


# ---------------------------------------------------------------------------
# Quadratic twists.

@lru_cache(maxsize=128)
def _quadratic_base_data(curve: Curve, effort: int):
    """Factored discriminant and the base reduction type at every prime >= 5
    dividing it.  Requires the model to be minimal at those primes."""
    delta_fac = factor(curve.discriminant, effort)
    types = tuple((p, base_reduction(curve, p)) for p, _ in delta_fac.factors if p >= 5)
    return delta_fac, types


def _squarefree_twist(t: int, effort: int, t_factors=None) -> tuple[int, tuple, bool]:
    if t == 0:
        raise DomainError("t must be nonzero")
    fac = factor(t, effort) if t_factors is None else Factored(sgn(t), t_factors)
    sign, reduced, changed = kth_powerfree_part(fac, 2)
    return _value_of(sign, reduced), reduced, changed


def variation_factor(base_type: KodairaType, p: int, t: int, b_unit: int) -> VariationFactor:
    """D_p with W_p(E_t) = D_p * W_p(E) for a squarefree twist t, by the base
    reduction type at p >= 5.

    When p does not divide t: +1 at good/additive places, (t/p) at
    multiplicative ones.  When p divides t: +1 for III/III*, (-1/p) for
    I0/I0*, (3/p) for II/II*/IV/IV*, and for the potentially multiplicative
    pair -(-6*b*u/p) where b is the prime-to-p unit of the base constant
    coefficient and u is the prime-to-p unit of t for an I_m* base (the
    minimalization of the twisted model contributes it) but drops out for an
    I_m base.
    """
    if p < 5:
        raise DomainError(f"variation factors are type-based only at p >= 5, got {p}")
    v, t_unit = valuation(t, p)
    if v == 0:
        if base_type.is_multiplicative:
            return VariationFactor(p, jacobi(t, p), "coprime-mult")
        return VariationFactor(p, 1, "coprime-other")
    if base_type.series == "III":
        return VariationFactor(p, 1, "III-pair")
    if base_type.series == "I0":
        return VariationFactor(p, jacobi(-1, p), "I0-pair")
    if base_type.series in ("II", "IV"):
        return VariationFactor(p, jacobi(3, p), "II-IV-pair")
    # I_m / I_m*
    if base_type.starred:
        dp = -jacobi(-6 * b_unit * t_unit, p)
    else:
        dp = -jacobi(-6 * b_unit, p)
    return VariationFactor(p, dp, "Im-pair")


def root_number_quadratic_relative(curve: Curve, t: int,
                                   table: LocalTable | None = None, *,
                                   effort: int = DEFAULT_FACTOR_EFFORT,
                                   ) -> tuple[CFactorReport, Sign]:
    """Relative root number of the quadratic twist by squarefree t.

    Returns (report, C) with W(E_t) = C * W(E); C equals sgn(t) times the
    report's product (the product collects everything sign-independent, so a
    family is sign-determined exactly when the product is +1 for all t).
    """
    if curve.kind != "quadratic":
        raise DomainError("relative variation applies to quadratic families (a*b != 0)")
    t, t_factors, _ = _squarefree_twist(t, effort)
    _, types = _quadratic_base_data(curve, effort)

    d2 = quadratic_w2(curve, t, table).sign * quadratic_w2(curve, 1, table).sign
    t2 = _valuation_unchecked(t, 2)[1]
    c2 = sgn(t) * d2 * jacobi(-1, abs(t2))

    d3 = quadratic_w3(curve, t, table).sign * quadratic_w3(curve, 1, table).sign
    v3 = _valuation_unchecked(t, 3)[0]
    c3 = d3 * (-1) ** v3

    c_mult = 1
    delta_m_coprime = 1
    c_additive = 1
    t_prime = 1
    for p, btype in types:
        b_unit = _valuation_unchecked(curve.b, p)[1]
        if t % p == 0:
            t_prime *= p
            dp = variation_factor(btype, p, t, b_unit).dp
            if btype.is_multiplicative:
                c_mult *= dp
            else:
                c_additive *= dp
        elif btype.is_multiplicative:
            delta_m_coprime *= p
    c_mult *= jacobi(t, delta_m_coprime)
    c_delta = jacobi(-1, t_prime)

    report = CFactorReport(c2, c3, c_mult, c_additive, c_delta)
    return report, sgn(t) * report.product


def root_number_quadratic_absolute(curve: Curve, t: int,
                                   w2: LocalRootResult | Sign,
                                   w3: LocalRootResult | Sign, *,
                                   effort: int = DEFAULT_FACTOR_EFFORT) -> RootNumberBreakdown:
    """Root number of the quadratic twist by squarefree t, with the local
    signs at 2 and 3 supplied by the caller (special law or user table)."""
    if curve.kind != "quadratic":
        raise DomainError("quadratic formula applies to quadratic families (a*b != 0)")
    if isinstance(w2, int):
        w2 = LocalRootResult(2, w2, "user-table")
    if isinstance(w3, int):
        w3 = LocalRootResult(3, w3, "user-table")
    original = t
    t, t_factors, changed = _squarefree_twist(t, effort)
    _, types = _quadratic_base_data(curve, effort)
    bad = {p for p, _ in types}

    t_coprime = 1
    for p, e in t_factors:
        if p >= 5 and p not in bad:
            t_coprime *= p
    j = jacobi(-1, t_coprime)

    large = []
    for p, btype in types:
        v = 1 if t % p == 0 else 0
        ttype = btype if v % 2 == 0 else quadratic_twist_pair(btype)
        wp = rohrlich_local(ttype, p, b6coeff=curve.b * t ** 3)
        large.append((p, wp, ttype))

    total = -w2.sign * w3.sign * j
    for _, wp, _ in large:
        total *= wp
    notes = (f"twist {original} reduced squarefree to {t}",) if changed else ()
    return RootNumberBreakdown(
        family="quadratic", parameter=t, total=total, w2=w2, w3=w3,
        jacobi_factors=((f"(-1/{t_coprime})", j),),
        large_prime_factors=tuple(large), notes=notes)


def root_number_quadratic(curve: Curve, t: int, table: LocalTable | None = None, *,
                          effort: int = DEFAULT_FACTOR_EFFORT) -> RootNumberBreakdown:
    """Root number of the quadratic twist by t, deriving W_2 and W_3 from the
    special laws or a user table.  Square content of t is dropped first."""
    t, _, _ = _squarefree_twist(t, effort)
    w2 = quadratic_w2(curve, t, table)
    w3 = quadratic_w3(curve, t, table)
    return root_number_quadratic_absolute(curve, t, w2, w3, effort=effort)


def root_number(curve: Curve, t: int, table: LocalTable | None = None, *,
                effort: int = DEFAULT_FACTOR_EFFORT) -> RootNumberBreakdown:
    """Root number of the twist of `curve` by t, dispatching on family kind."""
    kind = curve.kind
    if kind == "sextic":
        return root_number_sextic(curve.b, t, effort=effort)
    if kind == "quartic":
        return root_number_quartic(curve.a, t, effort=effort)
    return root_number_quadratic(curve, t, table, effort=effort)


def oracle_root_number(curve: Curve, t: int, table: LocalTable | None = None, *,
                       effort: int = DEFAULT_FACTOR_EFFORT) -> Sign:
    """Per-prime-product root number: local signs at 2 and 3 plus the
    type-based formula at every relevant prime >= 5, with no Jacobi-symbol
    aggregation.  Exists to cross-validate the closed forms."""
    kind = curve.kind
    if kind == "sextic":
        s, factors, _ = _effective(curve.b, t, 6, effort)
        return _sextic_oracle_total(s, factors)
    if kind == "quartic":
        s, factors, _ = _effective(curve.a, t, 4, effort)
        return _quartic_oracle_total(s, factors)
    t, t_factors, _ = _squarefree_twist(t, effort)
    _, types = _quadratic_base_data(curve, effort)
    bad = dict(types)
    total = -quadratic_w2(curve, t, table).sign * quadratic_w3(curve, t, table).sign
    seen = set()
    for p, _ in t_factors:
        if p >= 5:
            seen.add(p)
    for p in bad:
        seen.add(p)
    for p in sorted(seen):
        btype = bad.get(p, I0)
        ttype = kodaira_at_large_prime(curve, t, p, base_type=btype)
        total *= rohrlich_local(ttype, p, b6coeff=curve.b * t ** 3)
    return total
