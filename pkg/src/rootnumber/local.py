"""Local root numbers.

The classical type-based formula at p >= 5, explicit case laws at p = 2 and
p = 3 for the j = 0 (sextic) and j = 1728 (quartic) twist families, the
special-curve laws that make W_2/W_3 of a quadratic twist family follow a
Jacobi-symbol/valuation-parity pattern, and user-supplied lookup tables for
quadratic bases outside those special lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .arith import Sign, jacobi, sgn, valuation, _valuation_unchecked
from .errors import (DomainError, IncompleteTableError, MissingLocalDataError,
                     TableFormatError)
from .reduction import Curve, KodairaType, Triplet, minimal_triplet

RULE_ROHRLICH = "rohrlich-p5"
RULE_SEXTIC_2 = "va-sextic-2"
RULE_SEXTIC_3 = "va-sextic-3"
RULE_QUARTIC_2 = "va-quartic-2"
RULE_QUARTIC_3 = "va-quartic-3"
RULE_QUAD_SPECIAL_2 = "quadratic-special-2"
RULE_QUAD_SPECIAL_3 = "quadratic-special-3"
RULE_USER_TABLE = "user-table"


@dataclass(frozen=True)
class LocalRootResult:
    """A local root number together with the formula branch that produced it."""

    p: int
    sign: Sign
    rule: str


def rohrlich_local(ktype: KodairaType, p: int, b6coeff: int | None = None) -> Sign:
    """Local root number at a prime p >= 5 by reduction type:

        I0                     -> +1
        II, II*, I_m*, I0*     -> (-1/p)
        III, III*              -> (-2/p)
        IV, IV*                -> (-3/p)
        I_m                    -> -(6*b/p), b the unit part of the model's
                                  constant coefficient (pass it as b6coeff)
    """
    if p < 5:
        raise DomainError(f"type-based local formula needs p >= 5, got {p}")
    if ktype.is_good:
        return 1
    if ktype.is_multiplicative:
        if b6coeff is None:
            raise DomainError("multiplicative type needs the model's constant coefficient")
        _, unit = _valuation_unchecked(b6coeff, p)
        return -jacobi(6 * unit, p)
    if ktype.series == "III":
        return jacobi(-2, p)
    if ktype.series == "IV":
        return jacobi(-3, p)
    return jacobi(-1, p)  # II, II*, I_m*, I0*


# ---------------------------------------------------------------------------
# j = 0 family (y^2 = x^3 + t): W_2 and W_3 by explicit congruence cases.

def w2_sextic(t: int) -> Sign:
    """W_2 of y^2 = x^3 + t.

    -1 iff v2(t) = 0, 2 mod 6, or v2(t) = 1, 3, 4, 5 mod 6 with the odd part
    of t = 3 mod 4.
    """
    if t == 0:
        raise DomainError("t must be nonzero")
    v, t2 = _valuation_unchecked(t, 2)
    r = v % 6
    if r in (0, 2):
        return -1
    return -1 if t2 % 4 == 3 else 1


def w3_sextic(t: int) -> Sign:
    """W_3 of y^2 = x^3 + t, by v3(t) mod 6 and the prime-to-3 part mod 9."""
    if t == 0:
        raise DomainError("t must be nonzero")
    v, t3 = _valuation_unchecked(t, 3)
    r = v % 6
    if r in (1, 2):
        return -1 if t3 % 3 == 1 else 1
    if r in (4, 5):
        return -1 if t3 % 3 == 2 else 1
    if r == 0:
        return -1 if t3 % 9 in (5, 7) else 1
    return -1 if t3 % 9 in (2, 4) else 1  # r == 3


# ---------------------------------------------------------------------------
# j = 1728 family (y^2 = x^3 + t*x).

def w2_quartic(t: int) -> Sign:
    """W_2 of y^2 = x^3 + t*x, by v2(t) mod 4 and the odd part mod 8 or 16."""
    if t == 0:
        raise DomainError("t must be nonzero")
    v, t2 = _valuation_unchecked(t, 2)
    r = v % 4
    if r in (1, 3):
        return -1 if t2 % 8 in (1, 3) else 1
    if r == 0:
        return -1 if t2 % 16 in (1, 5, 9, 11, 13, 15) else 1
    return -1 if t2 % 16 in (1, 3, 5, 7, 11, 15) else 1  # r == 2


def w3_quartic(t: int) -> Sign:
    """W_3 of y^2 = x^3 + t*x: -1 exactly when v3(t) = 2 mod 4."""
    if t == 0:
        raise DomainError("t must be nonzero")
    v, _ = _valuation_unchecked(t, 3)
    return -1 if v % 4 == 2 else 1


# ---------------------------------------------------------------------------
# Quadratic twist families: the special-curve laws at 2 and 3.

@dataclass(frozen=True)
class SpecialTwoVerdict:
    """Whether W_2 of every squarefree twist follows the sign law
    epsilon * sgn(t) * (-1/|3*b2*t2|); epsilon is set only when it does."""

    is_special: bool
    epsilon: Sign | None
    triplet: Triplet


def _reduced_two_triplet(curve: Curve) -> Triplet:
    v2a = valuation(curve.a, 2)[0]
    v2b = valuation(curve.b, 2)[0]
    v2d = valuation(curve.discriminant, 2)[0]
    return minimal_triplet(v2a + 4, v2b + 5, v2d)


def _reduced_three_triplet(curve: Curve) -> Triplet:
    v3a = valuation(curve.a, 3)[0]
    v3b = valuation(curve.b, 3)[0]
    v3d = valuation(curve.discriminant, 3)[0]
    return minimal_triplet(v3a + 1, v3b + 3, v3d)


def special_two_verdict(curve: Curve) -> SpecialTwoVerdict:
    """Decide the special-at-2 law for a quadratic twist family.

    Special exactly when the reduced triplet of (v2(c4), v2(c6), v2(delta))
    is (0,0,0) or (2,3,6) -- then epsilon = -b2 mod 4 -- or (>=4,3,0) or
    (>=6,6,6) -- then epsilon = b2 mod 4 -- with b2 the odd part of b.
    """
    if curve.kind != "quadratic":
        raise DomainError("special-at-2 law applies to quadratic families only (a*b != 0)")
    tri = _reduced_two_triplet(curve)
    b2 = _valuation_unchecked(curve.b, 2)[1]
    if tri.matches(0, 0, 0) or tri.matches(2, 3, 6):
        eps = 1 if (-b2) % 4 == 1 else -1
        return SpecialTwoVerdict(True, eps, tri)
    if tri.matches(("ge", 4), 3, 0) or tri.matches(("ge", 6), 6, 6):
        eps = 1 if b2 % 4 == 1 else -1
        return SpecialTwoVerdict(True, eps, tri)
    return SpecialTwoVerdict(False, None, tri)


def w2_quadratic_special(curve: Curve, t: int) -> Sign:
    """W_2 of the quadratic twist by squarefree t of a special-at-2 curve:
    epsilon * sgn(t) * (-1/|3 * b2 * t2|)."""
    if t == 0:
        raise DomainError("t must be nonzero")
    verdict = special_two_verdict(curve)
    if not verdict.is_special:
        raise MissingLocalDataError([2], "curve is not special at 2; a user local table is required")
    b2 = _valuation_unchecked(curve.b, 2)[1]
    t2 = _valuation_unchecked(t, 2)[1]
    return verdict.epsilon * sgn(t) * jacobi(-1, abs(3 * b2 * t2))


def table_one_epsilon(curve: Curve) -> Sign:
    """The constant in the normal form W_2 = eps' * sgn(t) * (-1/|t2|),
    related to the law's epsilon by eps' = epsilon * (-1/|3*b2|)."""
    verdict = special_two_verdict(curve)
    if not verdict.is_special:
        raise MissingLocalDataError([2])
    b2 = _valuation_unchecked(curve.b, 2)[1]
    return verdict.epsilon * jacobi(-1, abs(3 * b2))


def special_three_verdict(curve: Curve) -> bool:
    """Decide whether W_3 of every twist is (-1)**v3(t): true exactly when the
    reduced triplet of (v3(c4), v3(c6), v3(delta)) is (0,0,0), (2,3,6),
    (1,>=3,0) or (3,>=6,6), or is (1,2,0) or (3,5,6) with the prime-to-3 part
    of a = 1 mod 3."""
    if curve.kind != "quadratic":
        raise DomainError("special-at-3 law applies to quadratic families only (a*b != 0)")
    tri = _reduced_three_triplet(curve)
    if (tri.matches(0, 0, 0) or tri.matches(2, 3, 6)
            or tri.matches(1, ("ge", 3), 0) or tri.matches(3, ("ge", 6), 6)):
        return True
    if tri.matches(1, 2, 0) or tri.matches(3, 5, 6):
        a3 = _valuation_unchecked(curve.a, 3)[1]
        return a3 % 3 == 1
    return False


def w3_quadratic_special(curve: Curve, t: int) -> Sign:
    """W_3 of the quadratic twist by t of a special-at-3 curve: (-1)**v3(t)."""
    if t == 0:
        raise DomainError("t must be nonzero")
    if not special_three_verdict(curve):
        raise MissingLocalDataError([3], "curve is not special at 3; a user local table is required")
    v, _ = _valuation_unchecked(t, 3)
    return -1 if v % 2 else 1


# ---------------------------------------------------------------------------
# User-supplied local tables for quadratic bases outside the special lists.
#
# Plain-text format, one declaration per line:
#
#     version 1
#     # p, v_mod, unit_mod, v_class, unit_class -> sign
#     2, 2, 4, 0, 1 -> +1
#     ...
#
# For each listed prime p (2 and/or 3) all records must share (v_mod,
# unit_mod); unit_mod must be a power of p; and every pair (v_class in
# [0, v_mod), unit_class coprime to p mod unit_mod) must appear exactly once.
# The looked-up value is W_p of the twist by t, keyed on v_p(t) mod v_mod and
# the signed unit part of t mod unit_mod.


@dataclass(frozen=True)
class LocalTable:
    """Validated map (p, v_p(t) mod v_mod, unit mod unit_mod) -> sign."""

    moduli: dict[int, tuple[int, int]]          # p -> (v_mod, unit_mod)
    entries: dict[tuple[int, int, int], Sign]   # (p, v_class, unit_class) -> sign

    def covers(self, p: int) -> bool:
        return p in self.moduli

    def lookup(self, p: int, t: int) -> Sign:
        if p not in self.moduli:
            raise MissingLocalDataError([p], f"table has no records for p = {p}")
        v_mod, unit_mod = self.moduli[p]
        v, unit = valuation(t, p)
        return self.entries[(p, v % v_mod, unit % unit_mod)]


def _is_power_of(n: int, p: int) -> bool:
    if n < p:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def parse_local_table(text: str, source: str = "<table>") -> LocalTable:
    """Parse and validate the plain-text table format described above.

    Rejects unknown versions, malformed records, duplicates, inconsistent
    moduli, and (at load time, not lookup time) incomplete coverage.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TableFormatError(f"{source}: empty table")
    if lines[0].split() != ["version", "1"]:
        raise TableFormatError(f"{source}: first line must be 'version 1'")
    moduli: dict[int, tuple[int, int]] = {}
    entries: dict[tuple[int, int, int], Sign] = {}
    for ln in lines[1:]:
        if "->" not in ln:
            raise TableFormatError(f"{source}: record without '->': {ln!r}")
        left, _, right = ln.partition("->")
        try:
            p, v_mod, unit_mod, v_class, unit_class = (int(x) for x in left.split(","))
            sign = int(right)
        except ValueError as exc:
            raise TableFormatError(f"{source}: malformed record {ln!r}") from exc
        if p not in (2, 3):
            raise TableFormatError(f"{source}: table primes are 2 and 3, got {p}")
        if sign not in (1, -1):
            raise TableFormatError(f"{source}: sign must be +1 or -1, got {sign}")
        if v_mod < 1 or not _is_power_of(unit_mod, p):
            raise TableFormatError(f"{source}: need v_mod >= 1 and unit_mod a power of {p}")
        if p in moduli and moduli[p] != (v_mod, unit_mod):
            raise TableFormatError(f"{source}: inconsistent moduli for p = {p}")
        moduli[p] = (v_mod, unit_mod)
        key = (p, v_class % v_mod, unit_class % unit_mod)
        if key in entries:
            raise TableFormatError(f"{source}: duplicate record for {key}")
        entries[key] = sign
    for p, (v_mod, unit_mod) in moduli.items():
        for v_class in range(v_mod):
            for unit_class in range(unit_mod):
                if gcd(unit_class, p) != 1:
                    continue
                if (p, v_class, unit_class) not in entries:
                    raise IncompleteTableError(
                        f"{source}: missing class p={p}, v={v_class} mod {v_mod}, "
                        f"unit={unit_class} mod {unit_mod}")
    return LocalTable(moduli, entries)


def load_local_table(path: str) -> LocalTable:
    with open(path, encoding="utf-8") as fh:
        return parse_local_table(fh.read(), source=path)


def quadratic_w2(curve: Curve, t: int, table: LocalTable | None = None) -> LocalRootResult:
    """W_2 of the twist by squarefree t: special law when the curve is in the
    special-at-2 list, otherwise a user table, otherwise an error naming the
    missing place."""
    if special_two_verdict(curve).is_special:
        return LocalRootResult(2, w2_quadratic_special(curve, t), RULE_QUAD_SPECIAL_2)
    if table is not None and table.covers(2):
        return LocalRootResult(2, table.lookup(2, t), RULE_USER_TABLE)
    raise MissingLocalDataError([2])


def quadratic_w3(curve: Curve, t: int, table: LocalTable | None = None) -> LocalRootResult:
    """W_3 of the twist by squarefree t, mirroring quadratic_w2."""
    if special_three_verdict(curve):
        return LocalRootResult(3, w3_quadratic_special(curve, t), RULE_QUAD_SPECIAL_3)
    if table is not None and table.covers(3):
        return LocalRootResult(3, table.lookup(3, t), RULE_USER_TABLE)
    raise MissingLocalDataError([3])
