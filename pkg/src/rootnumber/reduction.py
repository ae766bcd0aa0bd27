"""Reduction types of twisted fibers.

Kodaira classification at primes p >= 5 straight off the valuations of
(c4, c6, discriminant), the twist monodromy for the three twist kinds, and
the (4, 6, 12)-reduced minimal triplet used to key the case laws at p = 2, 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf

from .arith import is_prime, valuation, _valuation_unchecked
from .errors import DomainError, NonMinimalModelError


@dataclass(frozen=True)
class Curve:
    """Short Weierstrass curve y^2 = x^3 + a*x + b over Q.

    The twist family kind is derivable: quadratic when a*b != 0, quartic when
    b = 0, sextic when a = 0.
    """

    a: int
    b: int

    def __post_init__(self):
        if self.discriminant == 0:
            raise DomainError(f"singular curve: a={self.a}, b={self.b}")

    @property
    def c4(self) -> int:
        return -48 * self.a

    @property
    def c6(self) -> int:
        return -864 * self.b

    @property
    def discriminant(self) -> int:
        return -16 * (4 * self.a ** 3 + 27 * self.b ** 2)

    @property
    def kind(self) -> str:
        if self.a == 0:
            return "sextic"
        if self.b == 0:
            return "quartic"
        return "quadratic"

    def __str__(self) -> str:
        return f"y^2 = x^3 + {self.a}*x + {self.b}"


_SERIES = ("I0", "Im", "II", "III", "IV")


@dataclass(frozen=True)
class KodairaType:
    series: str
    m: int = 0
    starred: bool = False

    def __post_init__(self):
        if self.series not in _SERIES:
            raise DomainError(f"unknown Kodaira series {self.series!r}")
        if (self.series == "Im") != (self.m >= 1):
            raise DomainError("m >= 1 exactly for the I_m series")

    @property
    def symbol(self) -> str:
        base = f"I{self.m}" if self.series == "Im" else self.series
        return base + ("*" if self.starred else "")

    @property
    def is_good(self) -> bool:
        return self.series == "I0" and not self.starred

    @property
    def is_multiplicative(self) -> bool:
        return self.series == "Im" and not self.starred

    @property
    def is_additive(self) -> bool:
        return not (self.is_good or self.is_multiplicative)

    @property
    def is_potentially_multiplicative(self) -> bool:
        return self.series == "Im"

    def __str__(self) -> str:
        return self.symbol


I0 = KodairaType("I0")
II = KodairaType("II")
III = KodairaType("III")
IV = KodairaType("IV")
I0_STAR = KodairaType("I0", starred=True)
II_STAR = KodairaType("II", starred=True)
III_STAR = KodairaType("III", starred=True)
IV_STAR = KodairaType("IV", starred=True)


def Im(m: int) -> KodairaType:
    return KodairaType("Im", m)


def Im_star(m: int) -> KodairaType:
    return KodairaType("Im", m, starred=True)


def quadratic_twist_pair(t: KodairaType) -> KodairaType:
    """Type swap under a quadratic twist of odd local valuation:
    I0 <-> I0*, I_m <-> I_m* (same m), II <-> IV*, IV <-> II*, III <-> III*.
    """
    if t.series in ("I0", "Im", "III"):
        return KodairaType(t.series, t.m, not t.starred)
    other = {"II": "IV", "IV": "II"}[t.series]
    return KodairaType(other, 0, not t.starred)


@dataclass(frozen=True)
class Triplet:
    """Valuations (v(c4), v(c6), v(delta)) reduced by multiples of (4, 6, 12)
    to the smallest nonnegative representative.  Entries of +infinity stand
    for the valuation of 0 (c4 = 0 or c6 = 0)."""

    alpha: int | float
    beta: int | float
    delta: int

    def matches(self, alpha, beta, delta) -> bool:
        """Compare against a pattern; any component may be ('ge', k)."""
        for mine, want in ((self.alpha, alpha), (self.beta, beta), (self.delta, delta)):
            if isinstance(want, tuple):
                if mine < want[1]:
                    return False
            elif mine != want:
                return False
        return True


def valuation_or_inf(n: int, p: int) -> int | float:
    """p-adic valuation with v(0) = +infinity."""
    if n == 0:
        return inf
    return valuation(n, p)[0]


def minimal_triplet(c4val: int | float, c6val: int | float, deltaval: int) -> Triplet:
    """Smallest nonnegative (v(c4), v(c6), v(delta)) + k*(4, 6, 12).

    >>> minimal_triplet(8, 11, 12)
    Triplet(alpha=4, beta=5, delta=0)
    """
    for v in (c4val, c6val, deltaval):
        if v < 0:
            raise DomainError("valuations must be nonnegative")
    if deltaval == inf:
        raise DomainError("the discriminant of a nonsingular curve has finite valuation")
    k = min(c4val // 4, c6val // 6, deltaval // 12)
    if k == inf:  # pragma: no cover - excluded by the delta check
        raise DomainError("all entries infinite")
    k = int(k)
    alpha = c4val - 4 * k if c4val != inf else inf
    beta = c6val - 6 * k if c6val != inf else inf
    return Triplet(alpha, beta, int(deltaval - 12 * k))


def classify_triplet(alpha: int | float, beta: int | float, delta: int) -> KodairaType:
    """Kodaira type at p >= 5 from the valuations of a p-minimal model."""
    if alpha >= 4 and beta >= 6 and delta >= 12:
        raise NonMinimalModelError(f"triplet ({alpha}, {beta}, {delta}) is reducible")
    if delta == 0:
        return I0
    if alpha == 0:
        return Im(delta)
    if delta == 2:
        return II
    if delta == 3:
        return III
    if delta == 4:
        return IV
    if delta == 6:
        return I0_STAR
    if alpha == 2 and delta >= 7:
        return Im_star(delta - 6)
    if delta == 8:
        return IV_STAR
    if delta == 9:
        return III_STAR
    if delta == 10:
        return II_STAR
    raise DomainError(f"({alpha}, {beta}, {delta}) is not a valid minimal triplet at p >= 5")


def base_reduction(curve: Curve, p: int) -> KodairaType:
    """Reduction type of the given model at a prime p >= 5.

    Demands p-minimality and refuses otherwise rather than silently
    minimalizing, so the provenance of every triplet stays explicit.
    """
    if not is_prime(p) or p < 5:
        raise DomainError(f"p must be a prime >= 5, got {p}")
    alpha = valuation_or_inf(curve.c4, p)
    beta = valuation_or_inf(curve.c6, p)
    delta = valuation(curve.discriminant, p)[0]
    if alpha >= 4 and beta >= 6 and delta >= 12:
        raise NonMinimalModelError(f"{curve} is not minimal at {p}")
    return classify_triplet(alpha, beta, delta)


_QUARTIC_CYCLE = (I0, III, I0_STAR, III_STAR)
_SEXTIC_CYCLE = (I0, II, IV, I0_STAR, IV_STAR, II_STAR)


def kodaira_at_large_prime(curve: Curve, t: int, p: int,
                           base_type: KodairaType | None = None) -> KodairaType:
    """Reduction type of the twist of `curve` by t at a prime p >= 5.

    Quartic families cycle through (I0, III, I0*, III*) with v_p(a*t) mod 4,
    sextic through (I0, II, IV, I0*, IV*, II*) with v_p(b*t) mod 6.  For a
    quadratic family the type is the base type when v_p(t) is even and its
    quadratic-twist partner when odd; base_type may be supplied (e.g. by
    base_reduction) or is computed here.
    """
    if not is_prime(p) or p < 5:
        raise DomainError(f"p must be a prime >= 5, got {p} (use the triplet path at 2, 3)")
    if t == 0:
        raise DomainError("t must be nonzero")
    kind = curve.kind
    if kind == "quartic":
        v, _ = _valuation_unchecked(curve.a * t, p)
        return _QUARTIC_CYCLE[v % 4]
    if kind == "sextic":
        v, _ = _valuation_unchecked(curve.b * t, p)
        return _SEXTIC_CYCLE[v % 6]
    if base_type is None:
        base_type = base_reduction(curve, p)
    v, _ = _valuation_unchecked(t, p)
    return base_type if v % 2 == 0 else quadratic_twist_pair(base_type)
