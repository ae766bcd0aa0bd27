"""Periodicity profiling, the sign-constancy criterion for quadratic twist
families, sign scans over t ranges, and closed-form/oracle audits.

Profiles partition the scanned twists by (sign of t, t mod M, square-support
residue) and record one root-number value per class.  A class that exhibits
both signs is marked "mixed": that is a first-class falsification finding,
reported loudly, never an exception.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import prod

from .arith import (DEFAULT_FACTOR_EFFORT, Factored, Sign, factor,
                    factored_range, is_prime, jacobi, kth_powerfree_part,
                    merge_factors)
from .errors import DomainError, MissingLocalDataError, UnfactoredCofactorError
from .formulas import (_coeff_factored, _quadratic_base_data,
                       _quartic_oracle_total, _quartic_total,
                       _sextic_oracle_total, _sextic_total, _value_of,
                       oracle_root_number, root_number_quadratic)
from .local import (LocalTable, quadratic_w2, quadratic_w3,
                    special_three_verdict, special_two_verdict,
                    w2_quadratic_special, w3_quadratic_special)
from .reduction import Curve

SEXTIC_PROFILE_MODULUS = 2 ** 7 * 3 ** 7     # proof modulus; dominates 2**6 * 3**6
SEXTIC_SQUARE_MODULUS = 3
QUARTIC_PROFILE_MODULUS = 2 ** 6 * 3 ** 4    # proof modulus; dominates 2**4
QUARTIC_SQUARE_MODULUS = 4

# Declared valuation-period exponents of the special laws at 2 and 3 for
# squarefree twists: W_2 needs (v2(t), odd part mod 4) = t mod 8 and the sign;
# W_3 needs v3(t) = t mod 9.
_SPECIAL_PERIOD_EXPONENT = {2: 3, 3: 2}

MIXED = "mixed"
UNDETERMINED = "undetermined"


def _kind_power(kind: str) -> int:
    return {"quadratic": 2, "quartic": 4, "sextic": 6}[kind]


@dataclass
class PeriodicityProfile:
    """Observed root-number value per (sign, t mod modulus, square-support
    residue) class.  conflicts holds a pair of witnesses for mixed classes."""

    kind: str
    modulus: int
    square_modulus: int
    classes: dict[tuple[int, int, int], int | str] = field(default_factory=dict)
    witnesses: dict[tuple[int, int, int], int] = field(default_factory=dict)
    conflicts: dict[tuple[int, int, int], tuple[int, int]] = field(default_factory=dict)
    scanned: int = 0

    def record(self, t: int, value: int | str) -> None:
        key = (1 if t > 0 else -1, t % self.modulus, self._sq_residue(t))
        self.scanned += 1
        seen = self.classes.get(key)
        if seen is None:
            self.classes[key] = value
            self.witnesses[key] = t
        elif seen != value and seen != MIXED:
            self.conflicts[key] = (self.witnesses[key], t)
            self.classes[key] = MIXED

    def _sq_residue(self, t: int) -> int:
        if self.square_modulus == 1:
            return 0
        r = 1
        for p, e in factor(t).factors:
            if p >= 5 and e % 2 == 0:
                r = r * p % self.square_modulus
        return r

    @property
    def mixed_classes(self) -> list[tuple[int, int, int]]:
        return sorted(k for k, v in self.classes.items() if v == MIXED)

    @property
    def undetermined_classes(self) -> list[tuple[int, int, int]]:
        return sorted(k for k, v in self.classes.items() if v == UNDETERMINED)


def _iter_powerfree(bound: int, k: int):
    """(n, factors) for every k-powerfree n in 1..bound, via one sieve pass."""
    table = factored_range(bound)
    for n in range(1, bound + 1):
        fac = table[n]
        if any(e >= k for _, e in fac):
            continue
        yield n, fac


def _effective_total(coeff_fac: Factored, sign: int, fac, k: int, total_fn) -> int:
    """Closed-form total for the twist with parameter coeff * (sign * n)."""
    merged = merge_factors(coeff_fac, Factored(sign, fac))
    s_sign, reduced, _ = kth_powerfree_part(merged, k)
    return total_fn(_value_of(s_sign, reduced), reduced)


def _sq_residue_from_factors(fac, smod: int) -> int:
    r = 1
    for p, e in fac:
        if p >= 5 and e % 2 == 0:
            r = r * p % smod
    return r


def _profile_family(coeff: int, scan_bound: int, k: int, modulus: int, smod: int,
                    total_fn, kind: str, t_values, effort: int) -> PeriodicityProfile:
    if coeff == 0:
        raise DomainError("family coefficient must be nonzero")
    profile = PeriodicityProfile(kind, modulus, smod)
    coeff_fac = _coeff_factored(coeff, effort)
    if t_values is not None:
        for t in t_values:
            if t == 0:
                raise DomainError("t must be nonzero")
            fac = factor(t, effort)
            merged = merge_factors(coeff_fac, fac)
            s_sign, reduced, _ = kth_powerfree_part(merged, k)
            profile.record(t, total_fn(_value_of(s_sign, reduced), reduced))
        return profile
    if scan_bound < 3 * modulus:
        raise DomainError(f"scan bound {scan_bound} does not cover three full periods "
                          f"of modulus {modulus}")
    plain = coeff_fac.factors == ()  # |coeff| == 1: no merge needed
    for n, fac in _iter_powerfree(scan_bound, k):
        sq_res = _sq_residue_from_factors(fac, smod) if smod > 1 else 0
        for sign in (1, -1):
            if plain:
                w = total_fn(coeff_fac.sign * sign * n, fac)
            else:
                w = _effective_total(coeff_fac, sign, fac, k, total_fn)
            key = (sign, (sign * n) % modulus, sq_res)
            profile.scanned += 1
            seen = profile.classes.get(key)
            if seen is None:
                profile.classes[key] = w
                profile.witnesses[key] = sign * n
            elif seen != w and seen != MIXED:
                profile.conflicts[key] = (profile.witnesses[key], sign * n)
                profile.classes[key] = MIXED
    return profile


def profile_sextic(b: int, scan_bound: int, *, t_values=None,
                   effort: int = DEFAULT_FACTOR_EFFORT) -> PeriodicityProfile:
    """Square-periodicity profile of t -> W of y^2 = x^3 + b*t over sixth-
    powerfree t, classes keyed by (sign, t mod 2^7*3^7, square support mod 3).

    Without explicit t_values the scan covers both signs up to scan_bound,
    which must span at least three full periods.
    """
    return _profile_family(b, scan_bound, 6, SEXTIC_PROFILE_MODULUS,
                           SEXTIC_SQUARE_MODULUS, _sextic_total, "sextic",
                           t_values, effort)


def profile_quartic(a: int, scan_bound: int, *, t_values=None,
                    effort: int = DEFAULT_FACTOR_EFFORT) -> PeriodicityProfile:
    """Square-periodicity profile of t -> W of y^2 = x^3 + a*t*x over fourth-
    powerfree t, classes keyed by (sign, t mod 2^6*3^4, square support mod 4)."""
    return _profile_family(a, scan_bound, 4, QUARTIC_PROFILE_MODULUS,
                           QUARTIC_SQUARE_MODULUS, _quartic_total, "quartic",
                           t_values, effort)


def quadratic_profile_modulus(curve: Curve, table: LocalTable | None = None, *,
                              effort: int = DEFAULT_FACTOR_EFFORT) -> int:
    """Period modulus for squarefree quadratic twists: 2^a2 * 3^a3 times p^2
    for every prime p >= 5 of bad reduction."""
    _, types = _quadratic_base_data(curve, effort)
    m = 1
    for p in (2, 3):
        m *= p ** _declared_exponent(curve, p, table)
    return m * prod(p * p for p, _ in types)


def _declared_exponent(curve: Curve, p: int, table: LocalTable | None) -> int:
    special = special_two_verdict(curve).is_special if p == 2 else special_three_verdict(curve)
    if special:
        return _SPECIAL_PERIOD_EXPONENT[p]
    if table is not None and table.covers(p):
        _, unit_mod = table.moduli[p]
        j = 0
        while unit_mod % p == 0:
            unit_mod //= p
            j += 1
        return 1 + j
    return _SPECIAL_PERIOD_EXPONENT[p]  # fallback for undetermined profiles


def profile_quadratic(curve: Curve, scan_bound: int,
                      table: LocalTable | None = None, *,
                      effort: int = DEFAULT_FACTOR_EFFORT) -> PeriodicityProfile:
    """Plain periodicity profile (square modulus 1) of squarefree quadratic
    twists.  When W_2 or W_3 is unavailable every scanned class is flagged
    undetermined rather than guessed."""
    if curve.kind != "quadratic":
        raise DomainError("quadratic profile needs a quadratic family (a*b != 0)")
    modulus = quadratic_profile_modulus(curve, table, effort=effort)
    profile = PeriodicityProfile("quadratic", modulus, 1)
    try:
        root_number_quadratic(curve, 1, table, effort=effort)
        determined = True
    except MissingLocalDataError:
        determined = False
    for n, _fac in _iter_powerfree(scan_bound, 2):
        for t in (n, -n):
            if determined:
                profile.record(t, root_number_quadratic(curve, t, table, effort=effort).total)
            else:
                profile.record(t, UNDETERMINED)
    return profile


def search_minimal_modulus(profile: PeriodicityProfile) -> list[tuple[int, int]]:
    """Minimal (modulus, square modulus) pairs that still separate the
    scanned classes, among divisors 2^i * 3^j of the profile modulus and
    divisors of the square modulus.  Only meaningful for quartic/sextic
    profiles; refuses mixed ones."""
    if profile.kind == "quadratic":
        raise DomainError("modulus search applies to the square-periodic families")
    if profile.mixed_classes:
        raise DomainError("profile already has mixed classes; no valid modulus exists")
    m = profile.modulus
    i_max = j_max = 0
    while m % 2 == 0:
        m //= 2
        i_max += 1
    while m % 3 == 0:
        m //= 3
        j_max += 1
    sq_divs = [d for d in range(1, profile.square_modulus + 1)
               if profile.square_modulus % d == 0]
    items = list(profile.classes.items())

    def valid(mod: int, sd: int) -> bool:
        seen: dict[tuple[int, int, int], int | str] = {}
        for (sign, r, sq), v in items:
            key = (sign, r % mod, sq % sd)
            prev = seen.get(key)
            if prev is None:
                seen[key] = v
            elif prev != v:
                return False
        return True

    valid_pairs = set()
    for sd in sq_divs:
        for i in range(i_max + 1):
            # validity is monotone in j: binary-search the smallest valid j
            lo, hi = 0, j_max + 1
            while lo < hi:
                mid = (lo + hi) // 2
                if valid(2 ** i * 3 ** mid, sd):
                    hi = mid
                else:
                    lo = mid + 1
            if lo <= j_max:
                valid_pairs.add((2 ** i * 3 ** lo, sd))
    minimal = []
    for mod, sd in sorted(valid_pairs):
        if not any((mod2, sd2) != (mod, sd) and mod % mod2 == 0 and sd % sd2 == 0
                   for mod2, sd2 in valid_pairs):
            minimal.append((mod, sd))
    return sorted(minimal)


# ---------------------------------------------------------------------------
# The constant-sign criterion for quadratic twist families.

@dataclass
class ConstancyVerdict:
    """Diagnosis of whether W of the quadratic twist by squarefree t depends
    on t only through its sign: requires (a) no multiplicative reduction at
    any prime >= 5, (b) the special W_2 law, (c) the special W_3 law, and
    (d) at every additive prime p >= 5: III/III* only with p = 1 mod 4,
    II/II*/IV/IV* only with p = 1 mod 6, and no I_m* place at all."""

    no_multiplicative_large: bool
    special_at_two: bool
    special_at_three: bool
    additive_congruences: bool
    overall: str  # "sign-determined" | "not-sign-determined" | "undetermined"
    prime_diagnostics: dict[int, str] = field(default_factory=dict)

    @property
    def sign_determined(self) -> bool:
        return self.overall == "sign-determined"


def constancy_criterion(curve: Curve, *, effort: int = DEFAULT_FACTOR_EFFORT) -> ConstancyVerdict:
    if curve.kind != "quadratic":
        raise DomainError("constancy criterion applies to quadratic families (a*b != 0)")
    try:
        _, types = _quadratic_base_data(curve, effort)
    except UnfactoredCofactorError as exc:
        return ConstancyVerdict(False, False, False, False, "undetermined",
                                {0: f"discriminant not factored: {exc}"})
    diagnostics: dict[int, str] = {}
    no_mult = True
    additive_ok = True
    for p, ktype in types:
        if ktype.is_multiplicative:
            no_mult = False
            diagnostics[p] = f"type {ktype}: multiplicative reduction at {p}"
        elif ktype.series == "III":
            ok = p % 4 == 1
            additive_ok &= ok
            diagnostics[p] = f"type {ktype}: {p} = {p % 4} mod 4 ({'ok' if ok else 'needs 1 mod 4'})"
        elif ktype.series in ("II", "IV"):
            ok = p % 6 == 1
            additive_ok &= ok
            diagnostics[p] = f"type {ktype}: {p} = {p % 6} mod 6 ({'ok' if ok else 'needs 1 mod 6'})"
        elif ktype.is_potentially_multiplicative:  # I_m*
            additive_ok = False
            diagnostics[p] = f"type {ktype}: additive potentially multiplicative at {p}"
        else:  # I0*
            diagnostics[p] = f"type {ktype}: ok"
    sp2 = special_two_verdict(curve).is_special
    sp3 = special_three_verdict(curve)
    overall = ("sign-determined"
               if no_mult and sp2 and sp3 and additive_ok
               else "not-sign-determined")
    return ConstancyVerdict(no_mult, sp2, sp3, additive_ok, overall, diagnostics)


def local_period(curve: Curve, p: int, table: LocalTable | None = None, *,
                 refine: bool = True,
                 effort: int = DEFAULT_FACTOR_EFFORT) -> int:
    """A modulus p^a on which W_p of the quadratic twist by squarefree t is
    constant per congruence class of fixed sign.

    p >= 5 always admits p^2 (one valuation step plus one unit residue).  At
    p = 2, 3 the declared modulus comes from the special-law dependencies or
    the table's moduli; with refine=True the smallest exponent that survives
    an exhaustive check over several declared periods is returned instead.
    """
    if curve.kind != "quadratic":
        raise DomainError("local periods are defined for quadratic families here")
    if p not in (2, 3):
        if not is_prime(p) or p < 5:
            raise DomainError(f"{p} is not prime")
        return p * p
    special = special_two_verdict(curve).is_special if p == 2 else special_three_verdict(curve)
    if not special and (table is None or not table.covers(p)):
        raise MissingLocalDataError([p])
    exponent = _declared_exponent(curve, p, table)
    declared = p ** exponent
    if not refine:
        return declared
    local = quadratic_w2 if p == 2 else quadratic_w3

    window = []
    for n in range(1, 3 * declared + 1):
        if all(e == 1 for _, e in factor(n, effort).factors):
            window.extend((n, -n))
    for k in range(exponent + 1):
        mod = p ** k
        groups: dict[tuple[int, int], int] = {}
        consistent = True
        for t in window:
            key = (1 if t > 0 else -1, t % mod)
            w = local(curve, t, table).sign
            if groups.setdefault(key, w) != w:
                consistent = False
                break
        if consistent:
            return mod
    return declared


# ---------------------------------------------------------------------------
# Sign scans.

@dataclass
class ScanResult:
    plus_count: int
    minus_count: int
    plus_samples: tuple[int, ...]
    minus_samples: tuple[int, ...]
    scanned: int


def _family_total(curve: Curve, t: int, fac, table, effort) -> Sign:
    kind = curve.kind
    if kind == "sextic":
        coeff_fac = _coeff_factored(curve.b, effort)
        return _effective_total(coeff_fac, 1 if t > 0 else -1, fac, 6, _sextic_total)
    if kind == "quartic":
        coeff_fac = _coeff_factored(curve.a, effort)
        return _effective_total(coeff_fac, 1 if t > 0 else -1, fac, 4, _quartic_total)
    return root_number_quadratic(curve, t, table, effort=effort).total


def scan_signs(curve: Curve, lo: int, hi: int, table: LocalTable | None = None, *,
               sample_limit: int = 5,
               effort: int = DEFAULT_FACTOR_EFFORT) -> ScanResult:
    """Count W = +1 and W = -1 among the powerfree t in [lo, hi] (powerfree
    for the family's kind; 0 skipped), with a few witnesses per sign.
    Deterministic given the range."""
    if lo > hi:
        raise DomainError(f"empty range [{lo}, {hi}]")
    k = _kind_power(curve.kind)
    counts = {1: 0, -1: 0}
    samples: dict[int, list[int]] = {1: [], -1: []}
    scanned = 0
    for t in range(lo, hi + 1):
        if t == 0:
            continue
        fac = factor(t, effort)
        if any(e >= k for _, e in fac.factors):
            continue
        scanned += 1
        w = _family_total(curve, t, fac.factors, table, effort)
        counts[w] += 1
        if len(samples[w]) < sample_limit:
            samples[w].append(t)
    return ScanResult(counts[1], counts[-1], tuple(samples[1]), tuple(samples[-1]), scanned)


def sign_witnesses(curve: Curve, bound: int, table: LocalTable | None = None, *,
                   effort: int = DEFAULT_FACTOR_EFFORT) -> dict[int, int | None]:
    """First powerfree twist per sign, scanning 1, -1, 2, -2, ... up to bound;
    stops as soon as both signs are seen."""
    k = _kind_power(curve.kind)
    found: dict[int, int | None] = {1: None, -1: None}
    for n in range(1, bound + 1):
        fac = factor(n, effort)
        if any(e >= k for _, e in fac.factors):
            continue
        for t in (n, -n):
            w = _family_total(curve, t, fac.factors, table, effort)
            if found[w] is None:
                found[w] = t
            if found[1] is not None and found[-1] is not None:
                return found
    return found


def opposite_sign_witness(curve: Curve, table: LocalTable | None = None, *,
                          effort: int = DEFAULT_FACTOR_EFFORT,
                          attempts: int = 200) -> int:
    """A positive squarefree t with W(E_t) = -W(E_1), assembled by CRT when
    the base has a multiplicative place p >= 5: t is put in the unit class of
    1 at 2 and 3 (so the local terms there match the untwisted fiber), made a
    non-square modulo the multiplicative primes, and kept coprime to the
    remaining bad primes."""
    if curve.kind != "quadratic":
        raise DomainError("witness construction applies to quadratic families")
    _, types = _quadratic_base_data(curve, effort)
    mult = [p for p, kt in types if kt.is_multiplicative]
    if not mult:
        raise DomainError("no multiplicative place p >= 5; this mechanism does not apply")
    residues: list[tuple[int, int]] = []
    for p in (2, 3):
        m = p ** _declared_exponent(curve, p, table)
        residues.append((1, m))
    p0 = mult[0]
    g = next(u for u in range(2, p0) if jacobi(u, p0) == -1)
    residues.append((g, p0))
    for p, _kt in types:
        if p != p0:
            residues.append((1, p))
    r, m = 0, 1
    for a, n in residues:
        inv = pow(m, -1, n)  # moduli pairwise coprime
        r = r + m * ((a - r) * inv % n)
        m *= n
    r %= m
    if r == 0:
        r = m
    for k in range(attempts):
        t = r + k * m
        fac = factor(t, effort)
        if all(e == 1 for _, e in fac.factors):
            return t
    raise DomainError(f"no squarefree witness among {attempts} candidates "
                      f"in the class {r} mod {m}")


# ---------------------------------------------------------------------------
# Audits.

@dataclass
class AuditResult:
    kind: str
    bound: int
    checked: int
    mismatches: tuple[tuple[int, int, int], ...]  # (t, closed-form W, oracle W)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def audit_family(curve: Curve, bound: int, table: LocalTable | None = None, *,
                 effort: int = DEFAULT_FACTOR_EFFORT) -> AuditResult:
    """Compare the closed-form root number against the per-prime oracle for
    every powerfree |t| <= bound (both signs)."""
    kind = curve.kind
    k = _kind_power(kind)
    mismatches = []
    checked = 0
    if kind == "quadratic":
        for n, fac in _iter_powerfree(bound, 2):
            for t in (n, -n):
                checked += 1
                closed = root_number_quadratic(curve, t, table, effort=effort).total
                oracle = oracle_root_number(curve, t, table, effort=effort)
                if closed != oracle:
                    mismatches.append((t, closed, oracle))
        return AuditResult(kind, bound, checked, tuple(mismatches))
    coeff = curve.b if kind == "sextic" else curve.a
    coeff_fac = _coeff_factored(coeff, effort)
    total_fn = _sextic_total if kind == "sextic" else _quartic_total
    oracle_fn = _sextic_oracle_total if kind == "sextic" else _quartic_oracle_total
    plain = coeff_fac.factors == ()
    for n, fac in _iter_powerfree(bound, k):
        for sign in (1, -1):
            checked += 1
            if plain:
                s = coeff_fac.sign * sign * n
                reduced = fac
            else:
                merged = merge_factors(coeff_fac, Factored(sign, fac))
                s_sign, reduced, _ = kth_powerfree_part(merged, k)
                s = _value_of(s_sign, reduced)
            closed = total_fn(s, reduced)
            oracle = oracle_fn(s, reduced)
            if closed != oracle:
                mismatches.append((sign * n, closed, oracle))
    return AuditResult(kind, bound, checked, tuple(mismatches))


def audit_table_against_special(curve: Curve, table: LocalTable, *,
                                count: int = 100, seed: int = 0,
                                bound: int = 10 ** 4) -> list[tuple[int, int, int, int]]:
    """Consistency audit: where the curve is special at p and the table also
    covers p, both must agree.  Returns (p, t, special sign, table sign)
    disagreements over `count` random squarefree t."""
    rng = random.Random(seed)
    places = []
    if special_two_verdict(curve).is_special and table.covers(2):
        places.append(2)
    if special_three_verdict(curve) and table.covers(3):
        places.append(3)
    disagreements = []
    tried = 0
    while tried < count:
        t = rng.randint(1, bound) * rng.choice((1, -1))
        if any(e >= 2 for _, e in factor(t).factors):
            continue
        tried += 1
        for p in places:
            special = (w2_quadratic_special(curve, t) if p == 2
                       else w3_quadratic_special(curve, t))
            looked = table.lookup(p, t)
            if special != looked:
                disagreements.append((p, t, special, looked))
    return disagreements
