"""Self-similar spectral sets on [0, inf) and their scaling-invariant measures.

A spectral set is the closure of finitely many scaling orbits
``{q**k * x : k in Z}`` together with 0; a measure on it is invariant under
multiplication by q exactly when its atom weights are constant along each
orbit.  Such a measure is determined by its restriction to the fundamental
interval (q, 1] plus a point mass at 0, and that is how it is stored here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigurationError, DomainError
from .scalars import format_rational, parse_rational

INFINITE = float("inf")


@dataclass(frozen=True)
class DeformationParameter:
    """Scaling ratio q with 0 < q <= 1; q = 1 only for the classical limit."""

    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if not 0 < self.q <= 1:
            raise DomainError(f"q must lie in (0, 1], got {self.q}")

    @property
    def classical(self) -> bool:
        return self.q == 1


def as_ratio(q) -> Fraction:
    """Validate and return a strict deformation ratio q in (0, 1)."""
    qq = DeformationParameter(parse_rational(q)).q
    if qq == 1:
        raise DomainError("q = 1 is admitted only in classical-limit mode")
    return qq


@dataclass(frozen=True)
class Interval:
    """Interval in [0, inf); ``upper=None`` means unbounded above."""

    lower: Fraction
    upper: Fraction | None
    lower_closed: bool = False
    upper_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lower", Fraction(self.lower))
        if self.upper is not None:
            object.__setattr__(self, "upper", Fraction(self.upper))
        if self.lower < 0:
            raise DomainError("interval must sit in [0, inf)")
        if self.upper is None:
            if self.upper_closed:
                raise DomainError("an unbounded interval cannot be closed above")
        elif self.upper < self.lower:
            raise DomainError("interval endpoints out of order")

    @classmethod
    def open_closed(cls, lower, upper) -> "Interval":
        return cls(Fraction(lower), Fraction(upper), False, True)

    @classmethod
    def point(cls, value) -> "Interval":
        return cls(Fraction(value), Fraction(value), True, True)

    @property
    def is_empty(self) -> bool:
        if self.upper is None:
            return False
        if self.lower < self.upper:
            return False
        return not (self.lower_closed and self.upper_closed)

    def contains(self, t: Fraction) -> bool:
        t = Fraction(t)
        if t < self.lower or (t == self.lower and not self.lower_closed):
            return False
        if self.upper is None:
            return True
        if t > self.upper or (t == self.upper and not self.upper_closed):
            return False
        return True

    def scaled(self, c: Fraction) -> "Interval":
        """Image {c * t : t in self} for rational c > 0."""
        c = Fraction(c)
        if c <= 0:
            raise DomainError("scale factor must be positive")
        upper = None if self.upper is None else c * self.upper
        return Interval(c * self.lower, upper, self.lower_closed, self.upper_closed)

    def __str__(self):
        left = "[" if self.lower_closed else "("
        right = "]" if self.upper_closed else ")"
        hi = "inf" if self.upper is None else format_rational(self.upper)
        return f"{left}{format_rational(self.lower)}, {hi}{right}"


def _flog(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def scaling_exponent(q: Fraction, ratio: Fraction) -> int | None:
    """Integer k with q**k == ratio, if one exists."""
    if ratio <= 0:
        return None
    if ratio == 1:
        return 0
    guess = round(_flog(ratio) / _flog(q))
    for delta in range(4):
        for cand in (guess - delta, guess + delta):
            if q ** cand == ratio:
                return cand
    return None


def _first_k_below(q: Fraction, x: Fraction, bound: Fraction, closed: bool) -> int:
    """Smallest k with q**k * x <= bound (strict if not closed); needs bound > 0."""
    def ok(k: int) -> bool:
        v = q ** k * x
        return v <= bound if closed else v < bound

    k = round((_flog(bound) - _flog(x)) / _flog(q))
    while ok(k):
        k -= 1
    while not ok(k):
        k += 1
    return k


def _last_k_above(q: Fraction, x: Fraction, bound: Fraction, closed: bool) -> int:
    """Largest k with q**k * x >= bound (strict if not closed); needs bound > 0."""
    def ok(k: int) -> bool:
        v = q ** k * x
        return v >= bound if closed else v > bound

    k = round((_flog(bound) - _flog(x)) / _flog(q))
    while ok(k):
        k += 1
    while not ok(k):
        k -= 1
    return k


def orbit_exponents(q: Fraction, x: Fraction, interval: Interval) -> range:
    """All integers k with q**k * x inside the interval (must be finite)."""
    if interval.is_empty or interval.upper is None:
        raise DomainError("orbit enumeration needs a bounded nonempty interval")
    if interval.upper <= 0:
        return range(0)
    k_lo = _first_k_below(q, x, interval.upper, interval.upper_closed)
    if interval.lower == 0:
        raise DomainError("orbit meets every neighbourhood of 0")
    k_hi = _last_k_above(q, x, interval.lower, interval.lower_closed)
    return range(k_lo, k_hi + 1)


@dataclass(frozen=True)
class SpectralSet:
    """Union of scaling orbits of finitely many generators in (q, 1], plus 0."""

    q: Fraction
    generators: tuple[Fraction, ...]
    includes_zero: bool = True

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        gens = tuple(sorted(Fraction(g) for g in self.generators))
        object.__setattr__(self, "generators", gens)
        if not 0 < self.q < 1:
            raise DomainError(f"spectral sets need q in (0, 1), got {self.q}")
        for g in gens:
            if not self.q < g <= 1:
                raise DomainError(f"generator {g} outside the fundamental interval ({self.q}, 1]")
        if len(set(gens)) != len(gens):
            raise DomainError("duplicate generators")
        if gens and not self.includes_zero:
            raise DomainError("0 is a limit of every scaling orbit; includes_zero is forced")

    @property
    def is_zero_only(self) -> bool:
        return not self.generators and self.includes_zero

    def to_json(self) -> dict:
        return {
            "q": format_rational(self.q),
            "generators": [format_rational(g) for g in self.generators],
            "includes_zero": self.includes_zero,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SpectralSet":
        return cls(parse_rational(data["q"]),
                   tuple(parse_rational(g) for g in data["generators"]),
                   bool(data.get("includes_zero", True)))


def make_spectral_set(q, generators) -> SpectralSet:
    """Build the closed scaling-invariant set generated by points of (q, 1]."""
    qq = as_ratio(q)
    return SpectralSet(qq, tuple(parse_rational(g) for g in generators), True)


def contains(X: SpectralSet, t) -> bool:
    """Exact membership of rational t >= 0 in the spectral set."""
    t = parse_rational(t)
    if t < 0:
        raise DomainError("membership is defined on [0, inf)")
    if t == 0:
        return X.includes_zero
    return any(scaling_exponent(X.q, t / g) is not None for g in X.generators)


@dataclass(frozen=True)
class QInvariantMeasure:
    """Scaling-invariant measure: atoms on the fundamental interval plus mass at 0.

    ``base_atoms`` lists (position, weight) with positions in (q, 1]; the same
    position may repeat, modelling a fibre of dimension > 1.  The full measure
    gives each orbit point q**k * x the weight of its base atom.
    """

    q: Fraction
    base_atoms: tuple[tuple[Fraction, Fraction], ...]
    zero_mass: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        atoms = tuple((Fraction(p), Fraction(w)) for p, w in self.base_atoms)
        atoms = tuple(sorted(atoms))
        object.__setattr__(self, "base_atoms", atoms)
        object.__setattr__(self, "zero_mass", Fraction(self.zero_mass))
        if not 0 < self.q < 1:
            raise DomainError(f"measures need q in (0, 1), got {self.q}")
        for p, w in atoms:
            if not self.q < p <= 1:
                raise DomainError(f"atom position {p} outside ({self.q}, 1]")
            if w <= 0:
                raise DomainError(f"atom weight must be positive, got {w}")
        if self.zero_mass < 0:
            raise DomainError("zero_mass must be nonnegative")

    @property
    def is_trivial(self) -> bool:
        return not self.base_atoms and self.zero_mass == 0

    def support(self) -> SpectralSet:
        positions = tuple(sorted({p for p, _ in self.base_atoms}))
        if positions:
            return SpectralSet(self.q, positions, True)
        return SpectralSet(self.q, (), self.zero_mass > 0)

    def to_json(self) -> dict:
        return {
            "q": format_rational(self.q),
            "atoms": [[format_rational(p), format_rational(w)] for p, w in self.base_atoms],
            "zero_mass": format_rational(self.zero_mass),
        }

    @classmethod
    def from_json(cls, data: dict) -> "QInvariantMeasure":
        return cls(parse_rational(data["q"]),
                   tuple((parse_rational(p), parse_rational(w)) for p, w in data["atoms"]),
                   parse_rational(data.get("zero_mass", 0)))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def atomic_measure(q, atoms, zero_mass=0) -> QInvariantMeasure:
    qq = as_ratio(q)
    return QInvariantMeasure(qq,
                             tuple((parse_rational(p), parse_rational(w)) for p, w in atoms),
                             parse_rational(zero_mass))


def uniform_measure(q, generators, weight=1, zero_mass=0) -> QInvariantMeasure:
    """One atom of the given weight on each generator."""
    w = parse_rational(weight)
    return atomic_measure(q, [(g, w) for g in generators], zero_mass)


def mu0_from_nu(q, nu_atoms) -> QInvariantMeasure:
    """Fold a finite measure on [q, 1] into base atoms on (q, 1].

    Endpoints q and 1 coincide on the quotient circle, so mass sitting at q is
    moved to 1 before restricting to the half-open fundamental interval.
    """
    qq = as_ratio(q)
    mass: dict[Fraction, Fraction] = {}
    for p, w in nu_atoms:
        p = parse_rational(p)
        w = parse_rational(w)
        if not qq <= p <= 1:
            raise DomainError(f"input atom {p} outside [{qq}, 1]")
        if w <= 0:
            raise DomainError("input weights must be positive")
        pos = Fraction(1) if p == qq else p
        mass[pos] = mass.get(pos, Fraction(0)) + w
    atoms = tuple(sorted((p, w) for p, w in mass.items() if qq < p <= 1))
    return QInvariantMeasure(qq, atoms)


def measure_of(mu: QInvariantMeasure, interval: Interval) -> Fraction | float:
    """Exact measure of an interval; float('inf') when the mass diverges."""
    if interval.is_empty:
        return Fraction(0)
    total = Fraction(0)
    if interval.contains(Fraction(0)):
        total += mu.zero_mass
    if not mu.base_atoms:
        return total
    if interval.upper is None:
        return INFINITE
    if interval.upper <= 0:
        return total
    if interval.lower == 0:
        # every orbit accumulates at 0, so any right neighbourhood of 0
        # carries infinitely many atoms
        return INFINITE
    for p, w in mu.base_atoms:
        total += w * len(orbit_exponents(mu.q, p, interval))
    return total


def verify_q_invariance(mu: QInvariantMeasure, interval: Interval) -> bool:
    """Check mu(q * M) == mu(M) exactly for an interval M inside (0, inf)."""
    if interval.lower == 0 and interval.lower_closed:
        raise DomainError("invariance is checked on subsets of (0, inf)")
    return measure_of(mu, interval.scaled(mu.q)) == measure_of(mu, interval)
