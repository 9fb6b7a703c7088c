"""Twisted crossed product of functions on a spectral set by the scaling action.

Elements are finite sums ``sum_k f_k U**k`` where each coefficient f_k is a
function of the radial variable t >= 0 and U implements the scaling t -> q*t.
Multiplication twists the right factor, ``(f U**n)(g U**m) = f a**n(g) U**(n+m)``
with ``a(g)(t) = g(q*t)``, and the involution is ``(f U**n)* = a**(-n)(conj f) U**(-n)``.

Elements whose nonzero modes vanish at t = 0 form the subalgebra generated by
the deformed coordinate; adjoining a unit scalar to that subalgebra yields the
compactified model used for the projection constructions.
"""

from __future__ import annotations

import bisect
import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .errors import DomainError, EvaluationError
from .qspace import Interval, SpectralSet
from .ratfunc import DEFAULT_SPOTCHECK_POINTS, RationalFunction
from .scalars import (RationalComplex, conj_scalar, exact_magnitude,
                      is_exact_scalar, parse_rational)


class Flavor(enum.Enum):
    RATIONAL = "rational"
    INDICATOR = "indicator"
    SAMPLED = "sampled"
    CLOSURE = "closure"


class Classification(enum.Enum):
    FULL = "full"
    VANISHING = "vanishing"


class CoefficientFunction:
    """Radial coefficient; concrete flavors decide exact evaluability."""

    flavor: Flavor

    @property
    def value_at_zero(self):
        raise NotImplementedError

    @property
    def vanishes_at_infinity(self) -> bool:
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        return False

    def __call__(self, t: float) -> complex:
        raise NotImplementedError

    def eval_exact(self, t: Fraction) -> RationalComplex:
        raise EvaluationError(f"{self.flavor.value} coefficient has no exact evaluation")


class RationalCoefficient(CoefficientFunction):
    flavor = Flavor.RATIONAL

    def __init__(self, rf: RationalFunction):
        rf.denominator_spotcheck(DEFAULT_SPOTCHECK_POINTS)
        self.rf = rf

    @property
    def value_at_zero(self) -> RationalComplex:
        return self.rf.evaluate(0)

    @property
    def vanishes_at_infinity(self) -> bool:
        return self.rf.vanishes_at_infinity

    @property
    def exact(self) -> bool:
        return True

    @property
    def is_zero(self) -> bool:
        return self.rf.is_zero

    def __call__(self, t: float) -> complex:
        return self.rf.evaluate_float(t)

    def eval_exact(self, t) -> RationalComplex:
        return self.rf.evaluate(t)


class IndicatorCoefficient(CoefficientFunction):
    """Characteristic function of an interval; exact at rational points."""

    flavor = Flavor.INDICATOR

    def __init__(self, interval: Interval):
        self.interval = interval

    @property
    def value_at_zero(self) -> Fraction:
        return Fraction(1) if self.interval.contains(Fraction(0)) else Fraction(0)

    @property
    def vanishes_at_infinity(self) -> bool:
        return self.interval.upper is not None

    @property
    def exact(self) -> bool:
        return True

    def __call__(self, t: float) -> complex:
        frac = Fraction(t).limit_denominator(10 ** 12)
        return 1.0 + 0j if self.interval.contains(frac) else 0j

    def eval_exact(self, t) -> RationalComplex:
        return RationalComplex(Fraction(1 if self.interval.contains(Fraction(t)) else 0))


class SampledCoefficient(CoefficientFunction):
    """Values tabulated on a grid, linear interpolation between, clamped ends."""

    flavor = Flavor.SAMPLED

    def __init__(self, knots, values, value_at_zero=0.0, vanishes_at_infinity=True):
        knots = tuple(float(t) for t in knots)
        if list(knots) != sorted(knots) or len(knots) < 2:
            raise DomainError("sample knots must be increasing, at least two")
        if any(t <= 0 for t in knots):
            raise DomainError("sample knots must be positive; t=0 is declared separately")
        if len(knots) != len(values):
            raise DomainError("knots and values must have equal length")
        self.knots = knots
        self.values = tuple(complex(v) for v in values)
        self._zero = value_at_zero
        self._vanishes = bool(vanishes_at_infinity)

    @property
    def value_at_zero(self):
        return self._zero

    @property
    def vanishes_at_infinity(self) -> bool:
        return self._vanishes

    def __call__(self, t: float) -> complex:
        if t <= self.knots[0]:
            return self.values[0]
        if t >= self.knots[-1]:
            return self.values[-1]
        i = bisect.bisect_right(self.knots, t)
        t0, t1 = self.knots[i - 1], self.knots[i]
        w = (t - t0) / (t1 - t0)
        return self.values[i - 1] * (1 - w) + self.values[i] * w

    def rescaled_argument(self, factor: float) -> "SampledCoefficient":
        """Tabulation of t -> f(c * t): knots divide by c."""
        return SampledCoefficient(tuple(t / factor for t in self.knots), self.values,
                                  self._zero, self._vanishes)


class ClosureCoefficient(CoefficientFunction):
    """Arbitrary callable with declared behaviour at 0 and infinity."""

    flavor = Flavor.CLOSURE

    def __init__(self, fn: Callable[[float], complex], value_at_zero,
                 vanishes_at_infinity: bool, label: str = ""):
        self.fn = fn
        self._zero = value_at_zero
        self._vanishes = bool(vanishes_at_infinity)
        self.label = label

    @property
    def value_at_zero(self):
        return self._zero

    @property
    def vanishes_at_infinity(self) -> bool:
        return self._vanishes

    def __call__(self, t: float) -> complex:
        try:
            return complex(self.fn(t))
        except (ArithmeticError, ValueError) as exc:
            raise EvaluationError(f"coefficient undefined at t={t}") from exc


class RestrictedCoefficient(CoefficientFunction):
    """Coefficient with exact evaluation confined to a spectral set plus 0."""

    def __init__(self, base: CoefficientFunction, domain: SpectralSet):
        self.base = base
        self.domain = domain
        self.flavor = base.flavor

    @property
    def value_at_zero(self):
        return self.base.value_at_zero

    @property
    def vanishes_at_infinity(self) -> bool:
        return self.base.vanishes_at_infinity

    @property
    def exact(self) -> bool:
        return self.base.exact

    def __call__(self, t: float) -> complex:
        return self.base(t)

    def eval_exact(self, t) -> RationalComplex:
        from .qspace import contains
        t = Fraction(t)
        if t != 0 and not contains(self.domain, t):
            raise EvaluationError(f"t={t} outside the restricted domain")
        return self.base.eval_exact(t)


ZERO_COEFFICIENT = RationalCoefficient(RationalFunction.constant(0))
ONE_COEFFICIENT = RationalCoefficient(RationalFunction.constant(1))


def rational_coefficient(rf) -> RationalCoefficient:
    if isinstance(rf, RationalFunction):
        return RationalCoefficient(rf)
    return RationalCoefficient(RationalFunction.constant(rf))


def _is_syntactic_zero(f: CoefficientFunction) -> bool:
    base = f.base if isinstance(f, RestrictedCoefficient) else f
    return isinstance(base, RationalCoefficient) and base.is_zero


def _v0_combine(x, y, op):
    if is_exact_scalar(x) and is_exact_scalar(y):
        return op(RationalComplex.coerce(x), RationalComplex.coerce(y))
    return op(complex(x), complex(y))


def cf_alpha(f: CoefficientFunction, n: int, q: Fraction) -> CoefficientFunction:
    """Scaling action iterate: t -> f(q**n * t)."""
    if n == 0:
        return f
    qn = Fraction(q) ** n
    if isinstance(f, RestrictedCoefficient):
        return RestrictedCoefficient(cf_alpha(f.base, n, q), f.domain)
    if isinstance(f, RationalCoefficient):
        return RationalCoefficient(f.rf.substitute_scale(qn))
    if isinstance(f, IndicatorCoefficient):
        # chi_M(q**n t) = chi_{q**-n M}(t)
        return IndicatorCoefficient(f.interval.scaled(1 / qn))
    if isinstance(f, SampledCoefficient):
        return f.rescaled_argument(float(qn))
    factor = float(qn)
    return ClosureCoefficient(lambda t, f=f, c=factor: f(c * t),
                              f.value_at_zero, f.vanishes_at_infinity)


def cf_conj(f: CoefficientFunction) -> CoefficientFunction:
    if isinstance(f, RestrictedCoefficient):
        return RestrictedCoefficient(cf_conj(f.base), f.domain)
    if isinstance(f, RationalCoefficient):
        return RationalCoefficient(f.rf.conjugate())
    if isinstance(f, IndicatorCoefficient):
        return f
    if isinstance(f, SampledCoefficient):
        return SampledCoefficient(f.knots, tuple(v.conjugate() for v in f.values),
                                  conj_scalar(f.value_at_zero), f.vanishes_at_infinity)
    return ClosureCoefficient(lambda t, f=f: complex(f(t)).conjugate(),
                              conj_scalar(f.value_at_zero), f.vanishes_at_infinity)


def _both_rational(f, g):
    fb = f.base if isinstance(f, RestrictedCoefficient) else f
    gb = g.base if isinstance(g, RestrictedCoefficient) else g
    if isinstance(fb, RationalCoefficient) and isinstance(gb, RationalCoefficient):
        return fb, gb
    return None


def cf_mul(f: CoefficientFunction, g: CoefficientFunction) -> CoefficientFunction:
    pair = _both_rational(f, g)
    if pair is not None:
        return RationalCoefficient(pair[0].rf * pair[1].rf)
    return ClosureCoefficient(lambda t, f=f, g=g: f(t) * g(t),
                              _v0_combine(f.value_at_zero, g.value_at_zero, lambda a, b: a * b),
                              f.vanishes_at_infinity or g.vanishes_at_infinity)


def cf_add(f: CoefficientFunction, g: CoefficientFunction) -> CoefficientFunction:
    pair = _both_rational(f, g)
    if pair is not None:
        return RationalCoefficient(pair[0].rf + pair[1].rf)
    return ClosureCoefficient(lambda t, f=f, g=g: f(t) + g(t),
                              _v0_combine(f.value_at_zero, g.value_at_zero, lambda a, b: a + b),
                              f.vanishes_at_infinity and g.vanishes_at_infinity)


def cf_scale(f: CoefficientFunction, s) -> CoefficientFunction:
    base = f.base if isinstance(f, RestrictedCoefficient) else f
    if is_exact_scalar(s) and isinstance(base, RationalCoefficient):
        return RationalCoefficient(base.rf * RationalComplex.coerce(s))
    sc = complex(s)
    zero = _v0_combine(f.value_at_zero, s, lambda a, b: a * b)
    return ClosureCoefficient(lambda t, f=f, sc=sc: sc * f(t), zero, f.vanishes_at_infinity)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Finite Fourier sum sum_k f_k U**k over a fixed scaling ratio q."""

    q: Fraction
    terms: tuple[tuple[int, CoefficientFunction], ...]

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if not 0 < self.q <= 1:
            raise DomainError(f"q must lie in (0, 1], got {self.q}")
        seen = set()
        for k, _ in self.terms:
            if k in seen:
                raise DomainError(f"duplicate mode {k}")
            seen.add(k)
        object.__setattr__(self, "terms",
                           tuple(sorted(self.terms, key=lambda kv: kv[0])))

    @property
    def coeffs(self) -> Mapping[int, CoefficientFunction]:
        return dict(self.terms)

    @property
    def modes(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.terms)

    @property
    def mode_span(self) -> int:
        return max((abs(k) for k, _ in self.terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, k: int) -> CoefficientFunction:
        for kk, f in self.terms:
            if kk == k:
                return f
        return ZERO_COEFFICIENT

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return add(self, scale(other, -1))

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return multiply(self, other)

    def __neg__(self):
        return scale(self, -1)


def element(q, coeffs: Mapping[int, CoefficientFunction]) -> AlgebraElement:
    """Assemble an element, dropping syntactically zero coefficients."""
    q = Fraction(q)
    terms = tuple((int(k), f) for k, f in coeffs.items() if not _is_syntactic_zero(f))
    return AlgebraElement(q, terms)


def zero_element(q) -> AlgebraElement:
    return AlgebraElement(Fraction(q), ())


def alpha(a: AlgebraElement, n: int = 1) -> AlgebraElement:
    """Apply the scaling automorphism to every coefficient."""
    return element(a.q, {k: cf_alpha(f, n, a.q) for k, f in a.terms})


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.q != b.q:
        raise DomainError("cannot multiply elements over different ratios")
    out: dict[int, CoefficientFunction] = {}
    for n, f in a.terms:
        for m, g in b.terms:
            term = cf_mul(f, cf_alpha(g, n, a.q))
            k = n + m
            out[k] = cf_add(out[k], term) if k in out else term
    return element(a.q, out)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    return element(a.q, {-k: cf_alpha(cf_conj(f), -k, a.q) for k, f in a.terms})


def add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.q != b.q:
        raise DomainError("cannot add elements over different ratios")
    out = dict(a.terms)
    for k, g in b.terms:
        out[k] = cf_add(out[k], g) if k in out else g
    return element(a.q, out)


def scale(a: AlgebraElement, s) -> AlgebraElement:
    if (is_exact_scalar(s) and RationalComplex.coerce(s).is_zero) or s == 0:
        return zero_element(a.q)
    return element(a.q, {k: cf_scale(f, s) for k, f in a.terms})


def classify(a: AlgebraElement) -> Classification:
    """VANISHING iff every nonzero mode coefficient vanishes at t = 0."""
    for k, f in a.terms:
        if k != 0 and f.value_at_zero != 0:
            return Classification.FULL
    return Classification.VANISHING


@dataclass(frozen=True, eq=False)
class UnitizedElement:
    """Pair (body, unit scalar) in the minimal unitization of the subalgebra."""

    body: AlgebraElement
    unit: object = 0

    @property
    def q(self) -> Fraction:
        return self.body.q


def unitize(a: AlgebraElement, unit=0) -> UnitizedElement:
    if classify(a) is not Classification.FULL:
        return UnitizedElement(a, unit)
    raise DomainError("only elements with vanishing nonzero modes embed in the unitization")


def unit_element(q) -> UnitizedElement:
    return UnitizedElement(zero_element(q), 1)


def u_add(x: UnitizedElement, y: UnitizedElement) -> UnitizedElement:
    return UnitizedElement(add(x.body, y.body),
                           _v0_combine(x.unit, y.unit, lambda a, b: a + b))


def u_sub(x: UnitizedElement, y: UnitizedElement) -> UnitizedElement:
    return u_add(x, u_scale(y, -1))


def u_scale(x: UnitizedElement, s) -> UnitizedElement:
    return UnitizedElement(scale(x.body, s),
                           _v0_combine(x.unit, s, lambda a, b: a * b))


def u_mul(x: UnitizedElement, y: UnitizedElement) -> UnitizedElement:
    body = add(multiply(x.body, y.body),
               add(scale(y.body, x.unit), scale(x.body, y.unit)))
    return UnitizedElement(body, _v0_combine(x.unit, y.unit, lambda a, b: a * b))


def u_adjoint(x: UnitizedElement) -> UnitizedElement:
    return UnitizedElement(adjoint(x.body), conj_scalar(x.unit))


def classical_eval(a: AlgebraElement, r: float, theta: float) -> complex:
    """Evaluate at the point with modulus r and argument theta.

    For q = 1 this is the Gelfand transform on the plane; multiplicativity
    fails for q < 1, where the same formula is still available as a symbol map.
    """
    if r < 0:
        raise DomainError("modulus must be nonnegative")
    total = 0j
    for k, f in a.terms:
        val = complex(f.value_at_zero) if r == 0 else complex(f(r))
        total += val * complex(math.cos(k * theta), math.sin(k * theta))
    return total


def restrict(a: AlgebraElement, X: SpectralSet) -> AlgebraElement:
    """Confine exact evaluation of every coefficient to X plus the origin."""
    if X.q != a.q:
        raise DomainError("spectral set ratio differs from the element ratio")
    return element(a.q, {k: RestrictedCoefficient(f, X) for k, f in a.terms})


def grid_sample_points(X: SpectralSet, n_min: int, n_max: int,
                       include_zero: bool = True) -> tuple[Fraction, ...]:
    """Grid values q**n * x over the level range, optionally with 0."""
    pts = sorted({X.q ** n * x for n in range(n_min, n_max + 1) for x in X.generators})
    if include_zero and X.includes_zero:
        pts.insert(0, Fraction(0))
    return tuple(pts)


def element_residual(a: AlgebraElement, b: AlgebraElement, points) -> Fraction | float:
    """Max coefficient deviation |a_k - b_k| over modes and sample points.

    Exact (a Fraction) when every involved coefficient evaluates exactly,
    otherwise a float.
    """
    if a.q != b.q:
        raise DomainError("cannot compare elements over different ratios")
    modes = sorted(set(a.modes) | set(b.modes))
    all_exact = all(f.exact for _, f in a.terms) and all(f.exact for _, f in b.terms)
    worst: Fraction | float = Fraction(0) if all_exact else 0.0
    for k in modes:
        fa, fb = a.coefficient(k), b.coefficient(k)
        for p in points:
            if all_exact:
                diff = fa.eval_exact(p) - fb.eval_exact(p)
                worst = max(worst, exact_magnitude(diff))
            else:
                worst = max(worst, abs(fa(float(p)) - fb(float(p))))
    return worst


def unitized_residual(x: UnitizedElement, y: UnitizedElement, points):
    """Max deviation between unitized elements: unit gap plus body residual."""
    unit_gap = _v0_combine(x.unit, y.unit, lambda a, b: a - b)
    body = element_residual(x.body, y.body, points)
    if is_exact_scalar(unit_gap) and isinstance(body, Fraction):
        return max(exact_magnitude(unit_gap), body)
    return max(abs(complex(unit_gap)), float(body))


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>t)|(?P<op>[()+\-*/^]))")


class _Parser:
    """Recursive descent over + - * / ^ with integer and t atoms."""

    def __init__(self, text: str):
        self.tokens = self._lex(text)
        self.pos = 0

    @staticmethod
    def _lex(text: str):
        tokens = []
        i = 0
        while i < len(text):
            m = _TOKEN.match(text, i)
            if m is None:
                if text[i:].strip() == "":
                    break
                raise DomainError(f"unexpected character {text[i:].strip()[0]!r} in expression")
            if m.group("int") is not None:
                tokens.append(("int", int(m.group("int"))))
            elif m.group("var") is not None:
                tokens.append(("var", "t"))
            else:
                tokens.append(("op", m.group("op")))
            i = m.end()
        tokens.append(("end", None))
        return tokens

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise DomainError(f"expected {op!r} in expression")

    def parse(self) -> RationalFunction:
        value = self.expr()
        if self.peek()[0] != "end":
            raise DomainError("trailing input in expression")
        return value

    def expr(self) -> RationalFunction:
        value = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RationalFunction:
        value = self.factor()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self) -> RationalFunction:
        sign = 1
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            if op == "-":
                sign = -sign
        value = self.power()
        return value if sign > 0 else -value

    def power(self) -> RationalFunction:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exp_sign = 1
            while self.peek() in (("op", "+"), ("op", "-")):
                _, op = self.take()
                if op == "-":
                    exp_sign = -exp_sign
            kind, val = self.take()
            if kind != "int":
                raise DomainError("exponent must be an integer")
            return base ** (exp_sign * val)
        return base

    def atom(self) -> RationalFunction:
        kind, val = self.take()
        if kind == "int":
            return RationalFunction.constant(val)
        if kind == "var":
            return RationalFunction.variable()
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise DomainError("malformed expression")


def parse_rational_expression(text: str) -> RationalFunction:
    """Parse an expression in t with integer literals and + - * / ^ ( )."""
    return _Parser(text).parse()


def parse_element_term(text: str) -> tuple[int, RationalCoefficient]:
    """Parse one ``expr@k`` literal into (mode, coefficient)."""
    if "@" not in text:
        raise DomainError(f"element term {text!r} lacks a mode tag expr@k")
    expr, _, mode = text.rpartition("@")
    try:
        k = int(mode.strip())
    except ValueError as exc:
        raise DomainError(f"mode tag must be an integer, got {mode!r}") from exc
    return k, RationalCoefficient(parse_rational_expression(expr))


def parse_element(q, literals) -> AlgebraElement:
    """Build an element from ``expr@k`` strings; repeated modes add."""
    q = parse_rational(q)
    out: dict[int, CoefficientFunction] = {}
    for lit in literals:
        k, cf = parse_element_term(lit)
        out[k] = cf_add(out[k], cf) if k in out else cf
    return element(q, out)
