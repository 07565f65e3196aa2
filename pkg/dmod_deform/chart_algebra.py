#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Exact arithmetic in the three affine chart rings of a Weierstrass curve
y^2 z = x^3 + a x z^2 + b z^3, their restriction homomorphisms and the
distinguished derivations.
~~~~~~~~~~~~~~~~~~~~~
U1 = D+(y) with ring k[x,z]/(z - x^3 - axz^2 - bz^3),
U2 = D+(z) with ring k[x,y]/(y^2 - x^3 - ax - b),
U3 = U1 ∩ U2 with ring k[x,y,1/y]/(y^2 - x^3 - ax - b).
"""
# standard library:
from collections import defaultdict
from dataclasses import dataclass, field
import enum
from fractions import Fraction
import logging
import re
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

# external dependencies:
import sympy
from sympy.parsing.sympy_parser import convert_xor
from sympy.parsing.sympy_parser import parse_expr
from sympy.parsing.sympy_parser import standard_transformations

from dmod_deform import err

Scalar = Fraction
Monomial = Tuple[int, int]
RawTerms = Iterable[Tuple[Monomial, Union[int, Fraction]]]

RATIONAL_PATTERN = re.compile(r'^([+-]?\d+)(?:/([+-]?\d+))?$')
# Only digits, the chart variables and arithmetic may reach the parser:
ELEMENT_PATTERN = re.compile(r'^[0-9xyz\s+\-*/^()]+$')
# An exponent is an integer literal, optionally signed or parenthesized,
# and is never itself raised to a power.
EXPONENT_PATTERN = re.compile(
    r'\^\s*(?:\(\s*([+-]?\d+)\s*\)|([+-]?\d+)(?!\d))(?!\s*\^)')
MAX_PARSED_EXPONENT = 64


def parse_rational(text: str) -> Scalar:
    "Parse an integer or a fraction p/q into a reduced Fraction."
    if text is None:
        raise err.MonomialSyntaxError('Missing rational number.')
    match = RATIONAL_PATTERN.match(str(text).strip())
    if not match:
        raise err.MonomialSyntaxError(
            f"Not a rational number (expected p or p/q): {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) else 1
    if denominator == 0:
        raise err.MonomialSyntaxError(f"Zero denominator in {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Scalar) -> str:
    "Canonical string of a rational: always p/q, never a float."
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


class ChartId(enum.Enum):
    "The three charts of the cover, U3 being the overlap."
    U1 = 'U1'
    U2 = 'U2'
    U3 = 'U3'

    @property
    def variables(self) -> Tuple[str, str]:
        "Names of the two coordinates of the chart."
        return ('x', 'z') if self is ChartId.U1 else ('x', 'y')

    @property
    def is_laurent(self) -> bool:
        "The second variable may carry negative exponents."
        return self is ChartId.U3


@dataclass(frozen=True)
class Inclusion:
    "An (opposite) inclusion source ⊇ target in the cover category."
    source: ChartId
    target: ChartId

    def __post_init__(self) -> None:
        if (self.source, self.target) not in _VALID_INCLUSIONS:
            raise ValueError(
                f"{self.source.value} does not contain {self.target.value}")

    @property
    def is_identity(self) -> bool:
        return self.source is self.target

    @property
    def label(self) -> str:
        return f"{self.source.value}>={self.target.value}"

    def __str__(self) -> str:
        return self.label


_VALID_INCLUSIONS = {(ChartId.U1, ChartId.U1),
                     (ChartId.U2, ChartId.U2),
                     (ChartId.U3, ChartId.U3),
                     (ChartId.U1, ChartId.U3),
                     (ChartId.U2, ChartId.U3)}

U1_U1 = Inclusion(ChartId.U1, ChartId.U1)
U2_U2 = Inclusion(ChartId.U2, ChartId.U2)
U3_U3 = Inclusion(ChartId.U3, ChartId.U3)
U1_U3 = Inclusion(ChartId.U1, ChartId.U3)
U2_U3 = Inclusion(ChartId.U2, ChartId.U3)

# Index set of the resolving complex in degree one, in report order.
INCLUSIONS: Tuple[Inclusion, ...] = (U1_U1, U2_U2, U3_U3, U1_U3, U2_U3)
IDENTITY_INCLUSIONS: Tuple[Inclusion, ...] = (U1_U1, U2_U2, U3_U3)
PROPER_INCLUSIONS: Tuple[Inclusion, ...] = (U1_U3, U2_U3)
CHARTS: Tuple[ChartId, ...] = (ChartId.U1, ChartId.U2, ChartId.U3)


@dataclass(frozen=True)
class CurveParams:
    """Rational Weierstrass coefficients. Construction fails for a
       singular curve."""
    a: Scalar
    b: Scalar
    delta: Scalar = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'a', Fraction(self.a))
        object.__setattr__(self, 'b', Fraction(self.b))
        object.__setattr__(self, 'delta', 4 * self.a ** 3 + 27 * self.b ** 2)
        if self.delta == 0:
            msg = (f"Curve with a = {self.a}, b = {self.b} is singular " +
                   "(4a^3 + 27b^2 = 0).")
            logging.error(msg)
            raise err.SingularCurveError(msg)

    @property
    def a_nonzero(self) -> bool:
        return self.a != 0

    @property
    def regime(self) -> str:
        "Either 'a_nonzero' or 'a_zero'."
        return 'a_nonzero' if self.a_nonzero else 'a_zero'


class MonomialOrder(enum.Enum):
    """Graded monomial orders. Both compare total degree first, which the
       truncated linear algebra relies on."""
    GRLEX = 'grlex'
    GRLEX_REVERSED = 'grlex_reversed'


def monomial_degree(chart: ChartId, mono: Monomial) -> int:
    "Total degree; in U3 the y-exponent counts with its absolute value."
    i, j = mono
    return i + abs(j) if chart.is_laurent else i + j


def monomial_key(chart: ChartId,
                 mono: Monomial,
                 order: MonomialOrder = MonomialOrder.GRLEX
                 ) -> Tuple[int, int, int]:
    "Sort key, ascending."
    i, j = mono
    if order is MonomialOrder.GRLEX:
        return (monomial_degree(chart, mono), i, j)
    return (monomial_degree(chart, mono), -i, -j)


def is_normal_monomial(chart: ChartId, mono: Monomial) -> bool:
    "Check the normal-form exponent bounds of the chart."
    i, j = mono
    if i < 0:
        return False
    if chart is ChartId.U1:
        return i <= 2 and j >= 0
    if chart is ChartId.U2:
        return 0 <= j <= 1
    return i <= 2


class ChartElement:
    """An element of one of the chart rings in normal form.
       Immutable: arithmetic returns new elements."""

    __slots__ = ('chart', 'params', '_terms', '_hash')

    def __init__(self,
                 chart: ChartId,
                 params: CurveParams,
                 terms: Optional[Mapping[Monomial, Scalar]] = None) -> None:
        self.chart = chart
        self.params = params
        cleaned: Dict[Monomial, Scalar] = dict()
        for mono, coeff in (terms or dict()).items():
            if not is_normal_monomial(chart, mono):
                raise ValueError(
                    f"Monomial {mono} is not in normal form for {chart.value}")
            if coeff:
                cleaned[mono] = Fraction(coeff)
        self._terms = cleaned
        self._hash: Optional[int] = None

    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
    # CONSTRUCTORS
    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

    @classmethod
    def zero(cls, chart: ChartId, params: CurveParams) -> 'ChartElement':
        return cls(chart, params)

    @classmethod
    def constant(cls,
                 chart: ChartId,
                 params: CurveParams,
                 value: Union[int, Scalar] = 1) -> 'ChartElement':
        return cls(chart, params, {(0, 0): Fraction(value)})

    @classmethod
    def monomial(cls,
                 chart: ChartId,
                 params: CurveParams,
                 i: int,
                 j: int,
                 coeff: Union[int, Scalar] = 1) -> 'ChartElement':
        "x^i * v^j, reduced to normal form if necessary."
        return chart_reduce([((i, j), coeff)], chart, params)

    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
    # ACCESS
    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

    def items(self) -> Iterable[Tuple[Monomial, Scalar]]:
        return self._terms.items()

    def coefficient(self, mono: Monomial) -> Scalar:
        return self._terms.get(mono, Fraction(0))

    def monomials(self) -> List[Monomial]:
        "Support in ascending graded order."
        return sorted(self._terms, key=lambda m: monomial_key(self.chart, m))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        "Maximal degree of the support; -1 for zero."
        if not self._terms:
            return -1
        return max(monomial_degree(self.chart, m) for m in self._terms)

    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
    # ARITHMETIC
    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

    def _check_same_ring(self, other: 'ChartElement') -> None:
        if self.chart is not other.chart or self.params != other.params:
            raise err.ChartMismatchError(
                f"Cannot combine elements of {self.chart.value} and " +
                f"{other.chart.value} (or of different curves).")

    def __add__(self, other: 'ChartElement') -> 'ChartElement':
        self._check_same_ring(other)
        terms: Dict[Monomial, Scalar] = defaultdict(Fraction, self._terms)
        for mono, coeff in other.items():
            terms[mono] += coeff
        return ChartElement(self.chart, self.params, terms)

    def __neg__(self) -> 'ChartElement':
        return ChartElement(self.chart, self.params,
                            {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: 'ChartElement') -> 'ChartElement':
        return self + (-other)

    def scale(self, factor: Union[int, Scalar]) -> 'ChartElement':
        factor = Fraction(factor)
        return ChartElement(self.chart, self.params,
                            {m: c * factor for m, c in self._terms.items()})

    def __mul__(self, other: Union['ChartElement', int, Scalar]
                ) -> 'ChartElement':
        if isinstance(other, ChartElement):
            return chart_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other: Union[int, Scalar]) -> 'ChartElement':
        return self.scale(other)

    def __pow__(self, exponent: int) -> 'ChartElement':
        if exponent < 0:
            raise ValueError('Only non-negative powers are supported.')
        result = ChartElement.constant(self.chart, self.params)
        for _ in range(exponent):
            result = chart_mul(result, self)
        return result

    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
    # DUNDERS
    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChartElement):
            return NotImplemented
        return (self.chart is other.chart and
                self.params == other.params and
                self._terms == other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.chart, self.params,
                               frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"ChartElement({self.chart.value}, {format_element(self)!r})"


# #############################################################################
# NORMAL FORMS AND RING STRUCTURE
# #############################################################################

def _rewrite(chart: ChartId,
             mono: Monomial,
             params: CurveParams) -> Optional[List[Tuple[Monomial, Scalar]]]:
    """One rewriting step by the chart relation, or None if the monomial
       is already normal. Each step lowers x-degree (U1, U3) or
       y-degree (U2)."""
    i, j = mono
    a, b = params.a, params.b
    if chart is ChartId.U1 and i >= 3:
        # x^3 = z - axz^2 - bz^3
        return [((i - 3, j + 1), Fraction(1)),
                ((i - 2, j + 2), -a),
                ((i - 3, j + 3), -b)]
    if chart is ChartId.U2 and j >= 2:
        # y^2 = x^3 + ax + b
        return [((i + 3, j - 2), Fraction(1)),
                ((i + 1, j - 2), a),
                ((i, j - 2), b)]
    if chart is ChartId.U3 and i >= 3:
        # x^3 = y^2 - ax - b
        return [((i - 3, j + 2), Fraction(1)),
                ((i - 2, j), -a),
                ((i - 3, j), -b)]
    return None


def chart_reduce(raw: RawTerms,
                 chart: ChartId,
                 params: CurveParams) -> ChartElement:
    "Reduce a list of (exponent pair, coefficient) to normal form."
    pending: Dict[Monomial, Scalar] = defaultdict(Fraction)
    for (i, j), coeff in raw:
        if i < 0 or (j < 0 and not chart.is_laurent):
            raise ValueError(
                f"Negative exponent in x^{i}*{chart.variables[1]}^{j} " +
                f"is not allowed in {chart.value}")
        pending[(i, j)] += Fraction(coeff)
    result: Dict[Monomial, Scalar] = defaultdict(Fraction)
    while pending:
        mono, coeff = pending.popitem()
        if not coeff:
            continue
        rewritten = _rewrite(chart, mono, params)
        if rewritten is None:
            result[mono] += coeff
            continue
        for new_mono, factor in rewritten:
            if factor:
                pending[new_mono] += coeff * factor
    return ChartElement(chart, params, result)


def chart_mul(u: ChartElement, v: ChartElement) -> ChartElement:
    "Product in the chart ring, in normal form."
    # pylint: disable=protected-access
    u._check_same_ring(v)
    raw = [((i1 + i2, j1 + j2), c1 * c2)
           for (i1, j1), c1 in u.items()
           for (i2, j2), c2 in v.items()]
    return chart_reduce(raw, u.chart, u.params)


def restrict(u: ChartElement, incl: Inclusion) -> ChartElement:
    """Restriction homomorphism A_source -> A_target.
       U1 ⊇ U3 sends x to x/y and z to 1/y, U2 ⊇ U3 is the localization."""
    if u.chart is not incl.source:
        raise err.ChartMismatchError(
            f"Element of {u.chart.value} cannot be restricted along {incl}")
    if incl.is_identity:
        return u
    if incl.source is ChartId.U1:
        raw = [((i, -(i + j)), c) for (i, j), c in u.items()]
    else:
        raw = list(u.items())
    return chart_reduce(raw, incl.target, u.params)


def _coordinate_derivatives(chart: ChartId,
                            params: CurveParams
                            ) -> Tuple[List[Tuple[Monomial, Scalar]],
                                       List[Tuple[Monomial, Scalar]]]:
    "Images of the two coordinates under the chart derivation."
    a, b = params.a, params.b
    if chart is ChartId.U1:
        d_x = [((0, 0), Fraction(1)), ((1, 1), -2 * a), ((0, 2), -3 * b)]
        d_z = [((2, 0), Fraction(3)), ((0, 2), a)]
        return d_x, d_z
    d_x = [((0, 1), Fraction(-2))]
    d_y = [((2, 0), Fraction(-3)), ((0, 0), -a)]
    return d_x, d_y


def apply_derivation(chart: ChartId, u: ChartElement) -> ChartElement:
    """Apply the distinguished derivation of the chart:
         U1: (1 - 2axz - 3bz^2) d/dx + (3x^2 + az^2) d/dz
         U2, U3: -2y d/dx - (3x^2 + a) d/dy"""
    if u.chart is not chart:
        raise err.ChartMismatchError(
            f"Derivation of {chart.value} applied to element of " +
            f"{u.chart.value}")
    d_first, d_second = _coordinate_derivatives(chart, u.params)
    raw: List[Tuple[Monomial, Scalar]] = list()
    for (i, j), coeff in u.items():
        if i:
            raw.extend(((i - 1 + p, j + q), coeff * i * c)
                       for (p, q), c in d_first)
        if j:
            raw.extend(((i + p, j - 1 + q), coeff * j * c)
                       for (p, q), c in d_second)
    return chart_reduce(raw, chart, u.params)


def monomial_box(chart: ChartId,
                 d: int,
                 order: MonomialOrder = MonomialOrder.GRLEX
                 ) -> List[Monomial]:
    "All normal-form monomials of degree <= d in ascending order."
    if d < 0:
        raise ValueError('The degree bound must not be negative.')
    monomials: List[Monomial] = list()
    if chart is ChartId.U1:
        monomials = [(i, j) for i in range(0, min(2, d) + 1)
                     for j in range(0, d - i + 1)]
    elif chart is ChartId.U2:
        monomials = [(i, j) for j in range(0, min(1, d) + 1)
                     for i in range(0, d - j + 1)]
    else:
        monomials = [(i, j) for i in range(0, min(2, d) + 1)
                     for j in range(-(d - i), d - i + 1)]
    return sorted(monomials, key=lambda m: monomial_key(chart, m, order))


def coordinate_generators(chart: ChartId,
                          params: CurveParams) -> List[ChartElement]:
    "The two coordinates of the chart (x, z on U1; x, y otherwise)."
    return [ChartElement.monomial(chart, params, 1, 0),
            ChartElement.monomial(chart, params, 0, 1)]


def chart_relation(chart: ChartId,
                   params: CurveParams) -> List[Tuple[Monomial, Scalar]]:
    "The defining polynomial f_i of the chart as raw, unreduced terms."
    a, b = params.a, params.b
    if chart is ChartId.U1:
        return [((0, 1), Fraction(1)), ((3, 0), Fraction(-1)),
                ((1, 2), -a), ((0, 3), -b)]
    return [((0, 2), Fraction(1)), ((3, 0), Fraction(-1)),
            ((1, 0), -a), ((0, 0), -b)]


# #############################################################################
# TEXTUAL SYNTAX
# #############################################################################

def format_monomial(chart: ChartId, mono: Monomial) -> str:
    "x^i*y^j with trivial factors left out; '1' for the unit."
    factors = list()
    for name, exponent in zip(chart.variables, mono):
        if exponent == 1:
            factors.append(name)
        elif exponent != 0:
            factors.append(f"{name}^{exponent}")
    return '*'.join(factors) if factors else '1'


def format_element(u: ChartElement) -> str:
    "Terms in descending graded order, e.g. '15*y^2 - 31*y^-2'."
    if u.is_zero():
        return '0'
    pieces: List[str] = list()
    for position, mono in enumerate(reversed(u.monomials())):
        coeff = u.coefficient(mono)
        magnitude = abs(coeff)
        mono_text = format_monomial(u.chart, mono)
        if mono_text == '1':
            body = str(magnitude)
        elif magnitude == 1:
            body = mono_text
        else:
            body = f"{magnitude}*{mono_text}"
        if position == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
    return ''.join(pieces)


def _check_exponents(text: str) -> None:
    """Reject exponents sympy would have to evaluate before expanding:
       non-literal or oversized exponents and powers of powers."""
    normalized = text.replace('**', '^')
    literals = EXPONENT_PATTERN.findall(normalized)
    if len(literals) != normalized.count('^'):
        raise err.MonomialSyntaxError(
            f"Exponents must be integer literals: {text!r}")
    for parenthesized, plain in literals:
        if abs(int(parenthesized or plain)) > MAX_PARSED_EXPONENT:
            raise err.MonomialSyntaxError(
                f"Exponent larger than {MAX_PARSED_EXPONENT} in {text!r}")
    # one flag per open parenthesis: does the group contain a power?
    groups: List[bool] = list()
    for position, char in enumerate(normalized):
        if char == '(':
            groups.append(False)
        elif char == '^':
            groups = [True] * len(groups)
        elif char == ')':
            has_power = groups.pop() if groups else False
            if has_power and normalized[position + 1:].lstrip()[:1] == '^':
                raise err.MonomialSyntaxError(
                    f"Nested powers are not supported: {text!r}")


def parse_element(text: str,
                  chart: ChartId,
                  params: CurveParams) -> ChartElement:
    """Parse the textual syntax (for example '-4*x^2*y^-1 + 3/2') into a
       normal-form element of the chart."""
    if not text or not ELEMENT_PATTERN.match(text):
        raise err.MonomialSyntaxError(f"Invalid chart element: {text!r}")
    _check_exponents(text)
    symbols ={name: sympy.Symbol(name) for name in chart.variables}
    try:
        expr = parse_expr(text,
                          local_dict=symbols,
                          transformations=standard_transformations +
                          (convert_xor, ),
                          evaluate=True)
    except Exception as parse_error:  # pylint: disable=broad-except
        raise err.MonomialSyntaxError(
            f"Cannot parse {text!r}") from parse_error
    raw: List[Tuple[Monomial, Scalar]] = list()
    for term, coeff in sympy.expand(expr).as_coefficients_dict().items():
        if not coeff.is_Rational:
            raise err.MonomialSyntaxError(
                f"Only rational coefficients are allowed: {text!r}")
        exponents = {name: 0 for name in chart.variables}
        for factor in sympy.Mul.make_args(term):
            if factor.is_Number:
                continue
            base, exponent = factor.as_base_exp()
            name = getattr(base, "name", None)
            if name not in exponents or not exponent.is_Integer:
                raise err.MonomialSyntaxError(
                    f"Unexpected factor {factor} in {text!r}")
            exponents[name] += int(exponent)
        mono = (exponents[chart.variables[0]], exponents[chart.variables[1]])
        raw.append((mono, Fraction(int(coeff.p), int(coeff.q))))
    try:
        return chart_reduce(raw, chart, params)
    except ValueError as exponent_error:
        raise err.MonomialSyntaxError(str(exponent_error)) from exponent_error
