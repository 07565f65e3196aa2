#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The rings D_i = A_i<d_i> of differential operators on the charts.
~~~~~~~~~~~~~~~~~~~~~
Operators are kept in the normal form sum_j a_j * d^j with coefficients
on the left. Composition uses the commutation rule d * a = a * d + d(a).
"""
# standard library:
from collections import defaultdict
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from dmod_deform import chart_algebra
from dmod_deform import err
from dmod_deform.chart_algebra import ChartElement, ChartId, CurveParams


class DiffOp:
    "A differential operator sum_j a_j * d^j on one chart. Immutable."

    __slots__ = ('chart', 'params', '_coefficients')

    def __init__(self,
                 chart: ChartId,
                 params: CurveParams,
                 coefficients: Optional[Mapping[int, ChartElement]] = None
                 ) -> None:
        self.chart = chart
        self.params = params
        cleaned: Dict[int, ChartElement] = dict()
        for order, coeff in (coefficients or dict()).items():
            if order < 0:
                raise ValueError('Operator orders must not be negative.')
            if coeff.chart is not chart:
                raise err.ChartMismatchError(
                    f"Coefficient of {coeff.chart.value} in an operator " +
                    f"on {chart.value}")
            if not coeff.is_zero():
                cleaned[order] = coeff
        self._coefficients = cleaned

    @classmethod
    def identity(cls, chart: ChartId, params: CurveParams) -> 'DiffOp':
        return cls(chart, params,
                   {0: ChartElement.constant(chart, params)})

    @classmethod
    def derivation(cls, chart: ChartId, params: CurveParams) -> 'DiffOp':
        "The distinguished derivation d_i as an operator."
        return cls(chart, params,
                   {1: ChartElement.constant(chart, params)})

    @classmethod
    def multiplication(cls, u: ChartElement) -> 'DiffOp':
        "Multiplication by a ring element, an operator of order zero."
        return cls(u.chart, u.params, {0: u})

    @property
    def coefficients(self) -> Dict[int, ChartElement]:
        return dict(self._coefficients)

    def items(self) -> Iterable[Tuple[int, ChartElement]]:
        return sorted(self._coefficients.items())

    def coefficient(self, order: int) -> ChartElement:
        return self._coefficients.get(
            order, ChartElement.zero(self.chart, self.params))

    @property
    def order(self) -> int:
        "Order in d; -1 for the zero operator."
        return max(self._coefficients) if self._coefficients else -1

    def is_zero(self) -> bool:
        return not self._coefficients

    def _check_same_ring(self, other: 'DiffOp') -> None:
        if self.chart is not other.chart or self.params != other.params:
            raise err.ChartMismatchError(
                f"Cannot combine operators on {self.chart.value} and " +
                f"{other.chart.value}")

    def __add__(self, other: 'DiffOp') -> 'DiffOp':
        self._check_same_ring(other)
        summed = dict(self._coefficients)
        for order, coeff in other.items():
            summed[order] = summed[order] + coeff if order in summed else coeff
        return DiffOp(self.chart, self.params, summed)

    def __neg__(self) -> 'DiffOp':
        return DiffOp(self.chart, self.params,
                      {k: -c for k, c in self._coefficients.items()})

    def __sub__(self, other: 'DiffOp') -> 'DiffOp':
        return self + (-other)

    def scale(self, factor) -> 'DiffOp':  # type: ignore[no-untyped-def]
        return DiffOp(self.chart, self.params,
                      {k: c.scale(factor)
                       for k, c in self._coefficients.items()})

    def __matmul__(self, other: 'DiffOp') -> 'DiffOp':
        return op_compose(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return (self.chart is other.chart and
                self.params == other.params and
                self._coefficients == other._coefficients)

    def __hash__(self) -> int:
        return hash((self.chart, frozenset(self._coefficients.items())))

    def __str__(self) -> str:
        return format_operator(self)

    def __repr__(self) -> str:
        return f"DiffOp({self.chart.value}, {format_operator(self)!r})"


def iterated_derivation(chart: ChartId,
                        u: ChartElement,
                        times: int) -> ChartElement:
    "d^times (u)"
    for _ in range(times):
        u = chart_algebra.apply_derivation(chart, u)
    return u


def op_apply(P: DiffOp, u: ChartElement) -> ChartElement:
    "The natural left action sum_j a_j * d^j(u)."
    # pylint: disable=invalid-name
    if P.chart is not u.chart:
        raise err.ChartMismatchError(
            f"Operator on {P.chart.value} applied to element of " +
            f"{u.chart.value}")
    result = ChartElement.zero(u.chart, u.params)
    derivative = u
    applied = 0
    for order, coeff in P.items():
        derivative = iterated_derivation(P.chart, derivative, order - applied)
        applied = order
        result = result + coeff * derivative
    return result


def op_compose(P: DiffOp, Q: DiffOp) -> DiffOp:
    """Normal form of P∘Q:
       a d^i ∘ b d^j = sum_k binom(i, k) a d^k(b) d^(i-k+j)."""
    # pylint: disable=invalid-name
    P._check_same_ring(Q)  # pylint: disable=protected-access
    collected: Dict[int, ChartElement] = defaultdict(
        lambda: ChartElement.zero(P.chart, P.params))
    for i, a_coeff in P.items():
        for j, b_coeff in Q.items():
            derivative = b_coeff
            for k in range(i + 1):
                if derivative.is_zero():
                    break
                collected[i - k + j] = (collected[i - k + j] +
                                        (a_coeff * derivative).scale(comb(i, k)))
                derivative = chart_algebra.apply_derivation(P.chart,
                                                            derivative)
    return DiffOp(P.chart, P.params, collected)


def commutator(P: DiffOp, Q: DiffOp) -> DiffOp:
    "[P, Q] = PQ - QP"
    # pylint: disable=invalid-name
    return op_compose(P, Q) - op_compose(Q, P)


def restrict_op(P: DiffOp, incl: chart_algebra.Inclusion) -> DiffOp:
    """Restrict an operator along an inclusion. Both proper inclusions
       send the chart derivation to d_3, so only coefficients move."""
    # pylint: disable=invalid-name
    if P.chart is not incl.source:
        raise err.ChartMismatchError(
            f"Operator on {P.chart.value} cannot be restricted along {incl}")
    if incl.is_identity:
        return P
    return DiffOp(incl.target, P.params,
                  {order: chart_algebra.restrict(coeff, incl)
                   for order, coeff in P.items()})


def ad_nilpotency_order(P: DiffOp, max_steps: int = 16) -> int:
    """Smallest n such that every n-fold iterated commutator
       [...[[P, a_1], a_2], ..., a_n] with coordinate multipliers a_k
       vanishes. For an operator of order m this is m + 1."""
    # pylint: disable=invalid-name
    multipliers = [DiffOp.multiplication(g) for g in
                   chart_algebra.coordinate_generators(P.chart, P.params)]
    current: List[DiffOp] = [P]
    for steps in range(0, max_steps + 1):
        current = [op for op in current if not op.is_zero()]
        if not current:
            return steps
        current = [commutator(op, mult) for op in current
                   for mult in multipliers]
    raise ValueError(
        f"Operator not ad-nilpotent within {max_steps} commutators.")


def format_operator(P: DiffOp) -> str:
    "'(coeff)*d^j + ...' in descending order of d"
    # pylint: disable=invalid-name
    if P.is_zero():
        return '0'
    pieces = list()
    for order, coeff in sorted(P.items(), reverse=True):
        text = f"({chart_algebra.format_element(coeff)})"
        if order == 1:
            text += '*d'
        elif order > 1:
            text += f"*d^{order}"
        pieces.append(text)
    return ' + '.join(pieces)
