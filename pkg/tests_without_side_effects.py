#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Automatic Tests for dmod_deform

! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! !  ! ! ! ! ! ! ! ! !
There are two groups of automatic tests for dmod_deform:
* Tests without side-effects: the algebra, the Ext groups, the cover
  cohomology and the deformation engine. Pure computations.
* Tests with side-effects: command line, corpus files and report files.

This file contains the tests without side effects.
! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! ! !  ! ! ! ! ! ! ! ! !

All equalities are exact. The two curves used throughout are
y^2 = x^3 + x + 1 (a != 0, discriminant 31) and y^2 = x^3 + 1 (a = 0).

To run only these tests here:
coverage run --source dmod_deform -m pytest tests_without_side_effects.py
To generate a report limited to that run afterwards:
coverage html
"""

from fractions import Fraction
import functools
import itertools
import json
import logging
import random
import re

logging.basicConfig(level=logging.DEBUG)

import pytest

from dmod_deform import chart_algebra
from dmod_deform import corpus_manager
from dmod_deform import cover_cohomology
from dmod_deform import deformation_engine
from dmod_deform import diffop
from dmod_deform import err
from dmod_deform import ext_engine
from dmod_deform import linear_algebra
from dmod_deform import pipeline
from dmod_deform import report_manager
from dmod_deform import run_config
from dmod_deform import time_manager
from dmod_deform import truncated_algebra
from dmod_deform.chart_algebra import (ChartElement, ChartId, CurveParams,
                                       MonomialOrder)
from dmod_deform.diffop import DiffOp
from dmod_deform.truncated_algebra import Relation, TruncatedAlgebra

U1, U2, U3 = ChartId.U1, ChartId.U2, ChartId.U3

A_NONZERO = CurveParams(1, 1)
A_ZERO = CurveParams(0, 1)
BOTH_REGIMES = [A_NONZERO, A_ZERO]


def el(text: str, chart: ChartId, params: CurveParams) -> ChartElement:
    return chart_algebra.parse_element(text, chart, params)


@functools.lru_cache(maxsize=None)
def diagram_for(params: CurveParams) -> cover_cohomology.CoverDiagram:
    return cover_cohomology.build_diagram(params)


@functools.lru_cache(maxsize=None)
def reps_for(params: CurveParams):
    return tuple(cover_cohomology.lift_to_cochain(xi)
                 for xi in cover_cohomology.h0(diagram_for(params)))


# #############################################################################
# Rational numbers and curves
# #############################################################################

def test_parse_rational():
    assert chart_algebra.parse_rational('3/2') == Fraction(3, 2)
    assert chart_algebra.parse_rational('-4/6') == Fraction(-2, 3)
    assert chart_algebra.parse_rational(' 7 ') == Fraction(7)
    with pytest.raises(err.MonomialSyntaxError):
        chart_algebra.parse_rational('1/0')
    with pytest.raises(ValueError):
        chart_algebra.parse_rational('1.5')
    with pytest.raises(ValueError):
        chart_algebra.parse_rational('')
    assert chart_algebra.format_rational(Fraction(31)) == '31/1'
    assert chart_algebra.format_rational(Fraction(-2, 3)) == '-2/3'


def test_CurveParams():
    assert A_NONZERO.delta == 31
    assert A_NONZERO.regime == 'a_nonzero'
    assert A_ZERO.delta == 27
    assert A_ZERO.regime == 'a_zero'
    assert CurveParams('1/2', 0).a == Fraction(1, 2)
    with pytest.raises(err.SingularCurveError):
        CurveParams(0, 0)
    with pytest.raises(err.SingularCurveError) as excinfo:
        CurveParams(-3, 2)
    assert excinfo.value.exit_code == 2


def test_Inclusion():
    assert chart_algebra.U1_U3.label == 'U1>=U3'
    assert chart_algebra.U2_U2.is_identity
    with pytest.raises(ValueError):
        chart_algebra.Inclusion(U3, U1)
    with pytest.raises(ValueError):
        chart_algebra.Inclusion(U1, U2)


# #############################################################################
# Chart rings
# #############################################################################

def test_normal_forms():
    p = A_NONZERO
    # x^3 = z - axz^2 - bz^3 on U1
    assert ChartElement.monomial(U1, p, 3, 0) == el('z - x*z^2 - z^3', U1, p)
    # y^2 = x^3 + ax + b on U2
    assert ChartElement.monomial(U2, p, 0, 2) == el('x^3 + x + 1', U2, p)
    # x^3 = y^2 - ax - b on U3
    assert ChartElement.monomial(U3, p, 3, -1) == el('y - x*y^-1 - y^-1',
                                                     U3, p)
    with pytest.raises(ValueError):
        ChartElement(U2, p, {(0, 2): Fraction(1)})
    with pytest.raises(ValueError):
        ChartElement.monomial(U1, p, 0, -1)


def test_ChartElement_arithmetic():
    p = A_NONZERO
    u = el('x + y^-1', U3, p)
    v = el('x - y^-1', U3, p)
    assert u * v == el('x^2 - y^-2', U3, p)
    assert u + v == 2 * ChartElement.monomial(U3, p, 1, 0)
    assert (u - u).is_zero()
    assert (u ** 0) == ChartElement.constant(U3, p)
    assert u.degree() == 1
    assert ChartElement.zero(U3, p).degree() == -1
    with pytest.raises(err.ChartMismatchError):
        _ = u + ChartElement.constant(U2, p)


@pytest.mark.parametrize('chart', chart_algebra.CHARTS)
def test_ring_axioms(chart):
    p = A_NONZERO
    box = [ChartElement(chart, p, {m: Fraction(1)})
           for m in chart_algebra.monomial_box(chart, 3)]
    for u, v, w in itertools.islice(itertools.product(box, repeat=3), 400):
        assert (u * v) * w == u * (v * w)
        assert u * (v + w) == u * v + u * w
        assert u * v == v * u


def test_monomial_box():
    assert len(chart_algebra.monomial_box(U1, 10)) == 30
    assert len(chart_algebra.monomial_box(U2, 10)) == 21
    assert len(chart_algebra.monomial_box(U3, 10)) == 57
    assert chart_algebra.monomial_box(U2, 0) == [(0, 0)]
    with pytest.raises(ValueError):
        chart_algebra.monomial_box(U1, -1)
    reversed_box = chart_algebra.monomial_box(
        U3, 4, MonomialOrder.GRLEX_REVERSED)
    assert set(reversed_box) == set(chart_algebra.monomial_box(U3, 4))
    # 1, x, y, x^2, xy
    assert chart_algebra.monomial_box(U2, 2) == \
        [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)]
    # 1, x, y, y^-1
    assert set(chart_algebra.monomial_box(U3, 1)) == \
        {(0, 0), (1, 0), (0, 1), (0, -1)}


@pytest.mark.parametrize('order', list(MonomialOrder))
@pytest.mark.parametrize('chart', chart_algebra.CHARTS)
def test_monomial_box_grows_by_appending(chart, order):
    for d in range(0, 9):
        smaller = chart_algebra.monomial_box(chart, d, order)
        larger = chart_algebra.monomial_box(chart, d + 1, order)
        assert larger[:len(smaller)] == smaller
        assert len(larger) > len(smaller)


@pytest.mark.parametrize('params', BOTH_REGIMES)
@pytest.mark.parametrize('chart', chart_algebra.CHARTS)
def test_chart_reduce_is_idempotent(chart, params):
    raw = [((7, 2), Fraction(3)), ((4, 5), Fraction(-1, 2)),
           ((0, 3), Fraction(2)), ((2, 1), Fraction(5))]
    reduced = chart_algebra.chart_reduce(raw, chart, params)
    assert all(chart_algebra.is_normal_monomial(chart, m)
               for m, _ in reduced.items())
    assert chart_algebra.chart_reduce(list(reduced.items()), chart,
                                      params) == reduced
    for mono in chart_algebra.monomial_box(chart, 5):
        u = ChartElement(chart, params, {mono: Fraction(2)})
        assert chart_algebra.chart_reduce(list(u.items()), chart,
                                          params) == u
    assert chart_algebra.chart_reduce([], chart, params).is_zero()


@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_derivation_kills_the_relation(params):
    # d(x^3) computed on the reduced form equals 3x^2 d(x)
    for chart in (U1, U3):
        x = ChartElement.monomial(chart, params, 1, 0)
        cube = ChartElement.monomial(chart, params, 3, 0)
        assert chart_algebra.apply_derivation(chart, cube) == \
            3 * x * x * chart_algebra.apply_derivation(chart, x)
    y = ChartElement.monomial(U2, params, 0, 1)
    square = ChartElement.monomial(U2, params, 0, 2)
    assert chart_algebra.apply_derivation(U2, square) == \
        2 * y * chart_algebra.apply_derivation(U2, y)


@pytest.mark.parametrize('chart', chart_algebra.CHARTS)
def test_derivation_leibniz(chart):
    p = A_NONZERO
    box = [ChartElement(chart, p, {m: Fraction(1)})
           for m in chart_algebra.monomial_box(chart, 4)]
    d = functools.partial(chart_algebra.apply_derivation, chart)
    for u, v in itertools.product(box, repeat=2):
        assert d(u * v) == d(u) * v + u * d(v)


@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_restriction_is_ring_homomorphism(params):
    for incl in chart_algebra.PROPER_INCLUSIONS:
        box = [ChartElement(incl.source, params, {m: Fraction(1)})
               for m in chart_algebra.monomial_box(incl.source, 4)]
        for u, v in itertools.product(box, repeat=2):
            assert chart_algebra.restrict(u * v, incl) == \
                chart_algebra.restrict(u, incl) * \
                chart_algebra.restrict(v, incl)
    # f_1 restricts to zero
    substituted = [((i, -(i + j)), c) for (i, j), c in
                   chart_algebra.chart_relation(U1, params)]
    assert chart_algebra.chart_reduce(substituted, U3, params).is_zero()


@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_restriction_commutes_with_derivation(params):
    for incl in chart_algebra.PROPER_INCLUSIONS:
        for mono in chart_algebra.monomial_box(incl.source, 10):
            u = ChartElement(incl.source, params, {mono: Fraction(1)})
            assert chart_algebra.restrict(
                chart_algebra.apply_derivation(incl.source, u), incl) == \
                chart_algebra.apply_derivation(
                    U3, chart_algebra.restrict(u, incl))


def test_restrict_examples():
    p = A_NONZERO
    z = ChartElement.monomial(U1, p, 0, 1)
    assert chart_algebra.restrict(z * z, chart_algebra.U1_U3) == \
        el('y^-2', U3, p)
    with pytest.raises(err.ChartMismatchError):
        chart_algebra.restrict(z, chart_algebra.U2_U3)


def test_parse_and_format_element():
    p = A_NONZERO
    u = el('15*y^2 - 31*y^-2', U3, p)
    assert chart_algebra.format_element(u) == '15*y^2 - 31*y^-2'
    assert chart_algebra.format_element(el('-4*x^2*y^-1 + 3/2', U3, p)) == \
        '-4*x^2*y^-1 + 3/2'
    assert chart_algebra.format_element(ChartElement.zero(U1, p)) == '0'
    assert el('(x + 1)^2', U2, p) == el('x^2 + 2*x + 1', U2, p)
    for text in ('x^2 + w', 'y', 'x^(1/2)', '', 'x +* 2'):
        with pytest.raises(err.MonomialSyntaxError):
            el(text, U1, p)
    with pytest.raises(ValueError):
        el('y^-1', U2, p)
    assert el('x**2 + y^(-1)', U3, p) == el('x^2 + y^-1', U3, p)


@pytest.mark.parametrize('text', [
    'x^9^9^9',
    'x^99^9',
    'x**2**3',
    'x^(2)^3',
    '((x + 1)^8)^8',
    'x^65',
    'x^z',
    '2^x',
])
def test_parse_element_rejects_unbounded_powers(text):
    with pytest.raises(err.MonomialSyntaxError):
        el(text, U1, A_NONZERO)


# #############################################################################
# Linear algebra
# #############################################################################

def test_linear_algebra():
    rows = [{0: Fraction(1), 1: Fraction(2)}, {0: Fraction(2), 1: Fraction(4)},
            {2: Fraction(3)}]
    assert linear_algebra.rank(rows, 3) == 2
    echelon, pivots = linear_algebra.row_reduce(rows, 3)
    assert pivots == (0, 2)
    assert linear_algebra.reduce_vector({0: Fraction(1)}, echelon, pivots) == \
        {1: Fraction(-2)}
    kernel = linear_algebra.kernel(rows, 3)
    assert kernel == [{1: Fraction(1), 0: Fraction(-2)}]
    assert linear_algebra.row_reduce([], 3) == ([], ())
    columns = [{0: Fraction(1)}, {1: Fraction(1)}]
    assert linear_algebra.solve(columns, {0: Fraction(3)}, 2) == \
        {0: Fraction(3)}
    assert linear_algebra.solve(columns, {2: Fraction(1)}, 3) is None


# #############################################################################
# Differential operators
# #############################################################################

def test_DiffOp_composition():
    p = A_NONZERO
    d = DiffOp.derivation(U2, p)
    x = DiffOp.multiplication(ChartElement.monomial(U2, p, 1, 0))
    assert diffop.commutator(d, x) == DiffOp.multiplication(
        el('-2*y', U2, p))
    assert (d @ d).order == 2
    assert diffop.op_apply(d @ d, el('x', U2, p)) == el('6*x^2 + 2', U2, p)
    assert diffop.op_apply(DiffOp.identity(U2, p), el('y', U2, p)) == \
        el('y', U2, p)
    ops = [d, x, d @ x, x @ d @ d]
    for P, Q, R in itertools.product(ops, repeat=3):
        assert (P @ Q) @ R == P @ (Q @ R)
    with pytest.raises(err.ChartMismatchError):
        _ = d @ DiffOp.derivation(U3, p)


def test_ad_nilpotency_order():
    p = A_NONZERO
    d = DiffOp.derivation(U1, p)
    assert diffop.ad_nilpotency_order(DiffOp(U1, p)) == 0
    assert diffop.ad_nilpotency_order(
        DiffOp.multiplication(el('x*z', U1, p))) == 1
    assert diffop.ad_nilpotency_order(d) == 2
    assert diffop.ad_nilpotency_order(d @ d @ d) == 4


def test_restrict_op():
    p = A_ZERO
    assert diffop.restrict_op(DiffOp.derivation(U1, p),
                              chart_algebra.U1_U3) == \
        DiffOp.derivation(U3, p)
    op = DiffOp(U2, p, {0: el('y', U2, p), 2: el('x', U2, p)})
    assert diffop.restrict_op(op, chart_algebra.U2_U2) == op
    assert diffop.format_operator(op) == '(x)*d^2 + (y)'
    z_d1 = DiffOp(U1, p, {1: el('z', U1, p)})
    assert diffop.restrict_op(z_d1, chart_algebra.U1_U3) == \
        DiffOp(U3, p, {1: el('y^-1', U3, p)})


def random_operator(rng: random.Random,
                    chart: ChartId,
                    params: CurveParams) -> DiffOp:
    "Operator of order <= 2 with small coefficients of degree <= 2."
    box = chart_algebra.monomial_box(chart, 2)
    coefficients = dict()
    for order in range(3):
        terms = {mono: Fraction(rng.randint(-3, 3), rng.randint(1, 2))
                 for mono in rng.sample(box, 2)}
        coefficients[order] = ChartElement(chart, params, terms)
    return DiffOp(chart, params, coefficients)


@pytest.mark.parametrize('seed', range(4))
@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_op_apply_respects_composition(params, seed):
    rng = random.Random(seed)
    first = random_operator(rng, U1, params)
    second = random_operator(rng, U1, params)
    composed = diffop.op_compose(first, second)
    for mono in chart_algebra.monomial_box(U1, 6):
        u = ChartElement(U1, params, {mono: Fraction(1)})
        assert diffop.op_apply(composed, u) == \
            diffop.op_apply(first, diffop.op_apply(second, u))


@pytest.mark.parametrize('seed', range(4))
@pytest.mark.parametrize('incl', chart_algebra.PROPER_INCLUSIONS, ids=str)
def test_restricted_operator_acts_on_restrictions(incl, seed):
    rng = random.Random(seed)
    op = random_operator(rng, incl.source, A_NONZERO)
    restricted = diffop.restrict_op(op, incl)
    for mono in chart_algebra.monomial_box(incl.source, 6):
        u = ChartElement(incl.source, A_NONZERO, {mono: Fraction(1)})
        on_target = chart_algebra.restrict(u, incl)
        assert diffop.op_apply(restricted, on_target) == \
            chart_algebra.restrict(diffop.op_apply(op, u), incl)


# #############################################################################
# Ext groups
# #############################################################################

@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_ext1_dimensions(params):
    assert diagram_for(params).dims() == (4, 2, 5, 5, 5)


@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_closed_form_bases(params):
    diagram = diagram_for(params)
    for incl in chart_algebra.INCLUSIONS:
        space = diagram.space(incl)
        assert ext_engine.is_basis(
            space, ext_engine.closed_form_basis(incl, params))
        for k, element in enumerate(space.basis):
            unit = [Fraction(0)] * space.dim
            unit[k] = Fraction(1)
            assert space.reduce(element) == tuple(unit)


def test_ext1_reduce_identities():
    space = diagram_for(A_NONZERO).space(chart_algebra.U3_U3)
    # 15 y^2 = delta y^-2
    assert space.reduce(el('15*y^2', U3, A_NONZERO)) == tuple(
        31 * c for c in space.reduce(el('y^-2', U3, A_NONZERO)))
    image = chart_algebra.apply_derivation(U3, el('y', U3, A_NONZERO))
    assert not any(ext_engine.ext1_reduce(image, space))
    space = diagram_for(A_ZERO).space(chart_algebra.U3_U3)
    # -3b x y^-2 = x
    assert space.reduce(el('-3*x*y^-2', U3, A_ZERO)) == \
        space.reduce(el('x', U3, A_ZERO))
    g = el('x^2*y^-1 + 5*y^3 - 7*x*y', U3, A_ZERO)
    remainder = g - space.combination(space.reduce(g))
    assert not any(space.reduce(remainder))


def test_derivation_preimage():
    g = el('15*y^2 - 31*y^-2', U3, A_NONZERO)
    preimage = ext_engine.derivation_preimage(g, U3)
    assert preimage is not None
    assert chart_algebra.apply_derivation(U3, preimage) == g
    assert preimage.coefficient((0, 0)) == 0
    g = el('x + 3*x*y^-2', U3, A_ZERO)
    preimage = ext_engine.derivation_preimage(g, U3)
    assert chart_algebra.apply_derivation(U3, preimage) == g
    assert ext_engine.derivation_preimage(
        ChartElement.constant(U3, A_NONZERO), U3) is None
    zero = ChartElement.zero(U3, A_NONZERO)
    assert ext_engine.derivation_preimage(zero, U3) == zero
    with pytest.raises(err.ChartMismatchError):
        ext_engine.derivation_preimage(g, U2)


def test_closed_form_tau_is_a_preimage():
    a, b = A_NONZERO.a, A_NONZERO.b
    tau = el(f"-4*{a}^2*y^-1 - 3*x*y + 9*{b}*x*y^-1 - 6*{a}*x^2*y^-1",
             U3, A_NONZERO)
    assert chart_algebra.apply_derivation(U3, tau) == \
        el('15*y^2 - 31*y^-2', U3, A_NONZERO)


def test_induced_map():
    diagram = diagram_for(A_NONZERO)
    source = diagram.space(chart_algebra.U2_U2)
    target = diagram.space(chart_algebra.U2_U3)
    matrix = ext_engine.induced_map(source, target, chart_algebra.U2_U3)
    assert len(matrix) == target.dim and len(matrix[0]) == source.dim
    # the image of y^2 is delta/15 times the class of y^-2
    y2 = el('y^2', U2, A_NONZERO)
    coords = source.reduce(y2)
    image = [sum((row[k] * coords[k] for k in range(source.dim)), Fraction(0))
             for row in matrix]
    assert tuple(image) == tuple(Fraction(31, 15) * c for c in
                                 target.reduce(el('y^-2', U3, A_NONZERO)))
    identity = ext_engine.induced_map(diagram.space(chart_algebra.U3_U3),
                                      target, chart_algebra.U3_U3)
    assert identity == [[Fraction(int(r == c)) for c in range(5)]
                        for r in range(5)]
    with pytest.raises(err.ChartMismatchError):
        ext_engine.induced_map(source, target, chart_algebra.U1_U3)


def test_ext1_stability():
    params = A_NONZERO
    for incl in chart_algebra.INCLUSIONS:
        space = diagram_for(params).space(incl)
        wider = ext_engine.ext1(incl, params, ext_engine.ExtSettings().widened())
        assert wider.basis_monomials == space.basis_monomials
        closed = ext_engine.closed_form_basis(incl, params)
        assert ext_engine.coordinate_matrix(wider, closed) == \
            ext_engine.coordinate_matrix(space, closed)
    permuted = cover_cohomology.build_diagram(
        params, order=MonomialOrder.GRLEX_REVERSED)
    assert permuted.dims() == (4, 2, 5, 5, 5)
    assert len(cover_cohomology.h0(permuted)) == 2
    assert len(cover_cohomology.h1(permuted)) == 1


def test_ext1_cap():
    with pytest.raises(err.StabilizationFailure):
        ext_engine.ext1(chart_algebra.U3_U3, A_NONZERO,
                        ext_engine.ExtSettings(start=4, step=2, cap=6))
    with pytest.raises(ValueError):
        ext_engine.ExtSettings(start=10, cap=8)


def test_ext0():
    for chart in chart_algebra.CHARTS:
        kernel = ext_engine.ext0(chart, A_NONZERO)
        assert len(kernel) == 1
        assert kernel[0].monomials() == [(0, 0)]


# #############################################################################
# Cover cohomology
# #############################################################################

@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_hochschild_dims(params):
    assert cover_cohomology.hochschild_dims(diagram_for(params)) == (1, 2, 1)


def test_h0_closed_forms():
    xi_1, xi_2 = cover_cohomology.h0(diagram_for(A_NONZERO))
    assert all(r == ChartElement.constant(r.chart, A_NONZERO)
               for r in xi_1.representatives)
    assert xi_2.representative(U1) == el('31*z^2', U1, A_NONZERO)
    assert xi_2.representative(U2) == el('15*y^2', U2, A_NONZERO)
    assert xi_2.representative(U3) == el('31*y^-2', U3, A_NONZERO)
    _, xi_2 = cover_cohomology.h0(diagram_for(A_ZERO))
    assert xi_2.representative(U1) == el('-3*x*z', U1, A_ZERO)
    assert xi_2.representative(U2) == el('x', U2, A_ZERO)
    for params in BOTH_REGIMES:
        for xi in cover_cohomology.h0(diagram_for(params)):
            values = {chart: xi.representative(chart)
                      for chart in chart_algebra.CHARTS}
            assert cover_cohomology.is_h0_cocycle(diagram_for(params), values)


@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_h1_omega(params):
    diagram = diagram_for(params)
    (omega, ) = cover_cohomology.h1(diagram)
    assert omega.label == 'omega'
    assert omega.representative(chart_algebra.U2_U3) == \
        cover_cohomology.closed_form_h1(params)
    assert omega.representative(chart_algebra.U1_U3).is_zero()
    assert not any(omega.components[0])
    # d0 has rank 9 on an 11-dimensional space
    assert linear_algebra.rank(diagram.d0_rows(), diagram.degree0_size()) == 9
    assert cover_cohomology.h1_coordinates(
        diagram, {chart_algebra.U2_U3: omega.representative(
            chart_algebra.U2_U3)}) == [Fraction(1)]
    # coboundaries have zero coordinates
    one = ChartElement.constant(U3, params)
    assert cover_cohomology.h1_coordinates(
        diagram, {chart_algebra.U1_U3: one,
                  chart_algebra.U2_U3: one}) == [Fraction(0)]


def test_lift_to_cochain():
    xi_1, xi_2 = reps_for(A_NONZERO)
    assert all(t.is_zero() for t in xi_1.tau.values())
    assert xi_2.tau[chart_algebra.U1_U3].is_zero()
    assert xi_2.tau[chart_algebra.U2_U3] == el(
        '-4*y^-1 - 3*x*y + 9*x*y^-1 - 6*x^2*y^-1', U3, A_NONZERO)
    _, xi_2 = reps_for(A_ZERO)
    assert xi_2.tau[chart_algebra.U1_U3] == el('x^2*y^-1', U3, A_ZERO)
    assert xi_2.tau[chart_algebra.U2_U3].is_zero()
    for params in BOTH_REGIMES:
        assert all(rep.is_cocycle() for rep in reps_for(params))
    omega = cover_cohomology.h1(diagram_for(A_ZERO))[0]
    with pytest.raises(ValueError):
        cover_cohomology.lift_to_cochain(omega)


# #############################################################################
# Truncated algebras
# #############################################################################

def test_algebra_basis():
    free = TruncatedAlgebra(2, 2, Relation.FREE)
    assert truncated_algebra.algebra_basis(free) == [
        (), (0, ), (1, ), (0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(TruncatedAlgebra(2, 2, Relation.COMMUTATOR).basis()) == 6
    assert TruncatedAlgebra(2, 0).basis() == [()]
    with pytest.raises(ValueError):
        TruncatedAlgebra(0, 2)
    assert truncated_algebra.format_word((0, 1)) == 't1*t2'
    assert truncated_algebra.parse_word('t2*t1') == (1, 0)
    assert truncated_algebra.parse_word('1') == ()
    with pytest.raises(ValueError):
        truncated_algebra.parse_word('t0')


@pytest.mark.parametrize('order', [1, 2, 3, 4])
@pytest.mark.parametrize('relation', [Relation.FREE, Relation.COMMUTATOR])
def test_algebra_associativity(order, relation):
    algebra = TruncatedAlgebra(2, order, relation)

    def mul(u, v):
        if u is None or v is None:
            return None
        return algebra.multiply(u, v)

    basis = algebra.basis()
    for u, v, w in itertools.product(basis, repeat=3):
        assert mul(mul(u, v), w) == mul(u, mul(v, w))


def test_commutator_rewriting_confluence():
    def all_normal_forms(word):
        steps = [truncated_algebra.rewrite_at(word, k)
                 for k in range(len(word))]
        steps = [s for s in steps if s is not None]
        if not steps:
            return {word}
        found = set()
        for step in steps:
            found |= all_normal_forms(step)
        return found

    for length in range(5):
        for word in itertools.product(range(2), repeat=length):
            assert all_normal_forms(word) == {tuple(sorted(word))}
            assert truncated_algebra.rewrite_normal_form(word) == \
                tuple(sorted(word))


def test_commutative_witness():
    assert truncated_algebra.is_commutative_witness(
        TruncatedAlgebra(2, 4, Relation.COMMUTATOR))
    assert not truncated_algebra.is_commutative_witness(
        TruncatedAlgebra(2, 2, Relation.FREE))
    mapping = truncated_algebra.commutative_monomial_bijection(
        TruncatedAlgebra(2, 3, Relation.COMMUTATOR))
    assert mapping[(0, 1, 1)] == (1, 2)


# #############################################################################
# Deformation engine
# #############################################################################

@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_tangent_family(params):
    data = deformation_engine.build_tangent_family(reps_for(params))
    report = deformation_engine.check_deformation(data)
    assert report.ok
    assert report.evaluations > 0
    assert data.residue_is_classical()
    xi_2 = reps_for(params)[1]
    assert data.derivations[U2].term((1, )) == \
        DiffOp.multiplication(xi_2.xi[U2])
    assert data.lift_operator(DiffOp.multiplication(el('x', U2, params))) == \
        data.multiplier(el('x', U2, params))


def test_exponential_family_terms():
    reps = reps_for(A_ZERO)
    data = deformation_engine.build_exponential_family(reps, 2)
    restriction = data.restrictions[chart_algebra.U1_U3]
    # (x^2 y^-1)^2 / 2 on t2^2
    assert restriction.multipliers[(1, 1)] == \
        el('x^4*y^-2', U3, A_ZERO).scale(Fraction(1, 2))
    assert restriction.multipliers[(1, )] == el('x^2*y^-1', U3, A_ZERO)
    plain = data.restrictions[chart_algebra.U2_U3]
    assert plain.multipliers == {(): ChartElement.constant(U3, A_ZERO)}
    order_one = deformation_engine.build_exponential_family(reps, 1)
    tangent = deformation_engine.build_tangent_family(reps)
    assert order_one.restrictions == tangent.restrictions
    assert order_one.derivations == tangent.derivations
    with pytest.raises(ValueError):
        deformation_engine.build_exponential_family(reps, 0)


@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_commutator_is_necessary_and_sufficient(params):
    reps = reps_for(params)
    free = deformation_engine.build_exponential_family(reps, 2, Relation.FREE)
    report = deformation_engine.check_deformation(free, 6)
    assert not report.ok
    assert report.violations == report.for_condition(2)
    for violation in report.violations:
        assert violation.operator == 'd'
        assert violation.support() == [(0, 1), (1, 0)]
        assert violation.defect[(0, 1)] == -violation.defect[(1, 0)]
    commutative = deformation_engine.build_exponential_family(
        reps, 2, Relation.COMMUTATOR)
    assert deformation_engine.check_deformation(commutative, 6).ok
    assert deformation_engine.check_chain_compatibility(free) == []


def test_exponential_family_high_order():
    data = deformation_engine.build_exponential_family(reps_for(A_NONZERO), 6)
    assert deformation_engine.check_deformation(data, 4).ok
    assert data.residue_is_classical()


@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_cup_products(params):
    cups = deformation_engine.cup_products(reps_for(params),
                                           diagram_for(params))
    assert cups.is_antisymmetric()
    assert cups.coefficient((0, 1)) == -cups.coefficient((1, 0))
    assert cups.coefficient((0, 1)) != 0
    assert cups.coefficient((0, 0)) == 0
    assert cups.coefficient((1, 1)) == 0
    assert cups.scale == cups.coefficient((0, 1))
    assert deformation_engine.format_series(
        cups.quadratic_relations()[0]) == 't1*t2 - t2*t1'


def test_cup_products_of_diagonal_pair():
    xi_1 = reps_for(A_NONZERO)[0]
    cups = deformation_engine.cup_products((xi_1, xi_1),
                                           diagram_for(A_NONZERO))
    assert all(not any(v) for v in cups.coefficients.values())
    assert cups.quadratic_relations() == []


@pytest.mark.parametrize('params', BOTH_REGIMES)
def test_compute_hull(params):
    hull, family = deformation_engine.compute_hull(
        params, 6, check_bound=6, diagram=diagram_for(params))
    assert hull.relation_strings() == ['t1*t2 - t2*t1']
    assert hull.order_verified == 6
    assert hull.relation is Relation.COMMUTATOR
    assert hull.commutative_witness
    assert hull.generators == ('t1', 't2')
    assert family.algebra == TruncatedAlgebra(2, 5, Relation.COMMUTATOR)


def test_compute_hull_low_orders():
    hull, family = deformation_engine.compute_hull(
        A_NONZERO, 2, diagram=diagram_for(A_NONZERO))
    assert hull.relations == []
    assert hull.order_verified == 2
    assert family.algebra.order == 1
    with pytest.raises(ValueError):
        deformation_engine.compute_hull(A_NONZERO, 1)


def test_act_on_lifting():
    reps = reps_for(A_NONZERO)
    data = deformation_engine.build_exponential_family(reps, 2)
    moved = deformation_engine.act_on_lifting(data, reps[1], (0, 1))
    assert moved.derivations[U2] != data.derivations[U2]
    assert moved.residue_is_classical()
    assert deformation_engine.check_deformation(moved, 6).ok
    with pytest.raises(ValueError):
        deformation_engine.act_on_lifting(data, reps[1], (0, ))


def test_broken_data_is_reported():
    reps = reps_for(A_NONZERO)
    data = deformation_engine.build_tangent_family(reps)
    # a restriction that forgets tau violates condition (2)
    broken = dict(data.restrictions)
    broken[chart_algebra.U2_U3] = deformation_engine.RestrictionMap.plain(
        chart_algebra.U2_U3, A_NONZERO, data.algebra)
    data.restrictions = broken
    report = deformation_engine.check_deformation(data, 2)
    assert not report.ok
    assert {v.location for v in report.violations} == {'U2>=U3'}
    assert 'condition (2)' in str(report.violations[0])


# #############################################################################
# Configuration and timing
# #############################################################################

def test_RunConfig():
    config = run_config.RunConfig.from_dict({'a': '1', 'b': '1'})
    assert config.order == 6
    assert config.check_bound == 10
    assert config.ext_settings == ext_engine.ExtSettings()
    assert config.params.delta == 31
    config = run_config.RunConfig.from_dict({'a': '0', 'b': '0'})
    with pytest.raises(err.SingularCurveError):
        _ = config.params
    with pytest.raises(ValueError):
        run_config.RunConfig.from_dict({'a': 1, 'b': 1, 'colour': 'red'})
    with pytest.raises(ValueError):
        run_config.RunConfig.from_dict({'a': 1, 'b': 1, 'order': 0})
    with pytest.raises(ValueError):
        run_config.RunConfig.from_dict({'a': 1, 'b': 1,
                                        'output_format': 'xml'})
    with pytest.raises(ValueError):
        run_config.RunConfig.from_dict({'a': 1, 'b': 1, 'subcommand': 'x'})
    with pytest.raises(ValueError):
        run_config.RunConfig.from_dict(None)
    with pytest.raises(ValueError):
        _ = run_config.RunConfig.from_dict({}).params
    # out of range falls back to the default
    assert run_config.RunConfig.from_dict(
        {'a': 1, 'b': 1, 'stab_step': 0}).stab_step == 2
    assert run_config.RunConfig.from_dict(
        {'a': 1, 'b': 1, 'stab_cap': 500}).stab_cap == 40
    # booleans are not orders
    with pytest.raises(ValueError):
        run_config.RunConfig.from_dict({'a': 1, 'b': 1, 'order': True})


def test_RunConfig_degree_cap():
    assert run_config.RunConfig.from_dict(
        {'a': 1, 'b': 1, 'stab_cap': 8}).stab_cap == 8
    # a cap below the first truncation degree is an error, not a fallback
    with pytest.raises(ValueError):
        run_config.RunConfig.from_dict({'a': 1, 'b': 1, 'stab_cap': 5})
    with pytest.raises(ValueError):
        run_config.RunConfig.from_dict({'a': 1, 'b': 1, 'stab_start': 12,
                                        'stab_cap': 10})
    assert run_config.RunConfig.from_dict(
        {'a': 1, 'b': 1, 'stab_start': 12}).stab_cap == 40


def test_TimeManager():
    timer = time_manager.TimeManager()
    timer.start_stage('ext')
    assert timer.stop_stage('ext') >= 0
    with pytest.raises(ValueError):
        timer.stop_stage('hull')
    with pytest.raises(ValueError):
        timer.start_stage('')
    timings = timer.as_dict()
    assert set(timings) == {'ext', 'total_wall', 'total_process'}


# #############################################################################
# Reports and corpus files
# #############################################################################

def test_serialization():
    report = {'b': Fraction(-2, 3), 'a': [Fraction(4), (1, 2)], 'ok': True,
              'none': None}
    text = report_manager.to_json(report)
    assert text == report_manager.to_json(dict(reversed(list(report.items()))))
    assert json.loads(text) == {'a': ['4/1', [1, 2]], 'b': '-2/3',
                                'ok': True, 'none': None}
    assert text.endswith('\n')
    lines = report_manager.to_text(report).splitlines()
    assert lines[0] == 'a:'
    assert 'ok: yes' in lines
    assert 'none: -' in lines
    with pytest.raises(ValueError):
        report_manager.serialize(report, 'yaml')


def chart_strings(report: dict):
    "(chart, text) for every chart element of an emitted 'all' report."
    def chart_of(key: str) -> ChartId:
        # inclusion labels 'U1>=U3' carry elements of the target chart
        return ChartId(key.split('>=')[-1])

    for label, space in report['ext1']['spaces'].items():
        for text in space['basis']:
            yield chart_of(label), text
    for degree in ('h0', 'h1'):
        for cls in report['cohomology'][degree]:
            for key, text in cls['representatives'].items():
                yield chart_of(key), text
    for part in ('psi', 'tau'):
        for components in report['family'][part].values():
            for key, text in components.items():
                yield chart_of(key), text


@pytest.mark.parametrize('a, b', [('1', '1'), ('0', '1')])
def test_report_strings_parse_back(a, b):
    config = run_config.RunConfig.from_dict(
        {'a': a, 'b': b, 'order': 3, 'check_bound': 4})
    report = json.loads(report_manager.to_json(
        pipeline.run_pipeline(config)))
    params = config.params
    seen = 0
    for chart, text in chart_strings(report):
        element = chart_algebra.parse_element(text, chart, params)
        assert chart_algebra.format_element(element) == text
        seen += 1
    # ext bases, h0 and h1 representatives, psi, tau on U1>=U3 and U2>=U3
    assert seen == 21 + 2 * 3 + 5 + 2 * 3 + 2 * 2
    for word in report['cup']['words']:
        assert truncated_algebra.format_word(
            truncated_algebra.parse_word(word)) == word
    for relation in report['hull']['relations']:
        for term in re.split(r' [+-] ', relation.lstrip('-')):
            word = re.sub(r'^[\d/]+\*', '', term)
            assert truncated_algebra.format_word(
                truncated_algebra.parse_word(word)) == word


def test_report_file_name():
    report = {'params': {'a': Fraction(-2, 3), 'b': Fraction(1)}, 'order': 4}
    assert report_manager.ReportManager.report_file_name(report) == \
        'report_m2over3_1over1_N4.json'
    assert report_manager.ReportManager.report_file_name(report, 'text') == \
        'report_m2over3_1over1_N4.txt'


# fs is a fixture provided by pyfakefs
def test_ReportManager_target_directory(fs):
    fs.create_file('/fake/example.file')
    # directory exists
    assert report_manager.ReportManager('/fake/').target_dir
    # directory does not exist
    with pytest.raises(FileNotFoundError):
        report_manager.ReportManager('/fake/nonexistent')
    # user supplied file instead of directory
    with pytest.raises(NotADirectoryError):
        report_manager.ReportManager('/fake/example.file')
    # no directory provided: fallback to cwd
    assert report_manager.ReportManager(None).target_dir
    assert report_manager.ReportManager(' ').target_dir


def test_ReportManager_write_report(fs):
    fs.create_dir('/reports')
    manager = report_manager.ReportManager('/reports')
    report = {'params': {'a': Fraction(1), 'b': Fraction(1)}, 'order': 2}
    path = manager.write_report(report, 'r.json')
    assert path.read_text(encoding='utf-8') == \
        report_manager.to_json(report)
    # overwriting leaves no temporary files behind
    manager.write_report(report, 'r.json')
    assert sorted(p.name for p in path.parent.iterdir()) == ['r.json']
    assert len(manager.get_file_hash(path)) == 64


def _light_runner(config: run_config.RunConfig) -> dict:
    return {'delta': config.params.delta, 'order': config.order}


def test_corpus(fs):
    fs.create_file('/corpus.txt', contents=(
        '# a b N\n'
        '1 1 2\n'
        '\n'
        '0 0 3\n'
        '-4/6 1 3\n'
        '1 1\n'
        '1 1 x\n'))
    entries = corpus_manager.read_corpus('/corpus.txt')
    assert [number for number, _ in entries] == [2, 4, 5, 6, 7]
    reports = corpus_manager.run_corpus('/corpus.txt', _light_runner)
    assert reports[0] == {'delta': 31, 'order': 2, 'line': 2,
                          'entry': '1 1 2'}
    # a singular entry does not stop the others
    assert reports[1]['error']['code'] == 'singular_curve'
    assert reports[2]['delta'] == Fraction(4 * -8, 27) + 27
    assert reports[3]['error']['code'] == 'syntax_error'
    assert reports[4]['error']['code'] == 'syntax_error'
    parallel = corpus_manager.run_corpus('/corpus.txt', _light_runner,
                                         workers=4)
    assert report_manager.to_json(parallel) == report_manager.to_json(reports)
    # base settings are kept
    config = corpus_manager.parse_entry('1 1 5', {'check_bound': 3})
    assert config.check_bound == 3 and config.order == 5


def test_empty_corpus(fs):
    fs.create_file('/empty.txt', contents='')
    assert corpus_manager.run_corpus('/empty.txt', _light_runner) == []
    with pytest.raises(FileNotFoundError):
        corpus_manager.read_corpus('/missing.txt')
