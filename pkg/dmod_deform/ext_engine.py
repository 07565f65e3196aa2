#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Ext groups of the chart rings over their rings of differential operators.
~~~~~~~~~~~~~~~~~~~~~
The free resolution 0 <- A_i <- D_i <-(*d_i)- D_i <- 0 gives
Ext^1_{D_i}(A_i, A_j) = coker(d: A_j -> A_j) and Hom = ker(d). Both are
computed by truncated exact linear algebra: the image of d on all
monomials up to degree d + margin is row reduced with columns in
descending graded order, so every pivot is the leading monomial of an
image element. The non-pivot monomials of degree <= d represent the
cokernel.
"""
# standard library:
from dataclasses import dataclass
from fractions import Fraction
import functools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from dmod_deform import chart_algebra
from dmod_deform import err
from dmod_deform import linear_algebra
from dmod_deform.chart_algebra import (ChartElement, ChartId, CurveParams,
                                       Inclusion, Monomial, MonomialOrder)

Coordinates = Tuple[Fraction, ...]


@dataclass(frozen=True)
class ExtSettings:
    """Truncation policy: start degree, step, hard cap and the margin of
       extra source degrees used to capture image elements."""
    start: int = 8
    step: int = 2
    cap: int = 40
    margin: int = 4

    def __post_init__(self) -> None:
        if self.start < 0 or self.step < 1 or self.margin < 0:
            raise ValueError('Invalid truncation policy.')
        if self.cap < self.start:
            raise ValueError('The degree cap must not be below the start.')

    def widened(self, extra: int = 2) -> 'ExtSettings':
        "Same policy with a truncation window widened by `extra`."
        return ExtSettings(self.start + extra, self.step,
                           self.cap + extra, self.margin + extra)


class _Truncation:
    "Row reduced image of the derivation on box(degree + margin)."
    # pylint: disable=too-few-public-methods

    def __init__(self,
                 chart: ChartId,
                 params: CurveParams,
                 degree: int,
                 margin: int,
                 order: MonomialOrder) -> None:
        self.chart = chart
        self.params = params
        self.degree = degree
        self.order = order
        self.sources = chart_algebra.monomial_box(chart, degree + margin,
                                                  order)
        self.images = [
            chart_algebra.apply_derivation(
                chart, ChartElement(chart, params, {mono: Fraction(1)}))
            for mono in self.sources]
        support = set(chart_algebra.monomial_box(chart, degree, order))
        for image in self.images:
            support.update(image.monomials())
        self.columns: List[Monomial] = sorted(
            support,
            key=lambda m: chart_algebra.monomial_key(chart, m, order),
            reverse=True)
        self.index: Dict[Monomial, int] = {
            mono: k for k, mono in enumerate(self.columns)}
        rows = [self.vector(image) for image in self.images]
        self.echelon, self.pivots = linear_algebra.row_reduce(
            rows, len(self.columns))
        leading = {self.columns[p] for p in self.pivots}
        self.standard: Tuple[Monomial, ...] = tuple(
            mono for mono in chart_algebra.monomial_box(chart, degree, order)
            if mono not in leading)
        logging.debug('%s truncated at degree %s: %s sources, %s columns, ' +
                      '%s standard monomials', chart.value, degree,
                      len(self.sources), len(self.columns),
                      len(self.standard))

    def vector(self, u: ChartElement) -> linear_algebra.SparseVector:
        return {self.index[mono]: coeff for mono, coeff in u.items()}

    def remainder(self, g: ChartElement) -> Dict[Monomial, Fraction]:
        "g modulo the truncated image, supported on standard monomials."
        reduced = linear_algebra.reduce_vector(
            self.vector(g), self.echelon, self.pivots)
        return {self.columns[k]: v for k, v in reduced.items()}

    def preimage(self, g: ChartElement) -> Optional[ChartElement]:
        "Some p in span(sources) with d(p) = g, or None."
        columns = [self.vector(image) for image in self.images]
        solution = linear_algebra.solve(columns, self.vector(g),
                                        len(self.columns))
        if solution is None:
            return None
        return ChartElement(self.chart, self.params,
                            {self.sources[k]: v
                             for k, v in solution.items()})


@functools.lru_cache(maxsize=256)
def _truncation(chart: ChartId,
                params: CurveParams,
                degree: int,
                margin: int,
                order: MonomialOrder) -> _Truncation:
    return _Truncation(chart, params, degree, margin, order)


class Ext1Space:
    """Ext^1_{D_i}(A_i, A_j) for an inclusion U_i ⊇ U_j, realized as the
       cokernel of the derivation of the chart U_j."""
    # pylint: disable=too-many-arguments

    def __init__(self,
                 pair: Inclusion,
                 params: CurveParams,
                 settings: ExtSettings,
                 order: MonomialOrder,
                 basis_monomials: Sequence[Monomial],
                 stabilization_degree: int) -> None:
        self.pair = pair
        self.params = params
        self.settings = settings
        self.order = order
        self.basis_monomials: Tuple[Monomial, ...] = tuple(basis_monomials)
        self.basis: Tuple[ChartElement, ...] = tuple(
            ChartElement(self.chart, params, {mono: Fraction(1)})
            for mono in self.basis_monomials)
        self.stabilization_degree = stabilization_degree
        self._position = {mono: k for k, mono
                          in enumerate(self.basis_monomials)}

    @property
    def chart(self) -> ChartId:
        "The chart whose ring carries the cokernel."
        return self.pair.target

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _truncation_for(self, g: ChartElement) -> _Truncation:
        degree = max(self.stabilization_degree, g.degree())
        return _truncation(self.chart, self.params, degree,
                           self.settings.margin, self.order)

    def reduce(self, g: ChartElement) -> Coordinates:
        "Coordinates of the class of g in the basis."
        if g.chart is not self.chart:
            raise err.ChartMismatchError(
                f"Element of {g.chart.value} reduced in Ext space on " +
                f"{self.chart.value}")
        remainder = self._truncation_for(g).remainder(g)
        coordinates = [Fraction(0)] * self.dim
        for mono, value in remainder.items():
            if mono not in self._position:
                msg = (f"Remainder monomial {mono} of {g} is not a basis " +
                       f"monomial of Ext^1 for {self.pair}")
                logging.error(msg)
                raise err.StabilizationFailure(msg)
            coordinates[self._position[mono]] = value
        return tuple(coordinates)

    def combination(self, coordinates: Sequence[Fraction]) -> ChartElement:
        "The element sum_k c_k * basis_k."
        result = ChartElement.zero(self.chart, self.params)
        for coeff, element in zip(coordinates, self.basis):
            result = result + element.scale(coeff)
        return result

    def preimage(self, g: ChartElement) -> Optional[ChartElement]:
        "See derivation_preimage."
        truncation = self._truncation_for(g)
        found = truncation.preimage(g)
        if found is not None:
            return found
        if any(self.reduce(g)):
            return None
        msg = (f"{g} reduces to zero in Ext^1 for {self.pair} but no " +
               "preimage was found in the truncation window.")
        logging.error(msg)
        raise err.StabilizationFailure(msg)

    def __repr__(self) -> str:
        return f"Ext1Space({self.pair}, dim={self.dim})"


# #############################################################################
# OPERATIONS
# #############################################################################

def ext1(pair: Inclusion,
         params: CurveParams,
         settings: ExtSettings = ExtSettings(),
         order: MonomialOrder = MonomialOrder.GRLEX) -> Ext1Space:
    """Compute a basis of coker(d) on the ring of pair.target.
       Accept once dimension and representatives stayed unchanged over two
       consecutive increments of the truncation degree."""
    history: List[Tuple[Monomial, ...]] = list()
    degree = settings.start
    while degree <= settings.cap:
        standard = _truncation(pair.target, params, degree,
                               settings.margin, order).standard
        history.append(standard)
        logging.debug('Ext^1 for %s at degree %s: dimension %s',
                      pair, degree, len(standard))
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            logging.info('Ext^1 for %s stabilized at degree %s ' +
                         'with dimension %s', pair, degree, len(standard))
            return Ext1Space(pair, params, settings, order, standard, degree)
        degree += settings.step
    msg = (f"Ext^1 for {pair} did not stabilize below degree " +
           f"{settings.cap}.")
    logging.error(msg)
    raise err.StabilizationFailure(msg)


def ext1_reduce(g: ChartElement, space: Ext1Space) -> Coordinates:
    "Coordinates of g modulo the image of the derivation."
    return space.reduce(g)


def derivation_preimage(g: ChartElement,
                        chart: ChartId,
                        settings: ExtSettings = ExtSettings()
                        ) -> Optional[ChartElement]:
    """An element p with d(p) = g exactly, or None if g is not in the
       image. The returned preimage has no constant term."""
    if g.chart is not chart:
        raise err.ChartMismatchError(
            f"Element of {g.chart.value} given for chart {chart.value}")
    if g.is_zero():
        return g
    space = ext1(Inclusion(chart, chart), g.params, settings)
    return space.preimage(g)


def induced_map(source: Ext1Space,
                target: Ext1Space,
                incl: Inclusion) -> List[List[Fraction]]:
    """Matrix (rows = target coordinates) of the map induced by restriction
       along incl, column k being the reduced image of basis element k."""
    if incl.source is not source.chart or incl.target is not target.chart:
        raise err.ChartMismatchError(
            f"{incl} does not connect {source.pair} and {target.pair}")
    columns = [target.reduce(chart_algebra.restrict(element, incl))
               for element in source.basis]
    return [[column[r] for column in columns] for r in range(target.dim)]


def coordinate_matrix(space: Ext1Space,
                      elements: Sequence[ChartElement]
                      ) -> List[Coordinates]:
    "Reduced coordinates of several elements, one row each."
    return [space.reduce(element) for element in elements]


def is_basis(space: Ext1Space, elements: Sequence[ChartElement]) -> bool:
    "Check whether the classes of the elements form a basis."
    if len(elements) != space.dim:
        return False
    rows = [linear_algebra.sparse(row)
            for row in coordinate_matrix(space, elements)]
    return linear_algebra.rank(rows, space.dim) == space.dim


CLOSED_FORM_BASES = {
    'a_nonzero': {ChartId.U1: ('1', 'z', 'z^2', 'z^3'),
                  ChartId.U2: ('1', 'y^2'),
                  ChartId.U3: ('x^2*y^-1', '1', 'y^-1', 'y^-2', 'y^-3')},
    'a_zero': {ChartId.U1: ('1', 'z', 'x', 'x*z'),
               ChartId.U2: ('1', 'x'),
               ChartId.U3: ('x^2*y^-1', '1', 'y^-1', 'x', 'x*y^-1')}}


def closed_form_basis(pair: Inclusion,
                      params: CurveParams) -> List[ChartElement]:
    "Known cokernel bases, depending on whether a vanishes."
    texts = CLOSED_FORM_BASES[params.regime][pair.target]
    return [chart_algebra.parse_element(text, pair.target, params)
            for text in texts]


def ext0(chart: ChartId,
         params: CurveParams,
         settings: ExtSettings = ExtSettings()) -> List[ChartElement]:
    """Hom_{D_i}(A_i, A_i) = ker(d) on the chart, truncated at the start
       degree of the policy. Only the constants survive."""
    sources = chart_algebra.monomial_box(chart, settings.start)
    images = [chart_algebra.apply_derivation(
        chart, ChartElement(chart, params, {mono: Fraction(1)}))
        for mono in sources]
    support = sorted({mono for image in images for mono in image.monomials()},
                     key=lambda m: chart_algebra.monomial_key(chart, m))
    index = {mono: k for k, mono in enumerate(support)}
    # rows are target monomials, columns the sources
    rows: List[linear_algebra.SparseVector] = [dict() for _ in support]
    for k, image in enumerate(images):
        for mono, coeff in image.items():
            rows[index[mono]][k] = coeff
    return [ChartElement(chart, params,
                         {sources[k]: v for k, v in vector.items()})
            for vector in linear_algebra.kernel(rows, len(sources))]
