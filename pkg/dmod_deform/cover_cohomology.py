#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Cohomology of the Ext^1 functor over the cover {U1, U2, U3}.
~~~~~~~~~~~~~~~~~~~~~
Morphisms of the cover category are the five inclusions
U1⊇U1, U2⊇U2, U3⊇U3, U1⊇U3 and U2⊇U3. Cochains of degree 0 live on the
charts, cochains of degree 1 on the proper inclusions (the components
on identities are normalized to zero). The differential is

    d0(h1, h2, h3) = (h1|U3 - h3, h2|U3 - h3).

The spectral sequence degenerates, so HH^n = H^(n-1)(cover, Ext^1) for
n >= 1 and HH^0 is given by the global horizontal sections.
"""
# standard library:
from dataclasses import dataclass, field
from fractions import Fraction
import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from dmod_deform import chart_algebra
from dmod_deform import ext_engine
from dmod_deform import linear_algebra
from dmod_deform.chart_algebra import (ChartElement, ChartId, CurveParams,
                                       Inclusion, MonomialOrder)
from dmod_deform.ext_engine import Coordinates, Ext1Space, ExtSettings

CHARTS = chart_algebra.CHARTS
INCLUSIONS = chart_algebra.INCLUSIONS
PROPER_INCLUSIONS = chart_algebra.PROPER_INCLUSIONS
IDENTITY_OF = {chart: Inclusion(chart, chart) for chart in CHARTS}


class CoverDiagram:
    """The five Ext^1 spaces and the maps induced by restriction:
       U1⊇U1 -> U1⊇U3, U2⊇U2 -> U2⊇U3 and U3⊇U3 -> both."""
    # pylint: disable=too-few-public-methods

    def __init__(self,
                 params: CurveParams,
                 spaces: Mapping[Inclusion, Ext1Space],
                 maps: Mapping[Tuple[Inclusion, Inclusion],
                               List[List[Fraction]]],
                 settings: ExtSettings,
                 order: MonomialOrder) -> None:
        self.params = params
        self.spaces: Dict[Inclusion, Ext1Space] = dict(spaces)
        self.maps = dict(maps)
        self.settings = settings
        self.order = order

    def space(self, incl: Inclusion) -> Ext1Space:
        return self.spaces[incl]

    def chart_space(self, chart: ChartId) -> Ext1Space:
        "The space Ext^1(A_i, A_i) attached to the chart."
        return self.spaces[IDENTITY_OF[chart]]

    def dims(self) -> Tuple[int, ...]:
        "Dimensions in the order of INCLUSIONS."
        return tuple(self.spaces[incl].dim for incl in INCLUSIONS)

    def degree0_offsets(self) -> Dict[ChartId, int]:
        "Start of each chart block in a concatenated degree 0 vector."
        offsets = dict()
        position = 0
        for chart in CHARTS:
            offsets[chart] = position
            position += self.chart_space(chart).dim
        return offsets

    def degree1_offsets(self) -> Dict[Inclusion, int]:
        "Start of each proper inclusion block in a degree 1 vector."
        offsets = dict()
        position = 0
        for incl in PROPER_INCLUSIONS:
            offsets[incl] = position
            position += self.spaces[incl].dim
        return offsets

    def d0_rows(self) -> List[linear_algebra.SparseVector]:
        "Sparse rows of the matrix of d0."
        rows: List[linear_algebra.SparseVector] = list()
        offsets = self.degree0_offsets()
        for incl in PROPER_INCLUSIONS:
            source_chart = incl.source
            restriction = self.maps[(IDENTITY_OF[source_chart], incl)]
            from_target = self.maps[(IDENTITY_OF[incl.target], incl)]
            for r in range(self.spaces[incl].dim):
                row: linear_algebra.SparseVector = dict()
                for c, value in enumerate(restriction[r]):
                    if value:
                        row[offsets[source_chart] + c] = value
                for c, value in enumerate(from_target[r]):
                    if value:
                        column = offsets[incl.target] + c
                        row[column] = row.get(column, Fraction(0)) - value
                rows.append({k: v for k, v in row.items() if v})
        return rows

    def degree0_size(self) -> int:
        return sum(self.chart_space(chart).dim for chart in CHARTS)

    def degree1_size(self) -> int:
        return sum(self.spaces[incl].dim for incl in PROPER_INCLUSIONS)


@dataclass(frozen=True)
class CohomologyClass:
    """A cocycle of degree 0 (components per chart) or degree 1
       (components per inclusion, identities zero). Components are
       coordinates in the Ext bases, representatives are ring elements
       whose classes give these coordinates."""
    degree: int
    components: Tuple[Coordinates, ...]
    representatives: Tuple[ChartElement, ...]
    label: str = ''

    def flat(self) -> List[Fraction]:
        "Concatenation of the components, identities dropped for degree 1."
        parts = self.components
        if self.degree == 1:
            parts = self.components[len(CHARTS):]
        return [value for part in parts for value in part]

    def representative(self, key) -> ChartElement:  # type: ignore[no-untyped-def]
        "Representative on a chart (degree 0) or an inclusion (degree 1)."
        keys = CHARTS if self.degree == 0 else INCLUSIONS
        return self.representatives[keys.index(key)]


@dataclass
class CochainRep:
    """Cocycle of the total complex lifting a degree 0 class:
       psi(U_i)(d_i) = xi(U_i) * id and psi vanishes on ring elements,
       tau(U_i⊇U3) is a multiplication operator with
       d_3(tau) = xi(U_i)|U3 - xi(U3)."""
    xi: Dict[ChartId, ChartElement]
    tau: Dict[Inclusion, ChartElement] = field(default_factory=dict)
    label: str = ''

    def tau_on(self, incl: Inclusion) -> ChartElement:
        "tau on any inclusion; zero on identities."
        if incl.is_identity:
            return ChartElement.zero(incl.target, self.xi[incl.target].params)
        return self.tau[incl]

    def is_cocycle(self) -> bool:
        "Check the stored cocycle condition exactly."
        for incl in PROPER_INCLUSIONS:
            lhs = chart_algebra.apply_derivation(ChartId.U3, self.tau[incl])
            rhs = (chart_algebra.restrict(self.xi[incl.source], incl) -
                   self.xi[ChartId.U3])
            if lhs != rhs:
                return False
        return True


# #############################################################################
# CLOSED FORM REPRESENTATIVES
# #############################################################################

def closed_form_h0(params: CurveParams) -> List[Dict[ChartId, ChartElement]]:
    """The classes xi_1 = (1, 1, 1) and xi_2, which is
       (Δz^2, 15y^2, Δy^-2) for a != 0 and (-3bxz, x, x) for a = 0."""
    one = {chart: ChartElement.constant(chart, params) for chart in CHARTS}
    delta, b = params.delta, params.b
    if params.a_nonzero:
        second = {
            ChartId.U1: ChartElement.monomial(ChartId.U1, params, 0, 2, delta),
            ChartId.U2: ChartElement.monomial(ChartId.U2, params, 0, 2, 15),
            ChartId.U3: ChartElement.monomial(ChartId.U3, params, 0, -2, delta)}
    else:
        second = {
            ChartId.U1: ChartElement.monomial(ChartId.U1, params, 1, 1, -3 * b),
            ChartId.U2: ChartElement.monomial(ChartId.U2, params, 1, 0),
            ChartId.U3: ChartElement.monomial(ChartId.U3, params, 1, 0)}
    return [one, second]


def closed_form_h1(params: CurveParams) -> ChartElement:
    "U2⊇U3 component of omega: 6a*x^2*y^-1, or x^2*y^-1 for a = 0."
    coeff = 6 * params.a if params.a_nonzero else 1
    return ChartElement.monomial(ChartId.U3, params, 2, -1, coeff)


# #############################################################################
# OPERATIONS
# #############################################################################

def build_diagram(params: CurveParams,
                  settings: ExtSettings = ExtSettings(),
                  order: MonomialOrder = MonomialOrder.GRLEX
                  ) -> CoverDiagram:
    "Compute all five Ext spaces and the maps between them."
    spaces = {incl: ext_engine.ext1(incl, params, settings, order)
              for incl in INCLUSIONS}
    maps: Dict[Tuple[Inclusion, Inclusion], List[List[Fraction]]] = dict()
    for incl in PROPER_INCLUSIONS:
        source = IDENTITY_OF[incl.source]
        maps[(source, incl)] = ext_engine.induced_map(
            spaces[source], spaces[incl], incl)
        own = IDENTITY_OF[incl.target]
        maps[(own, incl)] = ext_engine.induced_map(
            spaces[own], spaces[incl], own)
    logging.info('Cover diagram for a = %s, b = %s has dimensions %s',
                 params.a, params.b,
                 tuple(spaces[incl].dim for incl in INCLUSIONS))
    return CoverDiagram(params, spaces, maps, settings, order)


def _degree0_vector(diagram: CoverDiagram,
                    values: Mapping[ChartId, ChartElement]) -> List[Fraction]:
    vector: List[Fraction] = list()
    for chart in CHARTS:
        vector.extend(diagram.chart_space(chart).reduce(values[chart]))
    return vector


def _apply_d0(diagram: CoverDiagram,
              vector: Sequence[Fraction]) -> List[Fraction]:
    size = diagram.degree1_size()
    result = [Fraction(0)] * size
    for r, row in enumerate(diagram.d0_rows()):
        result[r] = sum((value * vector[c] for c, value in row.items()),
                        Fraction(0))
    return result


def _split_degree0(diagram: CoverDiagram,
                   vector: Sequence[Fraction]) -> Tuple[Coordinates, ...]:
    offsets = diagram.degree0_offsets()
    return tuple(
        tuple(vector[offsets[chart]:
                     offsets[chart] + diagram.chart_space(chart).dim])
        for chart in CHARTS)


def is_h0_cocycle(diagram: CoverDiagram,
                  values: Mapping[ChartId, ChartElement]) -> bool:
    "Check h_i|U3 = h_3 in Ext^1(A_i, A_3) for both proper inclusions."
    return not any(_apply_d0(diagram, _degree0_vector(diagram, values)))


def h0(diagram: CoverDiagram) -> List[CohomologyClass]:
    """Basis of the degree 0 cocycles. The closed form classes are used
       whenever they are independent cocycles; the kernel of d0 fills
       up the rest."""
    size = diagram.degree0_size()
    kernel = linear_algebra.kernel(diagram.d0_rows(), size)
    accepted: List[Tuple[List[Fraction], Dict[ChartId, ChartElement]]] = []

    def independent(vector: List[Fraction]) -> bool:
        rows = [linear_algebra.sparse(v) for v, _ in accepted]
        rows.append(linear_algebra.sparse(vector))
        return linear_algebra.rank(rows, size) == len(rows)

    for values in closed_form_h0(diagram.params):
        if len(accepted) == len(kernel):
            break
        vector = _degree0_vector(diagram, values)
        if any(_apply_d0(diagram, vector)):
            logging.warning('Closed form class %s is not a cocycle here.',
                            values)
            continue
        if any(vector) and independent(vector):
            accepted.append((vector, dict(values)))
    for kernel_vector in kernel:
        if len(accepted) == len(kernel):
            break
        vector = linear_algebra.dense(kernel_vector, size)
        if independent(vector):
            components = _split_degree0(diagram, vector)
            values = {chart: diagram.chart_space(chart).combination(part)
                      for chart, part in zip(CHARTS, components)}
            accepted.append((vector, values))
    return [CohomologyClass(0, _split_degree0(diagram, vector),
                            tuple(values[chart] for chart in CHARTS),
                            label=f"xi_{k + 1}")
            for k, (vector, values) in enumerate(accepted)]


def _image_echelon(diagram: CoverDiagram
                   ) -> Tuple[List[linear_algebra.SparseVector],
                              Tuple[int, ...]]:
    "Row reduced span of the columns of d0."
    rows = diagram.d0_rows()
    columns: List[linear_algebra.SparseVector] = [
        dict() for _ in range(diagram.degree0_size())]
    for r, row in enumerate(rows):
        for c, value in row.items():
            columns[c][r] = value
    return linear_algebra.row_reduce(columns, diagram.degree1_size())


def degree1_vector(diagram: CoverDiagram,
                   components: Mapping[Inclusion, ChartElement]
                   ) -> List[Fraction]:
    "Coordinates of a degree 1 cochain on the proper inclusions."
    vector: List[Fraction] = list()
    for incl in PROPER_INCLUSIONS:
        element = components.get(incl)
        if element is None:
            vector.extend([Fraction(0)] * diagram.spaces[incl].dim)
        else:
            vector.extend(diagram.spaces[incl].reduce(element))
    return vector


def _degree1_class(diagram: CoverDiagram,
                   vector: Sequence[Fraction],
                   label: str,
                   elements: Optional[Mapping[Inclusion, ChartElement]] = None
                   ) -> CohomologyClass:
    offsets = diagram.degree1_offsets()
    components: List[Coordinates] = list()
    representatives: List[ChartElement] = list()
    for incl in INCLUSIONS:
        space = diagram.spaces[incl]
        if incl.is_identity:
            components.append(tuple([Fraction(0)] * space.dim))
            representatives.append(
                ChartElement.zero(incl.target, diagram.params))
            continue
        part = tuple(vector[offsets[incl]:offsets[incl] + space.dim])
        components.append(part)
        if elements is not None and incl in elements:
            representatives.append(elements[incl])
        else:
            representatives.append(space.combination(part))
    return CohomologyClass(1, tuple(components), tuple(representatives),
                           label=label)


def h1(diagram: CoverDiagram) -> List[CohomologyClass]:
    """Basis of the degree 1 cocycles modulo image(d0), starting from the
       closed form class omega = (0, 0, 0, 0, omega_23)."""
    size = diagram.degree1_size()
    echelon, pivots = _image_echelon(diagram)
    quotient_dim = size - len(pivots)
    classes: List[CohomologyClass] = list()
    rows = list(echelon)

    def new_direction(vector: Sequence[Fraction]) -> bool:
        candidate = rows + [linear_algebra.sparse(vector)]
        return linear_algebra.rank(candidate, size) == len(candidate)

    omega = {chart_algebra.U2_U3: closed_form_h1(diagram.params)}
    vector = degree1_vector(diagram, omega)
    if quotient_dim and new_direction(vector):
        classes.append(_degree1_class(diagram, vector, 'omega', omega))
        rows.append(linear_algebra.sparse(vector))
    else:
        logging.warning('Closed form omega is a coboundary here.')
    for k in range(size):
        if len(classes) == quotient_dim:
            break
        unit = [Fraction(0)] * size
        unit[k] = Fraction(1)
        if new_direction(unit):
            classes.append(_degree1_class(diagram, unit,
                                          f"omega_{len(classes) + 1}"))
            rows.append({k: Fraction(1)})
    return classes


def h1_coordinates(diagram: CoverDiagram,
                   components: Mapping[Inclusion, ChartElement],
                   basis: Optional[Sequence[CohomologyClass]] = None
                   ) -> List[Fraction]:
    """Coordinates of the class of a degree 1 cochain in the h1 basis,
       i.e. the unique c with cochain - sum c_k omega_k in image(d0)."""
    if basis is None:
        basis = h1(diagram)
    size = diagram.degree1_size()
    echelon, _ = _image_echelon(diagram)
    columns = list(echelon) + [linear_algebra.sparse(cls.flat())
                               for cls in basis]
    target = linear_algebra.sparse(degree1_vector(diagram, components))
    solution = linear_algebra.solve(columns, target, size)
    if solution is None:
        raise ValueError('Cochain is not in the span of cocycles.')
    offset = len(echelon)
    return [solution.get(offset + k, Fraction(0)) for k in range(len(basis))]


def hom_global_dimension(params: CurveParams,
                         settings: ExtSettings = ExtSettings()) -> int:
    """Dimension of the horizontal sections glued over the cover:
       triples in ker(d_1) x ker(d_2) x ker(d_3) that agree on U3."""
    kernels = {chart: ext_engine.ext0(chart, params, settings)
               for chart in CHARTS}
    columns: List[Tuple[ChartId, ChartElement]] = [
        (chart, element) for chart in CHARTS for element in kernels[chart]]
    monomials = sorted(
        {mono for _, element in columns
         for incl in PROPER_INCLUSIONS
         for mono in (chart_algebra.restrict(element, incl).monomials()
                      if element.chart is incl.source
                      else element.monomials())})
    index = {mono: k for k, mono in enumerate(monomials)}
    rows: List[linear_algebra.SparseVector] = list()
    for incl in PROPER_INCLUSIONS:
        block: List[linear_algebra.SparseVector] = [
            dict() for _ in monomials]
        for c, (chart, element) in enumerate(columns):
            if chart is incl.source:
                image = chart_algebra.restrict(element, incl)
                sign = Fraction(1)
            elif chart is incl.target:
                image = element
                sign = Fraction(-1)
            else:
                continue
            for mono, coeff in image.items():
                block[index[mono]][c] = sign * coeff
        rows.extend(block)
    return len(linear_algebra.kernel(rows, len(columns)))


def hochschild_dims(diagram: CoverDiagram) -> Tuple[int, int, int]:
    "(dim HH^0, dim HH^1, dim HH^2); all higher groups vanish."
    return (hom_global_dimension(diagram.params, diagram.settings),
            len(h0(diagram)),
            len(h1(diagram)))


def lift_to_cochain(xi: CohomologyClass,
                    settings: ExtSettings = ExtSettings()) -> CochainRep:
    """Lift a degree 0 class to (psi, tau) with tau(U_i⊇U3) the
       constant free preimage of xi(U_i)|U3 - xi(U3) under d_3."""
    if xi.degree != 0:
        raise ValueError('Only degree 0 classes lift to deformations.')
    values = {chart: xi.representative(chart) for chart in CHARTS}
    tau: Dict[Inclusion, ChartElement] = dict()
    for incl in PROPER_INCLUSIONS:
        difference = (chart_algebra.restrict(values[incl.source], incl) -
                      values[ChartId.U3])
        preimage = ext_engine.derivation_preimage(difference, ChartId.U3,
                                                  settings)
        if preimage is None:
            raise ValueError(f"{xi.label} is not a cocycle on {incl}.")
        tau[incl] = preimage
    logging.debug('Lifted %s with tau = %s', xi.label,
                  {str(k): str(v) for k, v in tau.items()})
    return CochainRep(values, tau, label=xi.label)
