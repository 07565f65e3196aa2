#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The pipeline from the chart rings to the hull and the versal family.
~~~~~~~~~~~~~~~~~~~~~
Stages are computed lazily and cached, so each sub-report only runs the
stages it needs: ext -> cohomology -> representatives -> cup products ->
hull -> family.
"""
# standard library:
import logging
from typing import Any, Dict, List, Optional

from dmod_deform import chart_algebra
from dmod_deform import cover_cohomology
from dmod_deform import deformation_engine
from dmod_deform import ext_engine
from dmod_deform import truncated_algebra
from dmod_deform.chart_algebra import ChartElement
from dmod_deform.cover_cohomology import CohomologyClass, CoverDiagram
from dmod_deform.deformation_engine import (DeformationData,
                                            HullPresentation,
                                            ObstructionClass,
                                            ViolationReport)
from dmod_deform.run_config import RunConfig
from dmod_deform.time_manager import TimeManager
from dmod_deform.truncated_algebra import Relation


def _element(u: ChartElement) -> str:
    return chart_algebra.format_element(u)


def class_section(cls: CohomologyClass) -> Dict[str, Any]:
    "A cohomology class as labeled component lists."
    keys = ([chart.value for chart in chart_algebra.CHARTS]
            if cls.degree == 0 else
            [incl.label for incl in chart_algebra.INCLUSIONS])
    return {'label': cls.label,
            'degree': cls.degree,
            'components': dict(zip(keys, [list(c) for c in cls.components])),
            'representatives': dict(zip(keys, [_element(r) for r in
                                               cls.representatives]))}


def violation_section(report: ViolationReport) -> Dict[str, Any]:
    "Result of check_deformation."
    violations: List[Dict[str, Any]] = list()
    for violation in report.violations:
        violations.append({
            'condition': violation.condition,
            'location': violation.location,
            'operator': violation.operator,
            'monomial': violation.monomial,
            'defect': {truncated_algebra.format_word(w): str(violation.defect[w])
                       for w in violation.support()}})
    return {'ok': report.ok,
            'evaluations': report.evaluations,
            'violations': violations}


class Pipeline:
    "Lazy, cached stages of one run."
    # pylint: disable=too-many-instance-attributes

    def __init__(self,
                 config: RunConfig,
                 timer: Optional[TimeManager] = None) -> None:
        self.config = config
        self.params = config.params
        self.settings = config.ext_settings
        self.time = timer if timer else TimeManager()
        self._diagram: Optional[CoverDiagram] = None
        self._h0: Optional[List[CohomologyClass]] = None
        self._h1: Optional[List[CohomologyClass]] = None
        self._reps: Optional[List[cover_cohomology.CochainRep]] = None
        self._cups: Optional[ObstructionClass] = None
        self._hull: Optional[HullPresentation] = None
        self._hull_family: Optional[DeformationData] = None

    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
    # STAGES
    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

    @property
    def diagram(self) -> CoverDiagram:
        if self._diagram is None:
            self.time.start_stage('ext')
            self._diagram = cover_cohomology.build_diagram(self.params,
                                                           self.settings)
            self.time.stop_stage('ext')
        return self._diagram

    @property
    def h0(self) -> List[CohomologyClass]:
        if self._h0 is None:
            self.time.start_stage('cohomology')
            self._h0 = cover_cohomology.h0(self.diagram)
            self._h1 = cover_cohomology.h1(self.diagram)
            self.time.stop_stage('cohomology')
        return self._h0

    @property
    def h1(self) -> List[CohomologyClass]:
        if self._h1 is None:
            _ = self.h0
        assert self._h1 is not None
        return self._h1

    @property
    def reps(self) -> List[cover_cohomology.CochainRep]:
        if self._reps is None:
            self._reps = [cover_cohomology.lift_to_cochain(xi, self.settings)
                          for xi in self.h0]
        return self._reps

    @property
    def cups(self) -> ObstructionClass:
        if self._cups is None:
            self.time.start_stage('cup')
            self._cups = deformation_engine.cup_products(
                self.reps, self.diagram, self.h1)
            self.time.stop_stage('cup')
        return self._cups

    def hull(self) -> HullPresentation:
        if self._hull is None:
            self.time.start_stage('hull')
            self._hull, self._hull_family = deformation_engine.compute_hull(
                self.params, self.config.order, self.settings,
                self.config.check_bound, self.diagram)
            self.time.stop_stage('hull')
        return self._hull

    @property
    def family_order(self) -> int:
        "Truncation of the family that certifies the hull modulo (t)^N."
        return max(self.config.order - 1, 1)

    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
    # SECTIONS
    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

    def params_section(self) -> Dict[str, Any]:
        return {'a': self.params.a,
                'b': self.params.b,
                'delta': self.params.delta,
                'regime': self.params.regime}

    def ext_section(self) -> Dict[str, Any]:
        spaces = dict()
        verified = dict()
        for incl in chart_algebra.INCLUSIONS:
            space = self.diagram.space(incl)
            spaces[incl.label] = {
                'pair': incl.label,
                'dim': space.dim,
                'basis': [_element(e) for e in space.basis],
                'stabilization_degree': space.stabilization_degree}
            verified[incl.label] = ext_engine.is_basis(
                space, ext_engine.closed_form_basis(incl, self.params))
        return {'dims': list(self.diagram.dims()),
                'spaces': spaces,
                'closed_form_bases_verified': verified}

    def cohomology_section(self) -> Dict[str, Any]:
        self.time.start_stage('hochschild')
        hh_dims = cover_cohomology.hochschild_dims(self.diagram)
        self.time.stop_stage('hochschild')
        return {'hh_dims': list(hh_dims),
                'h0': [class_section(c) for c in self.h0],
                'h1': [class_section(c) for c in self.h1]}

    def cup_section(self) -> Dict[str, Any]:
        cups = self.cups
        return {'basis': list(cups.basis_labels),
                'words': {truncated_algebra.format_word(w): list(v)
                          for w, v in cups.coefficients.items()},
                'scale': cups.scale,
                'antisymmetric': cups.is_antisymmetric()}

    def hull_section(self) -> Dict[str, Any]:
        hull = self.hull()
        return {'generators': list(hull.generators),
                'relations': hull.relation_strings(),
                'order_verified': hull.order_verified,
                'relation_type': hull.relation.value,
                'cup_scale': hull.cup_scale,
                'commutative_witness': hull.commutative_witness}

    def family_section(self) -> Dict[str, Any]:
        "The exponential family and its check."
        if self._hull_family is not None:
            family = self._hull_family
        else:
            family = deformation_engine.build_exponential_family(
                self.reps, self.family_order)
        self.time.start_stage('family')
        report = deformation_engine.check_deformation(
            family, self.config.check_bound)
        self.time.stop_stage('family')
        return {'psi': {rep.label: {chart.value: _element(value)
                                    for chart, value in rep.xi.items()}
                        for rep in self.reps},
                'tau': {rep.label: {incl.label: _element(value)
                                    for incl, value in rep.tau.items()}
                        for rep in self.reps},
                'exponential_order': family.algebra.order,
                'algebra': family.algebra.relation.value,
                'residue_classical': family.residue_is_classical(),
                'check': violation_section(report)}

    def check_section(self) -> Dict[str, Any]:
        """The tangent family, and the order two family over the free and
           over the commutative algebra."""
        bound = self.config.check_bound
        checks = {
            'tangent': deformation_engine.build_tangent_family(self.reps),
            'free_order_2': deformation_engine.build_exponential_family(
                self.reps, 2, Relation.FREE),
            'commutator_order_2': deformation_engine.build_exponential_family(
                self.reps, 2, Relation.COMMUTATOR)}
        self.time.start_stage('check')
        section = {name: violation_section(
            deformation_engine.check_deformation(data, bound))
            for name, data in checks.items()}
        self.time.stop_stage('check')
        return section

    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
    # REPORTS
    # ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

    def report(self,
               subcommand: Optional[str] = None,
               timings: bool = False) -> Dict[str, Any]:
        "The report (or sub-report) for a subcommand."
        subcommand = subcommand or self.config.subcommand
        report: Dict[str, Any] = {'params': self.params_section(),
                                  'order': self.config.order,
                                  'subcommand': subcommand}
        if subcommand in ('all', 'ext'):
            report['ext1'] = self.ext_section()
        if subcommand in ('all', 'cohomology'):
            report['cohomology'] = self.cohomology_section()
        if subcommand in ('all', 'cup'):
            report['cup'] = self.cup_section()
        if subcommand in ('all', 'hull'):
            if self.config.order >= 2:
                report['hull'] = self.hull_section()
            elif subcommand == 'hull':
                raise ValueError('The hull needs an order of at least 2.')
        if subcommand in ('all', 'verify-family'):
            report['family'] = self.family_section()
        if subcommand == 'check-deformation':
            report['check'] = self.check_section()
        if timings:
            report['timings'] = self.time.as_dict()
        logging.info('Finished %s report for a = %s, b = %s', subcommand,
                     self.params.a, self.params.b)
        return report


def run_pipeline(config: RunConfig, timings: bool = False) -> Dict[str, Any]:
    "Run the configured subcommand and return its report."
    return Pipeline(config).report(timings=timings)
