#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Settings of a single run.
~~~~~~~~~~~~~~~~~~~~~
A run is configured by a dictionary. Unknown keys are rejected, integer
settings out of range fall back to their defaults with a warning. A degree
cap below the first truncation degree is an error instead.
"""
# standard library:
from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Optional, Union

# external dependencies:
import userprovided

from dmod_deform import chart_algebra
from dmod_deform.chart_algebra import CurveParams
from dmod_deform.ext_engine import ExtSettings

SUBCOMMANDS = ('all', 'ext', 'cohomology', 'cup', 'hull', 'verify-family',
               'check-deformation')
OUTPUT_FORMATS = ('json', 'text')

ALLOWED_KEYS = {'a', 'b', 'order', 'stab_start', 'stab_step', 'stab_cap',
                'margin', 'check_bound', 'output_format', 'subcommand',
                'workers'}


def _rational(value: Union[str, int, Fraction]) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return chart_algebra.parse_rational(value)
    raise ValueError(f"Not a rational number: {value!r}")


def _optional_rational(value: Union[None, str, int, Fraction]
                       ) -> Optional[Fraction]:
    return None if value is None else _rational(value)


@dataclass(frozen=True)
class RunConfig:
    "Validated settings of one pipeline run."
    # pylint: disable=too-many-instance-attributes
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None
    order: int = 6
    stab_start: int = 8
    stab_step: int = 2
    stab_cap: int = 40
    margin: int = 4
    check_bound: int = 10
    output_format: str = 'json'
    subcommand: str = 'all'
    workers: int = 1

    @classmethod
    def from_dict(cls, settings: Optional[dict]) -> 'RunConfig':
        """Validate a settings dictionary. Everything has defaults except
           the coefficients a and b, which a corpus run does not need."""
        if settings is None:
            raise ValueError('Settings dictionary needed.')
        userprovided.parameters.validate_dict_keys(
            dict_to_check=settings,
            allowed_keys=ALLOWED_KEYS,
            necessary_keys=None,
            dict_name='settings')

        order = settings.get('order', 6)
        if (not isinstance(order, int) or isinstance(order, bool) or
                order < 1):
            raise ValueError('The order must be an integer >= 1.')

        stab_start: int = userprovided.parameters.int_in_range(
            'stab_start', settings.get('stab_start', 8), 2, 200, 8)
        stab_step: int = userprovided.parameters.int_in_range(
            'stab_step', settings.get('stab_step', 2), 1, 20, 2)
        requested_cap = settings.get('stab_cap', max(40, stab_start))
        if isinstance(requested_cap, int) and requested_cap < stab_start:
            raise ValueError(
                f"The degree cap {requested_cap} is below the first " +
                f"truncation degree {stab_start}.")
        stab_cap: int = userprovided.parameters.int_in_range(
            'stab_cap', requested_cap, stab_start, 400, max(40, stab_start))
        margin: int = userprovided.parameters.int_in_range(
            'margin', settings.get('margin', 4), 2, 40, 4)
        check_bound: int = userprovided.parameters.int_in_range(
            'check_bound', settings.get('check_bound', 10), 0, 100, 10)
        workers: int = userprovided.parameters.int_in_range(
            'workers', settings.get('workers', 1), 1, 64, 1)

        output_format = str(settings.get('output_format', 'json')).strip()
        if output_format not in OUTPUT_FORMATS:
            raise ValueError(f"Unknown output format {output_format!r}.")
        subcommand = str(settings.get('subcommand', 'all')).strip()
        if subcommand not in SUBCOMMANDS:
            raise ValueError(f"Unknown subcommand {subcommand!r}.")

        config = cls(_optional_rational(settings.get('a')),
                     _optional_rational(settings.get('b')),
                     order, stab_start, stab_step, stab_cap, margin,
                     check_bound, output_format, subcommand, workers)
        logging.debug('Run configuration: %s', config)
        return config

    @property
    def params(self) -> CurveParams:
        "The curve; raises SingularCurveError for a vanishing discriminant."
        if self.a is None or self.b is None:
            raise ValueError('The coefficients a and b are needed.')
        return CurveParams(self.a, self.b)

    @property
    def ext_settings(self) -> ExtSettings:
        return ExtSettings(self.stab_start, self.stab_step, self.stab_cap,
                           self.margin)
