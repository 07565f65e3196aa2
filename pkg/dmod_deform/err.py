#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
dmod_deform: Custom Exceptions

Every exception carries a machine-readable code and the exit code the
command line tool returns for it.
"""


class DModDeformException(Exception):
    "An exception occured"
    code = 'error'
    exit_code = 1

    def __init__(self, *args, **kwargs):  # type: ignore[no-untyped-def]
        Exception.__init__(self, *args, **kwargs)


class SingularCurveError(DModDeformException):
    """Raised if the discriminant 4a^3 + 27b^2 vanishes, i.e. the
       Weierstrass equation does not define an elliptic curve."""
    code = 'singular_curve'
    exit_code = 2


class StabilizationFailure(DModDeformException):
    """Raised if the truncated linear algebra reached the degree cap
       before dimension and representatives of a cokernel stabilized."""
    code = 'stabilization_failure'
    exit_code = 3


class HullCertificationFailure(DModDeformException):
    """Raised if the exponential family fails the deformation check at
       some order. This points to a convention bug."""
    code = 'certification_failure'
    exit_code = 4


class ChartMismatchError(DModDeformException, ValueError):
    "Raised if elements or operators of different charts are combined."
    code = 'chart_mismatch'


class MonomialSyntaxError(DModDeformException, ValueError):
    "Raised if a textual chart element or rational number cannot be parsed."
    code = 'syntax_error'
