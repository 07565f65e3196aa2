#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"Deformations of D-modules on elliptic curves in exact arithmetic"

from dmod_deform.__main__ import DModDeform
from dmod_deform import _version

NAME = "dmod_deform"
__version__ = _version.__version__
