#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Exact linear algebra over the rationals.
~~~~~~~~~~~~~~~~~~~~~
Thin layer over sympy's DomainMatrix on the field QQ. Vectors are sparse
dictionaries {column index: Fraction}; the rest of the package never
sees sympy domain elements.
"""
# standard library:
from fractions import Fraction
import logging
from typing import Dict, List, Optional, Sequence, Tuple

# external dependencies:
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

SparseVector = Dict[int, Fraction]


def _to_qq(value: Fraction):  # type: ignore[no-untyped-def]
    return QQ(value.numerator, value.denominator)


def _from_qq(value) -> Fraction:  # type: ignore[no-untyped-def]
    return Fraction(int(value.numerator), int(value.denominator))


def to_domain_matrix(rows: Sequence[SparseVector],
                     ncols: int) -> DomainMatrix:
    "Build a sparse DomainMatrix over QQ from sparse row vectors."
    elements = dict()
    for r, row in enumerate(rows):
        entries = {c: _to_qq(v) for c, v in row.items() if v}
        if entries:
            elements[r] = entries
    return DomainMatrix(elements, (len(rows), ncols), QQ)


def from_domain_matrix(matrix: DomainMatrix) -> List[SparseVector]:
    "Sparse rows of a DomainMatrix."
    return [{c: _from_qq(v) for c, v in enumerate(row) if v}
            for row in matrix.to_list()]


def row_reduce(rows: Sequence[SparseVector],
               ncols: int) -> Tuple[List[SparseVector], Tuple[int, ...]]:
    """Reduced row echelon form. Returns the nonzero rows and the pivot
       column of each row."""
    if not rows or ncols == 0:
        return list(), tuple()
    logging.debug('row reducing a %s x %s matrix', len(rows), ncols)
    reduced, pivots = to_domain_matrix(rows, ncols).rref()
    echelon = from_domain_matrix(reduced)[:len(pivots)]
    return echelon, tuple(pivots)


def rank(rows: Sequence[SparseVector], ncols: int) -> int:
    return len(row_reduce(rows, ncols)[1])


def reduce_vector(vector: SparseVector,
                  echelon: Sequence[SparseVector],
                  pivots: Sequence[int]) -> SparseVector:
    """Remainder of a vector modulo the row space of a reduced echelon
       form. The result vanishes on every pivot column."""
    remainder = dict(vector)
    for row, pivot in zip(echelon, pivots):
        factor = remainder.get(pivot)
        if not factor:
            continue
        for column, value in row.items():
            updated = remainder.get(column, Fraction(0)) - factor * value
            if updated:
                remainder[column] = updated
            else:
                remainder.pop(column, None)
    return remainder


def solve(columns: Sequence[SparseVector],
          rhs: SparseVector,
          nrows: int) -> Optional[SparseVector]:
    """Solve sum_k x_k * columns[k] = rhs. Free variables are set to
       zero. Returns None if the system is inconsistent."""
    ncols = len(columns)
    augmented: List[SparseVector] = [dict() for _ in range(nrows)]
    for k, column in enumerate(columns):
        for r, value in column.items():
            augmented[r][k] = value
    for r, value in rhs.items():
        augmented[r][ncols] = value
    echelon, pivots = row_reduce(augmented, ncols + 1)
    if ncols in pivots:
        return None
    return {pivot: row[ncols] for row, pivot in zip(echelon, pivots)
            if row.get(ncols)}


def kernel(rows: Sequence[SparseVector], ncols: int) -> List[SparseVector]:
    "Basis of the right kernel, one vector per free column."
    echelon, pivots = row_reduce(rows, ncols)
    pivot_set = set(pivots)
    basis: List[SparseVector] = list()
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector: SparseVector = {free: Fraction(1)}
        for row, pivot in zip(echelon, pivots):
            if row.get(free):
                vector[pivot] = -row[free]
        basis.append(vector)
    return basis


def dense(vector: SparseVector, length: int) -> List[Fraction]:
    return [vector.get(k, Fraction(0)) for k in range(length)]


def sparse(values: Sequence[Fraction]) -> SparseVector:
    return {k: Fraction(v) for k, v in enumerate(values) if v}
