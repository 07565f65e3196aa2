#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Truncated noncommutative power series in generators t1, ..., tr.
~~~~~~~~~~~~~~~~~~~~~
Words are tuples of generator indices (0 stands for t1). Words longer
than the truncation order vanish. With the commutator relation the
rewriting t_j t_i -> t_i t_j (i < j) brings every word to its sorted
normal form.
"""
# standard library:
from dataclasses import dataclass
import enum
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple

Word = Tuple[int, ...]
EMPTY_WORD: Word = tuple()


class Relation(enum.Enum):
    "Relations imposed on the free algebra."
    FREE = 'free'
    COMMUTATOR = 'commutator'


@dataclass(frozen=True)
class TruncatedAlgebra:
    """k<t1, ..., tr> modulo words of length > order, optionally modulo
       the commutators t_i t_j - t_j t_i."""
    generators: int = 2
    order: int = 2
    relation: Relation = Relation.FREE

    def __post_init__(self) -> None:
        if self.generators < 1:
            raise ValueError('At least one generator is needed.')
        if self.order < 0:
            raise ValueError('The truncation order must not be negative.')

    def words_of_length(self, length: int) -> Iterator[Word]:
        "Basis words of one length in lexicographic order."
        for word in product(range(self.generators), repeat=length):
            if self.relation is Relation.COMMUTATOR and \
                    list(word) != sorted(word):
                continue
            yield word

    def basis(self) -> List[Word]:
        "Length-graded, lexicographic word basis."
        return algebra_basis(self)

    def is_normal(self, word: Word) -> bool:
        if len(word) > self.order:
            return False
        if any(g < 0 or g >= self.generators for g in word):
            return False
        return (self.relation is Relation.FREE or
                list(word) == sorted(word))

    def normal_form(self, word: Word) -> Optional[Word]:
        "Normal form of a word or None if it vanishes."
        if len(word) > self.order:
            return None
        if self.relation is Relation.COMMUTATOR:
            return tuple(sorted(word))
        return tuple(word)

    def multiply(self, left: Word, right: Word) -> Optional[Word]:
        "Product of two basis words; None stands for zero."
        return self.normal_form(left + right)


def algebra_basis(algebra: TruncatedAlgebra) -> List[Word]:
    "All normal words of length <= order, shortest first."
    words: List[Word] = list()
    for length in range(algebra.order + 1):
        words.extend(algebra.words_of_length(length))
    return words


def rewrite_step(word: Word) -> Optional[Word]:
    """One application of t_j t_i -> t_i t_j at the leftmost descent,
       or None for a sorted word."""
    for position in range(len(word) - 1):
        if word[position] > word[position + 1]:
            return (word[:position] + (word[position + 1], word[position]) +
                    word[position + 2:])
    return None


def rewrite_at(word: Word, position: int) -> Optional[Word]:
    "Apply the commutator rewriting at a given descent, if there is one."
    if position < 0 or position + 1 >= len(word):
        return None
    if word[position] <= word[position + 1]:
        return None
    return (word[:position] + (word[position + 1], word[position]) +
            word[position + 2:])


def rewrite_normal_form(word: Word) -> Word:
    "Exhaust rewrite_step."
    current = word
    while True:
        step = rewrite_step(current)
        if step is None:
            return current
        current = step


def format_word(word: Word) -> str:
    "'t1*t2' style; the empty word is '1'."
    if not word:
        return '1'
    return '*'.join(f"t{g + 1}" for g in word)


def parse_word(text: str) -> Word:
    "Inverse of format_word."
    text = text.strip()
    if text == '1':
        return EMPTY_WORD
    word = list()
    for piece in text.split('*'):
        piece = piece.strip()
        if not piece.startswith('t') or not piece[1:].isdigit() or \
                int(piece[1:]) < 1:
            raise ValueError(f"Not a word: {text!r}")
        word.append(int(piece[1:]) - 1)
    return tuple(word)


def commutative_monomial_bijection(algebra: TruncatedAlgebra
                                   ) -> Dict[Word, Tuple[int, ...]]:
    """Map each basis word to the exponent vector of the commutative
       monomial with the same letters. Bijective onto the monomials of
       degree <= order exactly when the commutator relation holds."""
    mapping: Dict[Word, Tuple[int, ...]] = dict()
    for word in algebra_basis(algebra):
        mapping[word] = tuple(word.count(g) for g in range(algebra.generators))
    return mapping


def is_commutative_witness(algebra: TruncatedAlgebra) -> bool:
    "Check that commutative_monomial_bijection is a bijection."
    mapping = commutative_monomial_bijection(algebra)
    images = set(mapping.values())
    expected = {exponents
                for exponents in product(range(algebra.order + 1),
                                         repeat=algebra.generators)
                if sum(exponents) <= algebra.order}
    return len(images) == len(mapping) and images == expected
