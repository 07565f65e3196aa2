#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Deformations of the structure sheaf as a module over the differential
operators of the curve.
~~~~~~~~~~~~~~~~~~~~~
Deformation data over a truncated algebra T consists of
  * per chart a homomorphism L(U) from D(U) into operators on A(U) ⊗ T,
    fixed by the image of the chart derivation, ring elements acting
    by u ⊗ 1,
  * per inclusion U ⊇ V a T-linear restriction L(U, V) given by
    multipliers: m ⊗ v -> sum_w c_w * m|V ⊗ w v.
The checker verifies the homomorphism property (1), the compatibility
with restriction (2) and the identity and chain conditions (3).
"""
# standard library:
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
import logging
from math import factorial
from typing import (Dict, Iterable, List, Mapping, Optional, Sequence,
                    Tuple, Union)

from dmod_deform import chart_algebra
from dmod_deform import cover_cohomology
from dmod_deform import diffop
from dmod_deform import err
from dmod_deform import linear_algebra
from dmod_deform.chart_algebra import (ChartElement, ChartId, CurveParams,
                                       Inclusion)
from dmod_deform.cover_cohomology import (CochainRep, CohomologyClass,
                                          CoverDiagram)
from dmod_deform.diffop import DiffOp
from dmod_deform.ext_engine import Coordinates, ExtSettings
from dmod_deform.truncated_algebra import (EMPTY_WORD, Relation,
                                           TruncatedAlgebra, Word)
from dmod_deform import truncated_algebra

TensorElement = Dict[Word, ChartElement]


def _word_key(word: Word) -> Tuple[int, Word]:
    return (len(word), word)


def _accumulate(target: Dict[Word, ChartElement],
                word: Word,
                element: ChartElement) -> None:
    if word in target:
        target[word] = target[word] + element
    else:
        target[word] = element


def _clean(tensor: Mapping[Word, ChartElement]) -> TensorElement:
    return {w: e for w, e in tensor.items() if not e.is_zero()}


def tensor_difference(left: Mapping[Word, ChartElement],
                      right: Mapping[Word, ChartElement]) -> TensorElement:
    "left - right, zero coefficients dropped."
    result = dict(left)
    for word, element in right.items():
        _accumulate(result, word, -element)
    return _clean(result)


def format_tensor(tensor: Mapping[Word, ChartElement]) -> str:
    "'(15*y^2)*t2 + ...' in word order."
    if not tensor:
        return '0'
    return ' + '.join(
        f"({chart_algebra.format_element(tensor[w])})" +
        ('' if not w else '*' + truncated_algebra.format_word(w))
        for w in sorted(tensor, key=_word_key))


# #############################################################################
# OPERATORS ON A ⊗ T
# #############################################################################

class DeformedOperator:
    """sum_w P_w ⊗ w acting by (P ⊗ w)(m ⊗ v) = P(m) ⊗ wv.
       Right T-linear by construction."""

    __slots__ = ('chart', 'params', 'algebra', '_terms')

    def __init__(self,
                 chart: ChartId,
                 params: CurveParams,
                 algebra: TruncatedAlgebra,
                 terms: Optional[Mapping[Word, DiffOp]] = None) -> None:
        self.chart = chart
        self.params = params
        self.algebra = algebra
        cleaned: Dict[Word, DiffOp] = dict()
        for word, operator in (terms or dict()).items():
            if not algebra.is_normal(word):
                raise ValueError(f"{word} is not a basis word of {algebra}")
            if operator.chart is not chart:
                raise err.ChartMismatchError(
                    f"Operator on {operator.chart.value} in a deformed " +
                    f"operator on {chart.value}")
            if not operator.is_zero():
                cleaned[word] = operator
        self._terms = cleaned

    @classmethod
    def classical(cls,
                  operator: DiffOp,
                  algebra: TruncatedAlgebra) -> 'DeformedOperator':
        "P ⊗ 1"
        return cls(operator.chart, operator.params, algebra,
                   {EMPTY_WORD: operator})

    @classmethod
    def zero(cls,
             chart: ChartId,
             params: CurveParams,
             algebra: TruncatedAlgebra) -> 'DeformedOperator':
        return cls(chart, params, algebra)

    def items(self) -> List[Tuple[Word, DiffOp]]:
        return sorted(self._terms.items(), key=lambda t: _word_key(t[0]))

    def term(self, word: Word) -> DiffOp:
        return self._terms.get(word, DiffOp(self.chart, self.params))

    def residue(self) -> DiffOp:
        "The operator modulo the augmentation ideal."
        return self.term(EMPTY_WORD)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: 'DeformedOperator') -> 'DeformedOperator':
        if self.chart is not other.chart or self.algebra != other.algebra:
            raise err.ChartMismatchError(
                'Cannot add deformed operators of different rings.')
        summed = dict(self._terms)
        for word, operator in other.items():
            summed[word] = summed[word] + operator if word in summed \
                else operator
        return DeformedOperator(self.chart, self.params, self.algebra, summed)

    def __neg__(self) -> 'DeformedOperator':
        return DeformedOperator(self.chart, self.params, self.algebra,
                                {w: -op for w, op in self._terms.items()})

    def __sub__(self, other: 'DeformedOperator') -> 'DeformedOperator':
        return self + (-other)

    def compose(self, other: 'DeformedOperator') -> 'DeformedOperator':
        "(P ⊗ w) ∘ (Q ⊗ w') = PQ ⊗ ww'"
        if self.chart is not other.chart or self.algebra != other.algebra:
            raise err.ChartMismatchError(
                'Cannot compose deformed operators of different rings.')
        collected: Dict[Word, DiffOp] = dict()
        for left_word, left in self.items():
            for right_word, right in other.items():
                word = self.algebra.multiply(left_word, right_word)
                if word is None:
                    continue
                product = diffop.op_compose(left, right)
                collected[word] = collected[word] + product \
                    if word in collected else product
        return DeformedOperator(self.chart, self.params, self.algebra,
                                collected)

    def __matmul__(self, other: 'DeformedOperator') -> 'DeformedOperator':
        return self.compose(other)

    def apply(self, m: ChartElement) -> TensorElement:
        "Image of m ⊗ 1."
        return self.apply_tensor({EMPTY_WORD: m})

    def apply_tensor(self, tensor: Mapping[Word, ChartElement]
                     ) -> TensorElement:
        "Image of sum_v e_v ⊗ v."
        result: Dict[Word, ChartElement] = dict()
        for op_word, operator in self.items():
            for word, element in tensor.items():
                product = self.algebra.multiply(op_word, word)
                if product is None:
                    continue
                _accumulate(result, product, diffop.op_apply(operator,
                                                             element))
        return _clean(result)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DeformedOperator):
            return NotImplemented
        return (self.chart is other.chart and
                self.algebra == other.algebra and
                self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self.chart, self.algebra,
                     frozenset(self._terms.items())))

    def __str__(self) -> str:
        if not self._terms:
            return '0'
        return ' + '.join(
            f"[{diffop.format_operator(op)}]" +
            ('' if not w else '*' + truncated_algebra.format_word(w))
            for w, op in self.items())


class RestrictionMap:
    """T-linear map A(U) ⊗ T -> A(V) ⊗ T for an inclusion U ⊇ V:
       m ⊗ v -> sum_w c_w * m|V ⊗ w v with multipliers c_w in A(V)."""

    __slots__ = ('inclusion', 'params', 'algebra', '_multipliers')

    def __init__(self,
                 inclusion: Inclusion,
                 params: CurveParams,
                 algebra: TruncatedAlgebra,
                 multipliers: Mapping[Word, ChartElement]) -> None:
        self.inclusion = inclusion
        self.params = params
        self.algebra = algebra
        cleaned: Dict[Word, ChartElement] = dict()
        for word, multiplier in multipliers.items():
            if not algebra.is_normal(word):
                raise ValueError(f"{word} is not a basis word of {algebra}")
            if multiplier.chart is not inclusion.target:
                raise err.ChartMismatchError(
                    f"Multiplier of {multiplier.chart.value} for {inclusion}")
            if not multiplier.is_zero():
                cleaned[word] = multiplier
        self._multipliers = cleaned

    @classmethod
    def plain(cls,
              inclusion: Inclusion,
              params: CurveParams,
              algebra: TruncatedAlgebra) -> 'RestrictionMap':
        "The undeformed restriction m ⊗ v -> m|V ⊗ v."
        return cls(inclusion, params, algebra,
                   {EMPTY_WORD: ChartElement.constant(inclusion.target,
                                                      params)})

    @property
    def multipliers(self) -> Dict[Word, ChartElement]:
        return dict(self._multipliers)

    def items(self) -> List[Tuple[Word, ChartElement]]:
        return sorted(self._multipliers.items(),
                      key=lambda t: _word_key(t[0]))

    def residue(self) -> ChartElement:
        return self._multipliers.get(
            EMPTY_WORD, ChartElement.zero(self.inclusion.target, self.params))

    def apply(self, tensor: Mapping[Word, ChartElement]) -> TensorElement:
        "Image of sum_v e_v ⊗ v."
        result: Dict[Word, ChartElement] = dict()
        restricted = {word: chart_algebra.restrict(element, self.inclusion)
                      for word, element in tensor.items()}
        for mult_word, multiplier in self.items():
            for word, element in restricted.items():
                product = self.algebra.multiply(mult_word, word)
                if product is None:
                    continue
                _accumulate(result, product, multiplier * element)
        return _clean(result)

    def then(self, after: 'RestrictionMap') -> 'RestrictionMap':
        "after ∘ self for a chain U ⊇ V ⊇ W."
        if after.inclusion.source is not self.inclusion.target:
            raise err.ChartMismatchError(
                f"{after.inclusion} does not follow {self.inclusion}")
        composite = Inclusion(self.inclusion.source, after.inclusion.target)
        collected: Dict[Word, ChartElement] = dict()
        for outer_word, outer in after.items():
            for inner_word, inner in self.items():
                product = self.algebra.multiply(outer_word, inner_word)
                if product is None:
                    continue
                _accumulate(collected, product,
                            outer * chart_algebra.restrict(inner,
                                                           after.inclusion))
        return RestrictionMap(composite, self.params, self.algebra, collected)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RestrictionMap):
            return NotImplemented
        return (self.inclusion == other.inclusion and
                self.algebra == other.algebra and
                self._multipliers == other._multipliers)

    def __hash__(self) -> int:
        return hash((self.inclusion, self.algebra,
                     frozenset(self._multipliers.items())))

    def __str__(self) -> str:
        return format_tensor(self._multipliers)


# #############################################################################
# DEFORMATION DATA
# #############################################################################

@dataclass
class DeformationData:
    """The maps L(U) (through the image of the chart derivation) and
       L(U, V) for all five inclusions."""
    algebra: TruncatedAlgebra
    params: CurveParams
    derivations: Dict[ChartId, DeformedOperator]
    restrictions: Dict[Inclusion, RestrictionMap]
    reps: Tuple[CochainRep, ...] = tuple()

    def multiplier(self, u: ChartElement) -> DeformedOperator:
        "L(U)(u) = u ⊗ 1 for a ring element u."
        return DeformedOperator.classical(DiffOp.multiplication(u),
                                          self.algebra)

    def coordinate_images(self, chart: ChartId) -> List[DeformedOperator]:
        return [self.multiplier(g) for g in
                chart_algebra.coordinate_generators(chart, self.params)]

    def lift_operator(self, operator: DiffOp) -> DeformedOperator:
        "L(U)(sum_j a_j d^j) = sum_j L(a_j) ∘ L(d)^j"
        chart = operator.chart
        result = DeformedOperator.zero(chart, self.params, self.algebra)
        power = DeformedOperator.classical(
            DiffOp.identity(chart, self.params), self.algebra)
        for order in range(operator.order + 1):
            coeff = operator.coefficient(order)
            if not coeff.is_zero():
                result = result + self.multiplier(coeff).compose(power)
            power = power.compose(self.derivations[chart])
        return result

    def residue_is_classical(self) -> bool:
        "Check that the data reduces modulo I to the undeformed structure."
        for chart in chart_algebra.CHARTS:
            if self.derivations[chart].residue() != \
                    DiffOp.derivation(chart, self.params):
                return False
        for incl in chart_algebra.INCLUSIONS:
            if self.restrictions[incl].residue() != \
                    ChartElement.constant(incl.target, self.params):
                return False
        return True


@dataclass(frozen=True)
class Violation:
    """A failing instance of one of the three conditions. The defect is
       given by its word coefficients."""
    condition: int
    location: str
    operator: str
    defect: Dict[Word, Union[ChartElement, DiffOp]]
    monomial: Optional[str] = None

    def support(self) -> List[Word]:
        return sorted(self.defect, key=_word_key)

    def __str__(self) -> str:
        where = f" at m = {self.monomial}" if self.monomial else ''
        terms = ', '.join(
            f"{truncated_algebra.format_word(w)}: {self.defect[w]}"
            for w in self.support())
        return (f"condition ({self.condition}) fails on {self.location} " +
                f"for {self.operator}{where}: {terms}")


@dataclass
class ViolationReport:
    "Result of check_deformation; ok if there are no violations."
    violations: List[Violation] = field(default_factory=list)
    evaluations: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def for_condition(self, condition: int) -> List[Violation]:
        return [v for v in self.violations if v.condition == condition]


@dataclass
class ObstructionClass:
    """Coordinates of the quadratic obstruction in the h1 basis for each
       word of length two."""
    coefficients: Dict[Word, Coordinates]
    basis_labels: Tuple[str, ...] = tuple()

    def coefficient(self, word: Word, index: int = 0) -> Fraction:
        values = self.coefficients.get(word)
        if not values:
            return Fraction(0)
        return values[index]

    @property
    def scale(self) -> Fraction:
        "Coefficient of t1*t2 on the first h1 basis class."
        return self.coefficient((0, 1))

    def is_antisymmetric(self) -> bool:
        "c(t_i t_j) = -c(t_j t_i) and diagonal words vanish."
        for word, values in self.coefficients.items():
            mirrored = self.coefficients.get(tuple(reversed(word)))
            if mirrored is None:
                return False
            if any(v + w for v, w in zip(values, mirrored)):
                return False
        return True

    def quadratic_relations(self) -> List[Dict[Word, Fraction]]:
        """One quadratic relation per h1 class, normalized so that the
           first nonzero coefficient in word order is one."""
        relations: List[Dict[Word, Fraction]] = list()
        width = len(self.basis_labels) or max(
            (len(v) for v in self.coefficients.values()), default=0)
        for index in range(width):
            relation = {w: self.coefficient(w, index)
                        for w in sorted(self.coefficients, key=_word_key)
                        if self.coefficient(w, index)}
            if relation:
                lead = relation[min(relation, key=_word_key)]
                relations.append({w: c / lead for w, c in relation.items()})
        return relations


@dataclass
class HullPresentation:
    "Generators, relations and the order up to which the hull is verified."
    generators: Tuple[str, ...]
    relations: List[Dict[Word, Fraction]]
    order_verified: int
    relation: Relation
    cup_scale: Fraction
    commutative_witness: bool

    def relation_strings(self) -> List[str]:
        return [format_series(r) for r in self.relations]


def format_series(series: Mapping[Word, Fraction]) -> str:
    "'t1*t2 - t2*t1' style, unit coefficients left out."
    if not series:
        return '0'
    pieces: List[str] = list()
    for position, word in enumerate(sorted(series, key=_word_key)):
        coeff = series[word]
        magnitude = abs(coeff)
        text = truncated_algebra.format_word(word)
        if magnitude != 1:
            text = f"{magnitude}*{text}" if word else str(magnitude)
        if position == 0:
            pieces.append(f"-{text}" if coeff < 0 else text)
        else:
            pieces.append(f" - {text}" if coeff < 0 else f" + {text}")
    return ''.join(pieces)


# #############################################################################
# FAMILIES
# #############################################################################

def _exponential(incl: Inclusion,
                 taus: Sequence[ChartElement],
                 params: CurveParams,
                 algebra: TruncatedAlgebra) -> RestrictionMap:
    "exp(sum_k tau_k ⊗ t_k) truncated at the order of the algebra."
    one = ChartElement.constant(incl.target, params)
    multipliers: Dict[Word, ChartElement] = {EMPTY_WORD: one}
    power: Dict[Word, ChartElement] = {EMPTY_WORD: one}
    for n in range(1, algebra.order + 1):
        following: Dict[Word, ChartElement] = dict()
        for word, coeff in power.items():
            for k, tau in enumerate(taus):
                if tau.is_zero():
                    continue
                product = algebra.multiply(word, (k, ))
                if product is not None:
                    _accumulate(following, product, coeff * tau)
        power = _clean(following)
        for word, coeff in power.items():
            _accumulate(multipliers, word,
                        coeff.scale(Fraction(1, factorial(n))))
    return RestrictionMap(incl, params, algebra, multipliers)


def build_exponential_family(reps: Sequence[CochainRep],
                             order: int,
                             relation: Relation = Relation.COMMUTATOR
                             ) -> DeformationData:
    """L(U)(d) = d ⊗ 1 + sum_k xi_k(U) ⊗ t_k and
       L(U, V) = exp(sum_k tau_k(U⊇V) ⊗ t_k) over the algebra truncated
       at the given order."""
    if order < 1:
        raise ValueError('The exponential family needs order >= 1.')
    if not reps:
        raise ValueError('At least one cochain representative is needed.')
    params = reps[0].xi[ChartId.U1].params
    algebra = TruncatedAlgebra(len(reps), order, relation)
    derivations: Dict[ChartId, DeformedOperator] = dict()
    for chart in chart_algebra.CHARTS:
        terms: Dict[Word, DiffOp] = {
            EMPTY_WORD: DiffOp.derivation(chart, params)}
        for k, rep in enumerate(reps):
            terms[(k, )] = DiffOp.multiplication(rep.xi[chart])
        derivations[chart] = DeformedOperator(chart, params, algebra, terms)
    restrictions: Dict[Inclusion, RestrictionMap] = dict()
    for incl in chart_algebra.INCLUSIONS:
        if incl.is_identity:
            restrictions[incl] = RestrictionMap.plain(incl, params, algebra)
        else:
            restrictions[incl] = _exponential(
                incl, [rep.tau_on(incl) for rep in reps], params, algebra)
    logging.debug('Built exponential family over %s', algebra)
    return DeformationData(algebra, params, derivations, restrictions,
                           tuple(reps))


def build_tangent_family(reps: Sequence[CochainRep]) -> DeformationData:
    "The family over k<t1, t2>/(t1, t2)^2."
    return build_exponential_family(reps, 1)


def act_on_lifting(data: DeformationData,
                   rep: CochainRep,
                   word: Word) -> DeformationData:
    """Move a lifting by a tangent class along a word of top length:
       add xi ⊗ w to L(U)(d) and tau ⊗ w to L(U, V)."""
    algebra = data.algebra
    if not algebra.is_normal(word) or len(word) != algebra.order:
        raise ValueError(
            f"{truncated_algebra.format_word(word)} is not a top degree " +
            f"word of {algebra}")
    derivations = dict()
    for chart, operator in data.derivations.items():
        shift = DeformedOperator(chart, data.params, algebra,
                                 {word: DiffOp.multiplication(rep.xi[chart])})
        derivations[chart] = operator + shift
    restrictions = dict()
    for incl, restriction in data.restrictions.items():
        multipliers = restriction.multipliers
        if not incl.is_identity:
            _accumulate(multipliers, word, rep.tau[incl])
        restrictions[incl] = RestrictionMap(incl, data.params, algebra,
                                            multipliers)
    return DeformationData(algebra, data.params, derivations, restrictions,
                           data.reps)


# #############################################################################
# THE CHECKER
# #############################################################################

def _generator_names(chart: ChartId) -> Tuple[str, str]:
    return chart.variables


def _check_homomorphism(data: DeformationData,
                        chart: ChartId) -> List[Violation]:
    """[L(d), L(a)] = L(d(a)) for the coordinates a and [L(a), L(b)] = 0,
       compared as operators in normal form."""
    found: List[Violation] = list()
    derivation = data.derivations[chart]
    generators = chart_algebra.coordinate_generators(chart, data.params)
    images = data.coordinate_images(chart)
    for name, generator, image in zip(_generator_names(chart),
                                      generators, images):
        defect = (derivation.compose(image) - image.compose(derivation) -
                  data.multiplier(chart_algebra.apply_derivation(chart,
                                                                 generator)))
        if not defect.is_zero():
            found.append(Violation(1, chart.value, f"[d, {name}]",
                                   dict(defect.items())))
    defect = images[0].compose(images[1]) - images[1].compose(images[0])
    if not defect.is_zero():
        found.append(Violation(1, chart.value, '[{}, {}]'.format(
            *_generator_names(chart)), dict(defect.items())))
    return found


def restriction_defect(data: DeformationData,
                       incl: Inclusion,
                       operator: DiffOp,
                       m: ChartElement) -> TensorElement:
    "(L(U,V) ∘ L(U)(P) - L(V)(P|V) ∘ L(U,V)) applied to m ⊗ 1"
    restriction = data.restrictions[incl]
    before = restriction.apply(data.lift_operator(operator).apply(m))
    lifted = data.lift_operator(diffop.restrict_op(operator, incl))
    after = lifted.apply_tensor(restriction.apply({EMPTY_WORD: m}))
    return tensor_difference(before, after)


def _check_restrictions(data: DeformationData,
                        incl: Inclusion,
                        degree_bound: int
                        ) -> Tuple[List[Violation], int]:
    found: List[Violation] = list()
    evaluations = 0
    chart = incl.source
    operators: List[Tuple[str, DiffOp]] = [
        ('d', DiffOp.derivation(chart, data.params))]
    operators.extend(
        (name, DiffOp.multiplication(g)) for name, g in
        zip(_generator_names(chart),
            chart_algebra.coordinate_generators(chart, data.params)))
    restriction = data.restrictions[incl]
    for name, operator in operators:
        source_lift = data.lift_operator(operator)
        target_lift = data.lift_operator(diffop.restrict_op(operator, incl))
        for mono in chart_algebra.monomial_box(chart, degree_bound):
            m = ChartElement(chart, data.params, {mono: Fraction(1)})
            evaluations += 1
            defect = tensor_difference(
                restriction.apply(source_lift.apply(m)),
                target_lift.apply_tensor(restriction.apply({EMPTY_WORD: m})))
            if defect:
                found.append(Violation(
                    2, incl.label, name, dict(defect),
                    chart_algebra.format_monomial(chart, mono)))
                break
    return found, evaluations


def _chains() -> Iterable[Tuple[Inclusion, Inclusion]]:
    "All composable pairs U ⊇ V, V ⊇ W, degenerate chains included."
    for first in chart_algebra.INCLUSIONS:
        for second in chart_algebra.INCLUSIONS:
            if second.source is first.target:
                yield first, second


def check_chain_compatibility(data: DeformationData) -> List[Violation]:
    """Identity restrictions are identities and L(V,W) ∘ L(U,V) = L(U,W).
       Both sides are multiplier maps, so comparing multipliers decides
       equality on every element."""
    found: List[Violation] = list()
    for incl in chart_algebra.IDENTITY_INCLUSIONS:
        plain = RestrictionMap.plain(incl, data.params, data.algebra)
        if data.restrictions[incl] != plain:
            found.append(Violation(
                3, incl.label, 'identity',
                {w: e for w, e in tensor_difference(
                    data.restrictions[incl].multipliers,
                    plain.multipliers).items()}))
    for first, second in _chains():
        composite = data.restrictions[first].then(data.restrictions[second])
        direct = data.restrictions[composite.inclusion]
        defect = tensor_difference(composite.multipliers, direct.multipliers)
        if defect:
            found.append(Violation(
                3, f"{first.label} -> {second.label}", 'chain',
                dict(defect)))
    return found


def check_deformation(data: DeformationData,
                      degree_bound: int = 10) -> ViolationReport:
    """Verify the conditions (1) to (3) exactly. Condition (2) is
       evaluated on all monomials of degree <= degree_bound of the source
       chart; all maps involved are determined by the chart generators
       and extend multiplicatively."""
    if degree_bound < 0:
        raise ValueError('The degree bound must not be negative.')
    report = ViolationReport()
    for chart in chart_algebra.CHARTS:
        report.violations.extend(_check_homomorphism(data, chart))
    for incl in chart_algebra.PROPER_INCLUSIONS:
        found, evaluations = _check_restrictions(data, incl, degree_bound)
        report.violations.extend(found)
        report.evaluations += evaluations
    report.violations.extend(check_chain_compatibility(data))
    logging.debug('Checked deformation over %s: %s violations in %s ' +
                  'evaluations', data.algebra, len(report.violations),
                  report.evaluations)
    return report


# #############################################################################
# OBSTRUCTIONS AND THE HULL
# #############################################################################

def cup_products(reps: Sequence[CochainRep],
                 diagram: CoverDiagram,
                 h1_basis: Optional[Sequence[CohomologyClass]] = None,
                 sample_degree: int = 2) -> ObstructionClass:
    """Lift the tangent family naively to the free algebra truncated at
       two. The defect of condition (2) at the derivation is a
       multiplication operator per word of length two; its class in h1
       is the cup product."""
    if h1_basis is None:
        h1_basis = cover_cohomology.h1(diagram)
    data = build_exponential_family(reps, 2, Relation.FREE)
    report = check_deformation(data, sample_degree)
    stray = [v for v in report.violations if v.condition != 2]
    if stray:
        msg = f"Naive lifting violates more than condition (2): {stray[0]}"
        logging.error(msg)
        raise err.HullCertificationFailure(msg)
    multipliers: Dict[Word, Dict[Inclusion, ChartElement]] = defaultdict(dict)
    for incl in chart_algebra.PROPER_INCLUSIONS:
        derivation = DiffOp.derivation(incl.source, data.params)
        one = ChartElement.constant(incl.source, data.params)
        at_one = restriction_defect(data, incl, derivation, one)
        for mono in chart_algebra.monomial_box(incl.source, sample_degree):
            m = ChartElement(incl.source, data.params, {mono: Fraction(1)})
            defect = restriction_defect(data, incl, derivation, m)
            expected = _clean({w: c * chart_algebra.restrict(m, incl)
                               for w, c in at_one.items()})
            if defect != expected:
                msg = (f"Defect on {incl} is not a multiplication operator " +
                       f"at m = {chart_algebra.format_element(m)}")
                logging.error(msg)
                raise err.HullCertificationFailure(msg)
        for word, coeff in at_one.items():
            multipliers[word][incl] = coeff
    coefficients: Dict[Word, Coordinates] = dict()
    for word in data.algebra.words_of_length(2):
        coefficients[word] = tuple(cover_cohomology.h1_coordinates(
            diagram, multipliers.get(word, dict()), h1_basis))
    obstruction = ObstructionClass(coefficients,
                                   tuple(c.label for c in h1_basis))
    logging.info('Cup products: %s', {
        truncated_algebra.format_word(w): [str(c) for c in v]
        for w, v in coefficients.items()})
    return obstruction


def _classify(relations: Sequence[Mapping[Word, Fraction]],
              generators: int) -> Optional[Relation]:
    """FREE if there are no quadratic relations, COMMUTATOR if they span
       the commutators t_i t_j - t_j t_i, None otherwise."""
    if not relations:
        return Relation.FREE
    words = list(TruncatedAlgebra(generators, 2).words_of_length(2))
    index = {w: k for k, w in enumerate(words)}
    given = [{index[w]: c for w, c in r.items()} for r in relations]
    commutators = [{index[(i, j)]: Fraction(1), index[(j, i)]: Fraction(-1)}
                   for i in range(generators)
                   for j in range(i + 1, generators)]
    rank_given = linear_algebra.rank(given, len(words))
    rank_expected = linear_algebra.rank(commutators, len(words))
    rank_both = linear_algebra.rank(given + commutators, len(words))
    if rank_given == rank_expected == rank_both:
        return Relation.COMMUTATOR
    return None


def compute_hull(params: CurveParams,
                 order: int,
                 settings: ExtSettings = ExtSettings(),
                 check_bound: int = 10,
                 diagram: Optional[CoverDiagram] = None
                 ) -> Tuple[HullPresentation, DeformationData]:
    """Hull modulo (t)^order. The quadratic relations come from the cup
       products; the exponential family certifies every order 2..order
       (words of length < n at order n)."""
    # pylint: disable=too-many-locals
    if order < 2:
        raise ValueError('The hull is computed from order 2 on.')
    if diagram is None:
        diagram = cover_cohomology.build_diagram(params, settings)
    reps = [cover_cohomology.lift_to_cochain(xi, settings)
            for xi in cover_cohomology.h0(diagram)]
    h1_basis = cover_cohomology.h1(diagram)
    obstruction = cup_products(reps, diagram, h1_basis)
    if obstruction.scale not in (0, 1):
        logging.warning('Cup product t1*t2 has scale %s relative to omega',
                        obstruction.scale)
    relations = obstruction.quadratic_relations()
    relation = _classify(relations, len(reps))
    if relation is None:
        msg = ('Quadratic relations ' +
               f"{[format_series(r) for r in relations]} are not covered " +
               'by the exponential family.')
        logging.error(msg)
        raise err.HullCertificationFailure(msg)
    family: Optional[DeformationData] = None
    for current in range(2, order + 1):
        family = build_exponential_family(reps, current - 1, relation)
        report = check_deformation(family, check_bound)
        if not report.ok:
            msg = (f"Exponential family fails at order {current}: " +
                   str(report.violations[0]))
            logging.error(msg)
            raise err.HullCertificationFailure(msg)
        logging.debug('Hull certified at order %s', current)
    assert family is not None
    witness = (relation is Relation.COMMUTATOR and
               truncated_algebra.is_commutative_witness(family.algebra))
    hull = HullPresentation(
        generators=tuple(f"t{k + 1}" for k in range(len(reps))),
        relations=relations if order >= 3 else list(),
        order_verified=order,
        relation=relation,
        cup_scale=obstruction.scale,
        commutative_witness=witness)
    logging.info('Hull for a = %s, b = %s verified to order %s: %s',
                 params.a, params.b, order, hull.relation_strings())
    return hull, family
