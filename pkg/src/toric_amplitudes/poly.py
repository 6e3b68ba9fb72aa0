"""Sparse exact multivariate polynomials.

Exponent vectors are dense tuples aligned with a ``VarSet``; terms iterate in
graded lexicographic order (largest first). sympy is only used at the
elimination boundary: resultants, univariate gcds and factor lists.
"""
import logging
import re
from fractions import Fraction
from typing import (
    Any,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import sympy

from .errors import PolynomialError
from .exact import RAT_RE, format_rat, parse_rat

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]

TERM_RE = re.compile(r"([+-]?)([^+-]+)")


class VarSet:
    def __init__(self, labels: Iterable[str]):
        self.labels: Tuple[str, ...] = tuple(labels)
        self._index = {label: i for i, label in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise PolynomialError(f"repeated variable label in {self.labels}")

    @staticmethod
    def numbered(prefix: str, n: int) -> "VarSet":
        return VarSet(f"{prefix}{i + 1}" for i in range(n))

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise PolynomialError(f"unknown variable {label}")

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __getitem__(self, i: int) -> str:
        return self.labels[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VarSet) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"VarSet({list(self.labels)})"


def _order_key(e: Exponent) -> Tuple[int, Exponent]:
    return (sum(e), e)


class SparsePoly:
    __slots__ = ("vars", "_terms")

    def __init__(self, variables: VarSet, terms: Optional[Mapping[Exponent, Any]] = None):
        clean: Dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            if len(e) != len(variables):
                raise PolynomialError(
                    f"exponent {e} does not match {len(variables)} variables"
                )
            c = Fraction(c)
            if c != 0:
                clean[tuple(e)] = c
        self.vars = variables
        self._terms = clean

    # construction

    @staticmethod
    def zero(variables: VarSet) -> "SparsePoly":
        return SparsePoly(variables)

    @staticmethod
    def constant(variables: VarSet, c: Any) -> "SparsePoly":
        return SparsePoly(variables, {(0,) * len(variables): c})

    @staticmethod
    def variable(variables: VarSet, label: str) -> "SparsePoly":
        e = [0] * len(variables)
        e[variables.index(label)] = 1
        return SparsePoly(variables, {tuple(e): 1})

    @staticmethod
    def monomial(variables: VarSet, labels: Iterable[str], coef: Any = 1) -> "SparsePoly":
        e = [0] * len(variables)
        for label in labels:
            e[variables.index(label)] += 1
        return SparsePoly(variables, {tuple(e): coef})

    @staticmethod
    def linear(
        variables: VarSet, coefs: Mapping[str, Any], constant: Any = 0
    ) -> "SparsePoly":
        terms: Dict[Exponent, Any] = {(0,) * len(variables): constant}
        for label, c in coefs.items():
            e = [0] * len(variables)
            e[variables.index(label)] = 1
            terms[tuple(e)] = c
        return SparsePoly(variables, terms)

    @staticmethod
    def parse(text: str, variables: VarSet) -> "SparsePoly":
        s = text.replace(" ", "").replace("−", "-")
        if not s:
            raise PolynomialError("empty polynomial text")
        matches = list(TERM_RE.finditer(s))
        if "".join(m.group(0) for m in matches) != s:
            raise PolynomialError(f"cannot parse polynomial {text!r}")
        terms: Dict[Exponent, Fraction] = {}
        for m in matches:
            coef = Fraction(-1 if m.group(1) == "-" else 1)
            e = [0] * len(variables)
            for factor in m.group(2).split("*"):
                if RAT_RE.match(factor):
                    coef *= parse_rat(factor)
                    continue
                name, _, power = factor.partition("^")
                if power and not power.isdigit():
                    raise PolynomialError(f"bad exponent in {factor!r}")
                e[variables.index(name)] += int(power or 1)
            terms[tuple(e)] = terms.get(tuple(e), Fraction(0)) + coef
        return SparsePoly(variables, terms)

    # inspection

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Exponent, Fraction]]:
        "Terms in canonical (graded lex, descending) order"
        return sorted(self._terms.items(), key=lambda t: _order_key(t[0]), reverse=True)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def total_degree(self) -> int:
        "-1 for the zero polynomial"
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, label: str) -> int:
        i = self.vars.index(label)
        return max((e[i] for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def coefficient(self, e: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(e), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * len(self.vars))

    def linear_coefficients(self) -> Dict[str, Fraction]:
        if self.total_degree() > 1:
            raise PolynomialError(f"not a linear form: {self}")
        coefs = {}
        for i, label in enumerate(self.vars):
            e = [0] * len(self.vars)
            e[i] = 1
            c = self.coefficient(e)
            if c != 0:
                coefs[label] = c
        return coefs

    def support(self) -> List[str]:
        "Labels occurring in some term, in VarSet order"
        return [
            label
            for i, label in enumerate(self.vars)
            if any(e[i] > 0 for e in self._terms)
        ]

    # arithmetic

    def _coerce(self, other: Any) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.vars != self.vars:
                raise PolynomialError(f"variable sets differ: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.constant(self.vars, other)
        return NotImplemented

    def __add__(self, other: Any) -> "SparsePoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return SparsePoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Any) -> "SparsePoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "SparsePoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            return SparsePoly(self.vars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: Dict[Exponent, Fraction] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                e = tuple(x + y for x, y in zip(a, b))
                terms[e] = terms.get(e, Fraction(0)) + ca * cb
        return SparsePoly(self.vars, terms)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "SparsePoly":
        if not isinstance(other, (int, Fraction)) or other == 0:
            raise PolynomialError(f"can only divide by a nonzero scalar, got {other!r}")
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, k: int) -> "SparsePoly":
        if k < 0:
            raise PolynomialError("negative power")
        result = SparsePoly.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.constant(self.vars, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.vars == other.vars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self._terms.items())))

    # evaluation and substitution

    def evaluate(self, values: Union[Sequence[Any], Mapping[str, Any]]) -> Fraction:
        if isinstance(values, Mapping):
            point = [Fraction(values[label]) if label in values else None for label in self.vars]
        else:
            if len(values) != len(self.vars):
                raise PolynomialError(
                    f"{len(values)} values for {len(self.vars)} variables"
                )
            point = [Fraction(v) for v in values]
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    if point[i] is None:
                        raise PolynomialError(f"no value for {self.vars[i]}")
                    term *= point[i] ** k
            total += term
        return total

    def partial(self, label: str) -> "SparsePoly":
        i = self.vars.index(label)
        terms = {}
        for e, c in self._terms.items():
            if e[i] > 0:
                d = list(e)
                d[i] -= 1
                terms[tuple(d)] = c * e[i]
        return SparsePoly(self.vars, terms)

    def rename(self, target: VarSet, mapping: Optional[Mapping[str, str]] = None) -> "SparsePoly":
        "Embeds into ``target``, sending each label through ``mapping`` (identity by default)"
        positions = []
        for label in self.vars:
            new = mapping.get(label, label) if mapping else label
            positions.append(target.index(new))
        terms: Dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            d = [0] * len(target)
            for i, k in enumerate(e):
                d[positions[i]] += k
            terms[tuple(d)] = terms.get(tuple(d), Fraction(0)) + c
        return SparsePoly(target, terms)

    def __str__(self) -> str:
        parts = []
        for n, (e, c) in enumerate(self.items()):
            mono = "*".join(
                label if k == 1 else f"{label}^{k}"
                for label, k in zip(self.vars, e)
                if k
            )
            magnitude = abs(c)
            if not mono:
                body = format_rat(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{format_rat(magnitude)}*{mono}"
            if n == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts) or "0"

    def __repr__(self) -> str:
        return f"SparsePoly({self})"


LinForm = SparsePoly


def substitute(
    p: SparsePoly, mapping: Mapping[str, SparsePoly], target: Optional[VarSet] = None
) -> SparsePoly:
    if target is None:
        if not mapping:
            raise PolynomialError("substitution without a target variable set")
        target = next(iter(mapping.values())).vars
    for label, value in mapping.items():
        if value.vars != target:
            raise PolynomialError(f"image of {label} is not over {target}")
    powers: Dict[Tuple[int, int], SparsePoly] = {}

    def power(i: int, k: int) -> SparsePoly:
        if (i, k) not in powers:
            label = p.vars[i]
            if label not in mapping:
                raise PolynomialError(f"substitution has no image for {label}")
            powers[(i, k)] = mapping[label] ** k
        return powers[(i, k)]

    result = SparsePoly.zero(target)
    for e, c in p.items():
        term = SparsePoly.constant(target, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        result = result + term
    return result


def restrict_zero(p: SparsePoly, zeroed: Iterable[str]) -> SparsePoly:
    idx = [p.vars.index(label) for label in zeroed]
    return SparsePoly(
        p.vars, {e: c for e, c in p.terms.items() if all(e[i] == 0 for i in idx)}
    )


def monomial_content(p: SparsePoly) -> Tuple[SparsePoly, SparsePoly]:
    if p.is_zero():
        raise PolynomialError("monomial content of the zero polynomial")
    exps = list(p.terms)
    low = tuple(min(e[i] for e in exps) for i in range(len(p.vars)))
    monomial = SparsePoly(p.vars, {low: 1})
    cofactor = SparsePoly(
        p.vars,
        {tuple(a - b for a, b in zip(e, low)): c for e, c in p.terms.items()},
    )
    return monomial, cofactor


def divide_linear(p: SparsePoly, ell: LinForm) -> Optional[SparsePoly]:
    if ell.is_zero():
        raise PolynomialError("division by the zero form")
    if ell.total_degree() > 1:
        raise PolynomialError(f"not a linear form: {ell}")
    if p.vars != ell.vars:
        raise PolynomialError("variable sets differ")
    lead_e, lead_c = ell.items()[0]
    quotient: Dict[Exponent, Fraction] = {}
    rest = p.terms
    while rest:
        e = max(rest, key=_order_key)
        if any(a < b for a, b in zip(e, lead_e)):
            return None
        t = tuple(a - b for a, b in zip(e, lead_e))
        tc = rest[e] / lead_c
        quotient[t] = tc
        for f, c in ell.terms.items():
            g = tuple(a + b for a, b in zip(t, f))
            value = rest.get(g, Fraction(0)) - tc * c
            if value:
                rest[g] = value
            else:
                rest.pop(g, None)
    return SparsePoly(p.vars, quotient)


# sympy boundary


def _symbols(variables: VarSet) -> List[sympy.Symbol]:
    return [sympy.Symbol(label) for label in variables]


def to_sympy(p: SparsePoly) -> sympy.Expr:
    syms = _symbols(p.vars)
    expr = sympy.Integer(0)
    for e, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            if k:
                term *= s ** k
        expr += term
    return expr


def from_sympy(expr: sympy.Expr, variables: VarSet) -> SparsePoly:
    syms = _symbols(variables)
    poly = sympy.Poly(expr, *syms, domain="QQ")
    terms = {}
    for monom, coeff in poly.terms():
        q = sympy.Rational(coeff)
        terms[tuple(int(k) for k in monom)] = Fraction(int(q.p), int(q.q))
    return SparsePoly(variables, terms)


def resultant_bivar(p: SparsePoly, q: SparsePoly, eliminate: str) -> SparsePoly:
    "Sylvester resultant with the rows of p first"
    if p.vars != q.vars or len(p.vars) != 2:
        raise PolynomialError("resultant needs two polynomials over the same two variables")
    if p.is_zero() or q.is_zero():
        raise PolynomialError("resultant of the zero polynomial")
    other = [label for label in p.vars if label != eliminate]
    if len(other) != 1:
        raise PolynomialError(f"{eliminate} is not one of {p.vars.labels}")
    res = sympy.resultant(to_sympy(p), to_sympy(q), sympy.Symbol(eliminate))
    return from_sympy(sympy.expand(res), VarSet(other))


def univariate_gcd(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    if p.vars != q.vars or len(p.vars) != 1:
        raise PolynomialError("univariate gcd needs one common variable")
    g = sympy.gcd(to_sympy(p), to_sympy(q))
    return from_sympy(g, p.vars)


def factor_list(p: SparsePoly) -> Tuple[Fraction, List[Tuple[SparsePoly, int]]]:
    "Irreducible factors over QQ with multiplicities"
    if p.is_zero():
        raise PolynomialError("factoring the zero polynomial")
    const, factors = sympy.factor_list(to_sympy(p), *_symbols(p.vars))
    c = sympy.Rational(const)
    return (
        Fraction(int(c.p), int(c.q)),
        [(from_sympy(f, p.vars), int(k)) for f, k in factors],
    )


def linear_factors(p: SparsePoly) -> Optional[Tuple[Fraction, List[Tuple[SparsePoly, int]]]]:
    "The factorization of p when every factor is linear, None otherwise"
    const, factors = factor_list(p)
    if any(f.total_degree() > 1 for f, _ in factors):
        return None
    return const, factors


def rational_roots(p: SparsePoly) -> List[Fraction]:
    if len(p.vars) != 1:
        raise PolynomialError("rational roots of a multivariate polynomial")
    if p.is_zero() or p.is_constant():
        return []
    roots = set()
    for f, _ in factor_list(p)[1]:
        if f.total_degree() == 1:
            a = f.coefficient((1,))
            b = f.coefficient((0,))
            roots.add(-b / a)
    return sorted(roots)


def poly_gcd(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    "Multivariate gcd over QQ, made monic in the canonical order"
    if p.vars != q.vars:
        raise PolynomialError("variable sets differ")
    g = from_sympy(sympy.gcd(to_sympy(p), to_sympy(q)), p.vars)
    if g.is_zero():
        return g
    return g / g.items()[0][1]
