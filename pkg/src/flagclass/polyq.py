"""Exact rational interpolation of integer counting functions of q.

All arithmetic is fractions.Fraction; there is no tolerance anywhere.
Coefficients are stored ascending, trailing zeros trimmed, so the zero
polynomial is the empty tuple.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import DuplicateAbscissa

DEFAULT_Q_POOL = (2, 3, 4, 5, 7, 8, 9)


@dataclass(frozen=True)
class RationalPolynomial:
    coefficients: tuple
    sample_points: tuple

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def interpolate(points) -> RationalPolynomial:
    """Newton divided differences over the given (q, value) pairs."""
    points = [(int(x), Fraction(v)) for x, v in points]
    if not points:
        raise ValueError("need at least one point")
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa(f"repeated abscissa in {xs}")
    dd = [v for _, v in points]
    for level in range(1, len(points)):
        for i in range(len(points) - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    # expand the Newton form to monomial coefficients, Horner style
    coeffs = [dd[-1]]
    for i in range(len(points) - 2, -1, -1):
        shifted = [Fraction(0)] + coeffs
        coeffs = [c - xs[i] * coeffs[j] if j < len(coeffs) else c for j, c in enumerate(shifted)]
        coeffs[0] += dd[i]
    poly = RationalPolynomial(_trim(coeffs), tuple((x, int(v)) for x, v in points))
    for x, v in points:
        assert poly.evaluate(x) == v
    return poly


def certify_integer_coefficients(poly: RationalPolynomial) -> bool:
    return all(c.denominator == 1 for c in poly.coefficients)


def rebase_q_minus_1(poly: RationalPolynomial) -> tuple:
    """Coefficients of the same polynomial in powers of (q - 1), ascending."""
    a = poly.coefficients
    out = []
    for j in range(len(a)):
        out.append(sum((a[i] * comb(i, j) for i in range(j, len(a))), Fraction(0)))
    return _trim(out) if out else ()


def rebase_to_q(coeffs) -> tuple:
    """Inverse of rebase_q_minus_1."""
    coeffs = tuple(Fraction(c) for c in coeffs)
    out = []
    for j in range(len(coeffs)):
        out.append(
            sum(
                (coeffs[i] * comb(i, j) * (-1) ** (i - j) for i in range(j, len(coeffs))),
                Fraction(0),
            )
        )
    return _trim(out) if out else ()


@dataclass(frozen=True)
class StabilityReport:
    holdout: int
    predicted: Fraction
    actual: int
    match: bool


def stability_check(counts: dict, holdout: int) -> StabilityReport:
    """Interpolate with the holdout removed and compare the prediction."""
    if holdout not in counts:
        raise ValueError(f"holdout {holdout} not among sampled q")
    rest = [(q, v) for q, v in sorted(counts.items()) if q != holdout]
    poly = interpolate(rest)
    predicted = poly.evaluate(holdout)
    actual = counts[holdout]
    return StabilityReport(holdout, predicted, actual, predicted == actual)


def default_schedule(dim_u: int, cap: int, pool=DEFAULT_Q_POOL):
    """Sample points under the cap; flags undersampling past the degree bound."""
    qs = [q for q in pool if q**dim_u <= cap]
    return qs, len(qs) < dim_u + 1


def poly_to_json(poly: RationalPolynomial, basis: str = "q") -> dict:
    if basis == "q":
        coeffs = poly.coefficients
    elif basis == "q-1":
        coeffs = rebase_q_minus_1(poly)
    else:
        raise ValueError(f"unknown basis {basis!r}")
    return {
        "basis": basis,
        "coeffs": [[c.numerator, c.denominator] for c in coeffs],
        "samples": [[q, v] for q, v in poly.sample_points],
        "integer_certified": certify_integer_coefficients(poly),
    }
