"""Exact polynomials in the coordinates of the dual space, and truncated h-series of them."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


class Polynomial:
    def __init__(self, dim: int, terms: Dict[Exponent, Scalar] = None):
        self.dim = dim
        self.terms: Dict[Exponent, Fraction] = {}
        for exponent, coefficient in (terms or {}).items():
            self._add(tuple(exponent), Fraction(coefficient))

    def _add(self, exponent: Exponent, coefficient: Fraction):
        if len(exponent) != self.dim or any(e < 0 for e in exponent):
            raise ValueError(f"exponent {exponent} for a polynomial in {self.dim} variables")
        total = self.terms.get(exponent, Fraction(0)) + coefficient
        if total:
            self.terms[exponent] = total
        else:
            self.terms.pop(exponent, None)

    @classmethod
    def constant(cls, dim: int, value: Scalar = 1) -> "Polynomial":
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def variable(cls, dim: int, i: int) -> "Polynomial":
        return cls.monomial(tuple(int(k == i) for k in range(dim)))

    @classmethod
    def monomial(cls, exponent: Sequence[int], coefficient: Scalar = 1) -> "Polynomial":
        return cls(len(exponent), {tuple(exponent): coefficient})

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.dim == other.dim and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.dim, other)
        return NotImplemented

    def _check(self, other: "Polynomial"):
        if other.dim != self.dim:
            raise ValueError(f"polynomials in {self.dim} and {other.dim} variables")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        result = Polynomial(self.dim, self.terms)
        for exponent, coefficient in other.terms.items():
            result._add(exponent, coefficient)
        return result

    def __neg__(self) -> "Polynomial":
        return self.scale(-1)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, scalar: Scalar) -> "Polynomial":
        scalar = Fraction(scalar)
        if not scalar:
            return Polynomial(self.dim)
        return Polynomial(self.dim, {e: c * scalar for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        result = Polynomial(self.dim)
        for (a, x), (b, y) in itertools.product(self.terms.items(), other.terms.items()):
            result._add(tuple(i + j for i, j in zip(a, b)), x * y)
        return result

    def __rmul__(self, other):
        return self.scale(other)

    def derivative(self, i: int) -> "Polynomial":
        result = Polynomial(self.dim)
        for exponent, coefficient in self.terms.items():
            if exponent[i]:
                lowered = exponent[:i] + (exponent[i] - 1,) + exponent[i + 1 :]
                result._add(lowered, coefficient * exponent[i])
        return result

    def partial(self, indices: Iterable[int]) -> "Polynomial":
        result = self
        for i in indices:
            if not result:
                break
            result = result.derivative(i)
        return result

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exponent, coefficient in sorted(self.terms.items(), reverse=True):
            factors = [f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exponent) if e]
            parts.append(" ".join([str(coefficient)] + factors))
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "terms": [
                {"exp": list(exponent), "coef": str(coefficient)}
                for exponent, coefficient in sorted(self.terms.items())
            ]
        }

    @classmethod
    def from_json(cls, data: dict, dim: int = None) -> "Polynomial":
        terms = data["terms"]
        if dim is None:
            if not terms:
                raise ValueError("the dimension of an empty polynomial must be given")
            dim = len(terms[0]["exp"])
        result = cls(dim)
        for term in terms:
            result._add(tuple(term["exp"]), Fraction(term["coef"]))
        return result


def monomials(dim: int, degree: int, lowest: int = 0) -> Iterator[Polynomial]:
    """Monic monomials of total degree ``lowest..degree``."""
    for total in range(lowest, degree + 1):
        for exponent in itertools.product(range(total + 1), repeat=dim):
            if sum(exponent) == total:
                yield Polynomial.monomial(exponent)


class HSeries:
    """``sum_{n <= order} h^n terms[n]``."""

    def __init__(self, order: int, dim: int, terms: Sequence[Polynomial] = ()):
        self.order = order
        self.dim = dim
        self.terms: List[Polynomial] = [Polynomial(dim) for _ in range(order + 1)]
        for n, term in enumerate(terms):
            if n <= order:
                self.terms[n] = term

    @classmethod
    def of(cls, f: Polynomial, order: int) -> "HSeries":
        return cls(order, f.dim, [f])

    def __getitem__(self, n: int) -> Polynomial:
        return self.terms[n]

    def __setitem__(self, n: int, value: Polynomial):
        self.terms[n] = value

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, HSeries):
            return NotImplemented
        return (self.order, self.terms) == (other.order, other.terms)

    def __add__(self, other: "HSeries") -> "HSeries":
        order = min(self.order, other.order)
        return HSeries(order, self.dim, [a + b for a, b in zip(self.terms, other.terms)])

    def __neg__(self) -> "HSeries":
        return HSeries(self.order, self.dim, [-a for a in self.terms])

    def __sub__(self, other: "HSeries") -> "HSeries":
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.terms)

    def __repr__(self):
        return " + ".join(f"h^{n}({term})" for n, term in enumerate(self.terms) if term) or "0"

    def to_json(self) -> dict:
        return {"N": self.order, "terms": [term.to_json() for term in self.terms]}

    @classmethod
    def from_json(cls, data: dict, dim: int) -> "HSeries":
        return cls(int(data["N"]), dim, [Polynomial.from_json(t, dim) for t in data["terms"]])


def random_polynomial(rng, dim: int, degree: int, density: float = 0.4) -> Polynomial:
    """Small integer coefficients on a random subset of the monomials of degree ``<= degree``."""
    terms = {}
    for f in monomials(dim, degree):
        if rng.random() < density:
            (exponent,) = f.terms
            terms[exponent] = int(rng.integers(-3, 4))
    return Polynomial(dim, terms)
