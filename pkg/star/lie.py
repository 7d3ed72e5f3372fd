"""Finite-dimensional Lie algebras given by exact structure constants."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Sequence, Tuple

Constants = Tuple[Tuple[Tuple[Fraction, ...], ...], ...]


class LieAlgebraError(ValueError):
    pass


class LieAlgebra:
    """
    ``c[i][j][k]`` is the coefficient of ``x_k`` in ``[x_i, x_j]``. The linear
    Poisson bivector on the dual is ``alpha^{ij}(x) = sum_k c[i][j][k] x^k``.
    """

    def __init__(self, c: Sequence, name: str = ""):
        d = len(c)
        try:
            constants = tuple(
                tuple(tuple(Fraction(value) for value in c[i][j]) for j in range(d))
                for i in range(d)
            )
        except (TypeError, IndexError, ValueError) as exc:
            raise LieAlgebraError(f"malformed structure constants: {exc}") from None
        if any(len(row) != d or any(len(entry) != d for entry in row) for row in c):
            raise LieAlgebraError("structure constants must form a d x d x d table")
        self.dim = d
        self.c: Constants = constants
        self.name = name
        self._validate()

    def _validate(self):
        d, c = self.dim, self.c
        for i, j, k in itertools.product(range(d), repeat=3):
            if c[i][j][k] != -c[j][i][k]:
                raise LieAlgebraError(f"bracket is not antisymmetric at ({i}, {j}, {k})")
        for i, j, k, l in itertools.product(range(d), repeat=4):
            total = sum(
                c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l]
                for m in range(d)
            )
            if total:
                raise LieAlgebraError(f"Jacobi identity fails at ({i}, {j}, {k}, {l})")

    @property
    def abelian(self) -> bool:
        return not any(value for row in self.c for entry in row for value in entry)

    def bracket(self, i: int, j: int) -> Dict[int, Fraction]:
        return {k: value for k, value in enumerate(self.c[i][j]) if value}

    def __repr__(self):
        return f"LieAlgebra({self.name or self.dim})"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "c": [[[str(value) for value in entry] for entry in row] for row in self.c],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LieAlgebra":
        algebra = cls(data["c"], data.get("name", ""))
        if algebra.dim != data.get("dim", algebra.dim):
            raise LieAlgebraError(f"dimension {data['dim']} does not match the table")
        return algebra


def _from_brackets(d: int, brackets: Dict[Tuple[int, int], Dict[int, int]], name: str):
    c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for (i, j), values in brackets.items():
        for k, value in values.items():
            c[i][j][k] = Fraction(value)
            c[j][i][k] = -Fraction(value)
    return LieAlgebra(c, name)


def abelian(d: int = 3) -> LieAlgebra:
    return _from_brackets(d, {}, f"abelian({d})")


def heisenberg() -> LieAlgebra:
    """``[x, y] = z``."""
    return _from_brackets(3, {(0, 1): {2: 1}}, "heisenberg")


def sl2() -> LieAlgebra:
    """Basis ``(e, f, h)``: ``[e, f] = h``, ``[h, e] = 2e``, ``[h, f] = -2f``."""
    return _from_brackets(3, {(0, 1): {2: 1}, (2, 0): {0: 2}, (2, 1): {1: -2}}, "sl2")


def affine2() -> LieAlgebra:
    """The two-dimensional non-abelian algebra, ``[x, y] = y``."""
    return _from_brackets(2, {(0, 1): {1: 1}}, "affine2")


ALGEBRAS = {
    "abelian": abelian,
    "heisenberg": heisenberg,
    "sl2": sl2,
    "affine2": affine2,
}


def lie_algebra(name: str) -> LieAlgebra:
    try:
        return ALGEBRAS[name]()
    except KeyError:
        raise LieAlgebraError(f"unknown Lie algebra {name!r}") from None
