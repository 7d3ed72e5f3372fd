"""Exact rational row reduction."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Matrix = List[List[Fraction]]


def row_echelon(rows: Sequence[Sequence], width: int) -> Tuple[Matrix, List[int]]:
    """
    Reduced row echelon form over the rationals.

    Returns the nonzero reduced rows and the pivot column of each row.
    """
    matrix: Matrix = [[Fraction(x) for x in row] for row in rows]
    pivots: List[int] = []
    free_row = 0
    for col in range(width):
        pivot = None
        for i in range(free_row, len(matrix)):
            if matrix[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != free_row:
            matrix[pivot], matrix[free_row] = matrix[free_row], matrix[pivot]
        row = matrix[free_row]
        scale = row[col]
        if scale != 1:
            matrix[free_row] = row = [x / scale for x in row]
        for i in range(len(matrix)):
            if i != free_row and matrix[i][col] != 0:
                factor = matrix[i][col]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], row)]
        pivots.append(col)
        free_row += 1
        if free_row == len(matrix):
            break
    return matrix[:free_row], pivots
