"""Small exact linear algebra over the rationals."""
from __future__ import annotations

from fractions import Fraction


class SingularMatrix(ArithmeticError):
    pass


def solve(matrix: list[list], rhs: list[list]) -> list[list]:
    """Solve A X = B by Gauss-Jordan elimination; B may have several columns."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(x) for x in brow] for row, brow in zip(matrix, rhs)]
    width = len(a[0]) if a else 0
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix(f"singular at column {col}")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        rowc = [x * inv for x in a[col]]
        a[col] = rowc
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                row = a[r]
                a[r] = [x - f * y for x, y in zip(row, rowc)]
    return [row[n:width] for row in a]


def inverse(matrix: list[list]) -> list[list]:
    n = len(matrix)
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return solve(matrix, eye)
