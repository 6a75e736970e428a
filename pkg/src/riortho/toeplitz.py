"""Toeplitz systems with a scalar diagonal and their fast bordered inversion.

The systems solved here have entry (i, j) equal to ``o[i - j]`` for a
two-sided scalar table ``o``, with ``o[0]`` constant along the diagonal.
A Levinson-type recursion tracks the first and last columns of the
inverse of each leading principal submatrix together with the running
ratio of principal minors, which is exactly the data needed to solve
right-hand sides supported on the first and last positions.

A dense partial-pivot elimination is kept alongside as an independent
route; numpy is used for array storage only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, MinorBreakdown

_BREAK_TOL = 0.0


def _cplx(value):
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(re, im)
    return complex(value)


class ToeplitzSystem:
    """Two-sided diagonal-constant table defining the family of systems.

    ``lower[k - 1]`` holds the entry ``o[k]`` appearing k places below the
    diagonal and ``upper[k - 1]`` holds ``o[-k]`` appearing k places above.
    """

    __slots__ = ("lower", "upper", "diag")

    def __init__(self, lower, upper, diag=1.0):
        self.lower = [complex(v) for v in lower]
        self.upper = [complex(v) for v in upper]
        self.diag = complex(diag)
        if self.diag == 0:
            raise InvalidInput("diagonal entry must be nonzero")

    def order_limit(self):
        return min(len(self.lower), len(self.upper))

    def entry(self, i, j):
        """Entry at row i, column j of any large enough dense section."""
        k = i - j
        if k == 0:
            return self.diag
        if k > 0:
            if k > len(self.lower):
                raise InvalidInput(f"table has no entry {k} below the diagonal")
            return self.lower[k - 1]
        if -k > len(self.upper):
            raise InvalidInput(f"table has no entry {-k} above the diagonal")
        return self.upper[-k - 1]

    def to_json(self):
        return {
            "lower": [[v.real, v.imag] for v in self.lower],
            "upper": [[v.real, v.imag] for v in self.upper],
            "diag": [self.diag.real, self.diag.imag],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            [_cplx(v) for v in data["lower"]],
            [_cplx(v) for v in data["upper"]],
            _cplx(data.get("diag", 1.0)),
        )


def dense_matrix(system, n):
    """Dense (n+1) x (n+1) section as a numpy array of complex entries."""
    if n < 0:
        raise InvalidInput("section order must be nonnegative")
    if n > system.order_limit():
        raise InvalidInput("table too shallow for the requested section")
    out = np.empty((n + 1, n + 1), dtype=complex)
    for i in range(n + 1):
        for j in range(n + 1):
            out[i, j] = system.entry(i, j)
    return out


def dense_solve(matrix, rhs):
    """Partial-pivot elimination; independent of the fast recursion."""
    a = np.array(matrix, dtype=complex)
    b = np.array(rhs, dtype=complex)
    m = a.shape[0]
    if a.shape != (m, m) or b.shape != (m,):
        raise InvalidInput("square matrix and matching right-hand side required")
    for col in range(m):
        pivot_row = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[pivot_row, col]) == 0:
            raise InvalidInput("matrix is singular")
        if pivot_row != col:
            a[[col, pivot_row]] = a[[pivot_row, col]]
            b[[col, pivot_row]] = b[[pivot_row, col]]
        for row in range(col + 1, m):
            factor = a[row, col] / a[col, col]
            if factor != 0:
                a[row, col:] -= factor * a[col, col:]
                b[row] -= factor * b[col]
    x = np.zeros(m, dtype=complex)
    for row in range(m - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1:] @ x[row + 1:]) / a[row, row]
    return x


def dense_det(matrix):
    """Determinant via the same elimination, pivot products with swap signs."""
    a = np.array(matrix, dtype=complex)
    m = a.shape[0]
    if a.shape != (m, m):
        raise InvalidInput("square matrix required")
    det = complex(1.0)
    for col in range(m):
        pivot_row = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[pivot_row, col]) == 0:
            return complex(0.0)
        if pivot_row != col:
            a[[col, pivot_row]] = a[[pivot_row, col]]
            det = -det
        det *= a[col, col]
        for row in range(col + 1, m):
            factor = a[row, col] / a[col, col]
            if factor != 0:
                a[row, col:] -= factor * a[col, col:]
    return det


@dataclass(frozen=True)
class ZoharTable:
    """First and last inverse columns per order, with minor ratios.

    ``chi_hat[m]`` is the length-m tail of the first inverse column at
    order m (the leading entry is identically 1 before the 1/lambda
    scaling), ``chi_tilde[m]`` the mirrored tail of the last column.
    ``lambdas`` refers to the table normalized to unit diagonal;
    ``det_ratios[m]`` restores the scalar diagonal so it equals the ratio
    of consecutive principal minors of the original system.
    """

    n: int
    diag: complex
    chi_hat: tuple
    chi_tilde: tuple
    lambdas: tuple
    det_ratios: tuple


def zohar_invert(system, n):
    """Run the bordered recursion up to order n.

    Raises MinorBreakdown at the first order whose normalized minor
    ratio vanishes exactly; nearly singular sections are left to the
    caller's tolerance policy.
    """
    if n < 0:
        raise InvalidInput("order must be nonnegative")
    if n > system.order_limit():
        raise InvalidInput("table too shallow for the requested order")
    d = system.diag
    lower = [v / d for v in system.lower]
    upper = [v / d for v in system.upper]

    chi_hat_rows = [()]
    chi_tilde_rows = [()]
    lambdas = [complex(1.0)]
    hat = []
    tilde = []
    for m in range(n):
        lam = lambdas[m]
        if abs(lam) <= _BREAK_TOL:
            raise MinorBreakdown(m, "principal minor ratio vanished")
        gamma = lower[m]
        delta = upper[m]
        for i in range(1, m + 1):
            gamma += hat[i - 1] * lower[m - i]
            delta += tilde[i - 1] * upper[m - i]
        g = gamma / lam
        t = delta / lam
        new_hat = [hat[i - 1] - g * tilde[m - i] for i in range(1, m + 1)]
        new_hat.append(-g)
        new_tilde = [tilde[i - 1] - t * hat[m - i] for i in range(1, m + 1)]
        new_tilde.append(-t)
        hat = new_hat
        tilde = new_tilde
        chi_hat_rows.append(tuple(hat))
        chi_tilde_rows.append(tuple(tilde))
        lambdas.append(lam - gamma * delta / lam)
    if abs(lambdas[n]) <= _BREAK_TOL:
        raise MinorBreakdown(n, "principal minor ratio vanished")
    return ZoharTable(
        n=n,
        diag=d,
        chi_hat=tuple(chi_hat_rows),
        chi_tilde=tuple(chi_tilde_rows),
        lambdas=tuple(lambdas),
        det_ratios=tuple(d * lam for lam in lambdas),
    )


def _end_solve(table, first_load, last_load, order):
    """Combine the first and last inverse columns at the given order."""
    n = table.n if order is None else order
    if not 0 <= n <= table.n:
        raise InvalidInput("order outside the inverted range")
    hat = table.chi_hat[n]
    tilde = table.chi_tilde[n]
    lam = table.lambdas[n] * table.diag
    out = []
    for i in range(n + 1):
        front = hat[i - 1] if i >= 1 else 1.0
        back = tilde[n - i - 1] if n - i >= 1 else 1.0
        out.append((front * first_load + back * last_load) / lam)
    return out


def solve_hat(table, upsilon_hat, upsilon_tilde, x_n0, order=None):
    """Solution whose loads are the plain pairing column.

    The right-hand side is ``upsilon_hat / x_n0`` at the first position
    and ``-upsilon_tilde / x_n0`` at the last, zero in between.
    """
    return _end_solve(table, upsilon_hat / x_n0, -upsilon_tilde / x_n0, order)


def solve_tilde(table, upsilon_hat, upsilon_tilde, x_n0, order=None):
    """Companion solution with the two loads exchanged."""
    return _end_solve(table, upsilon_tilde / x_n0, -upsilon_hat / x_n0, order)
