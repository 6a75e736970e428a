"""Dense complex polynomial arithmetic.

Coefficients are stored ascending (``coeffs[k]`` multiplies ``z**k``) as plain
Python complex scalars; every sequence this package builds stays below degree
a few dozen, so there is nothing to gain from array storage here.  Values are
immutable; all operations return new polynomials.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import InvalidDegree, InvalidInput, RootFindFailure

# Relative cutoff below which a trailing coefficient does not count toward the
# degree.  Interior coefficients are never dropped.
TRIM_REL = 1e-12

_ABERTH_MAX_ITER = 500
# Fixed irrational angle offset for the starting circle, for reproducible runs.
_INIT_ANGLE = 1.0 / math.sqrt(2.0)


class ComplexPoly:
    """Immutable polynomial with complex coefficients, ascending powers."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs):
        cs = [complex(c) for c in coeffs] or [0j]
        top = max(abs(c) for c in cs)
        cut = TRIM_REL * top
        last = 0
        for k, c in enumerate(cs):
            if abs(c) > cut:
                last = k
        if top == 0.0:
            cs = [0j]
        else:
            cs = cs[: last + 1]
        self._coeffs = tuple(cs)

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Index of the last significant coefficient; -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        return len(self._coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self._coeffs) == 1 and self._coeffs[0] == 0j

    def coeff(self, k: int) -> complex:
        """Coefficient of z^k, zero outside the stored range."""
        if 0 <= k < len(self._coeffs):
            return self._coeffs[k]
        return 0j

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self._coeffs):
            acc = acc * z + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, ComplexPoly) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"ComplexPoly({list(self._coeffs)!r})"

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        a, b = self._coeffs, other._coeffs
        n = max(len(a), len(b))
        return ComplexPoly(
            [(a[k] if k < len(a) else 0j) + (b[k] if k < len(b) else 0j) for k in range(n)]
        )

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return self + other.scale(-1.0)

    def __mul__(self, other: "ComplexPoly") -> "ComplexPoly":
        if self.is_zero or other.is_zero:
            return ComplexPoly([0j])
        a, b = self._coeffs, other._coeffs
        out = [0j] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0j:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return ComplexPoly(out)

    def scale(self, s: complex) -> "ComplexPoly":
        return ComplexPoly([s * c for c in self._coeffs])

    def shift_up(self, m: int = 1) -> "ComplexPoly":
        """Multiply by z^m."""
        if self.is_zero:
            return self
        return ComplexPoly([0j] * m + list(self._coeffs))

    def derivative(self) -> "ComplexPoly":
        if len(self._coeffs) == 1:
            return ComplexPoly([0j])
        return ComplexPoly([k * c for k, c in enumerate(self._coeffs)][1:])

    def to_json(self) -> dict:
        return {"coeffs": [[c.real, c.imag] for c in self._coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "ComplexPoly":
        return cls([complex(re, im) for re, im in data["coeffs"]])

    @classmethod
    def one(cls) -> "ComplexPoly":
        return cls([1.0])

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "ComplexPoly":
        return cls([0j] * k + [complex(c)])

    @classmethod
    def from_roots(cls, roots, lead: complex = 1.0) -> "ComplexPoly":
        p = cls([complex(lead)])
        for r in roots:
            p = p * cls([-complex(r), 1.0])
        return p


def add(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    return p + q


def scale(p: ComplexPoly, s: complex) -> ComplexPoly:
    return p.scale(s)


def mul(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    return p * q


def derivative(p: ComplexPoly) -> ComplexPoly:
    return p.derivative()


def divide_linear(p: ComplexPoly, root: complex) -> tuple[ComplexPoly, complex]:
    """Synthetic division by (z - root): returns (quotient, remainder).

    The remainder equals p(root) exactly in the arithmetic used; it is returned
    rather than discarded so callers can see how far p is from vanishing there.
    """
    a = p.coeffs
    n = len(a) - 1
    if n < 1:
        return ComplexPoly([0j]), a[0]
    root = complex(root)
    q = [0j] * n
    q[n - 1] = a[n]
    for k in range(n - 2, -1, -1):
        q[k] = a[k + 1] + root * q[k + 1]
    rem = a[0] + root * q[0]
    return ComplexPoly(q), rem


def eval_with_factor(p: ComplexPoly, root: complex, z: complex) -> complex:
    """Evaluate p(z) through its division by (z - root).

    Algebraically identical to p(z); numerically it avoids the cancellation
    that plain Horner suffers when p nearly vanishes at ``root`` and z is close
    to it.
    """
    q, rem = divide_linear(p, root)
    return (z - root) * q(z) + rem


def star(p: ComplexPoly, n: int | None = None) -> ComplexPoly:
    """Reversed-conjugate transform z^n * conj(p(1/conj(z))) at explicit degree n."""
    deg = max(p.degree, 0)
    if n is None:
        n = deg
    if n < deg:
        raise InvalidDegree(f"star degree {n} below polynomial degree {deg}")
    return ComplexPoly([p.coeff(n - k).conjugate() for k in range(n + 1)])


def is_self_inversive(p: ComplexPoly, tol: float = 1e-10) -> tuple[bool, complex | None]:
    """Test p == epsilon * star(p) with epsilon read off the extreme coefficients.

    Returns (flag, epsilon); epsilon is None when the test cannot pass
    structurally (vanishing constant term).
    """
    if p.is_zero:
        raise InvalidInput("self-inversive test undefined for the zero polynomial")
    n = p.degree
    a = [p.coeff(k) for k in range(n + 1)]
    scale_ = max(abs(c) for c in a)
    if abs(a[0]) <= tol * scale_:
        return False, None
    eps = a[n] / a[0].conjugate()
    if abs(abs(eps) - 1.0) >= tol:
        return False, eps
    worst = max(abs(a[k] - eps * a[n - k].conjugate()) for k in range(n + 1))
    return worst < tol * scale_, eps


@dataclass(frozen=True)
class RootReport:
    roots: tuple
    residuals: tuple
    multiplicity_flags: tuple
    iterations: int

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0


def roots(p: ComplexPoly, tol: float = 1e-13) -> RootReport:
    """All complex roots by simultaneous Aberth iteration.

    Starting points sit on the Cauchy-bound circle at equally spaced angles
    shifted by a fixed irrational offset, so runs are deterministic.  Residuals
    are |p(root)| scaled by nothing; the report flags root pairs closer than
    1e-6 as suspected multiplicities.
    """
    n = p.degree
    if n < 1:
        raise InvalidInput("root finding needs degree >= 1")
    a = [p.coeff(k) for k in range(n + 1)]
    if n == 1:
        r = -a[0] / a[1]
        return RootReport((r,), (abs(p(r)),), (False,), 0)

    dp = p.derivative()
    radius = 1.0 + max(abs(c / a[n]) for c in a[:n])
    zs = [
        radius * cmath.exp(1j * (2.0 * math.pi * k / n + _INIT_ANGLE))
        for k in range(n)
    ]
    best = list(zs)
    best_res = [abs(p(z)) for z in zs]

    it = 0
    for it in range(1, _ABERTH_MAX_ITER + 1):
        moved = 0.0
        for k in range(n):
            zk = zs[k]
            pv = p(zk)
            if pv == 0j:
                continue
            dv = dp(zk)
            if dv == 0j:
                zs[k] = zk * (1.0 + 1e-8) + 1e-8
                moved = max(moved, 1.0)
                continue
            w = pv / dv
            s = 0j
            for j in range(n):
                if j != k:
                    s += 1.0 / (zk - zs[j])
            denom = 1.0 - w * s
            step = w if denom == 0j else w / denom
            zs[k] = zk - step
            moved = max(moved, abs(step) / (1.0 + abs(zs[k])))
        res = [abs(p(z)) for z in zs]
        if max(res) < max(best_res):
            best = list(zs)
            best_res = res
        if moved < tol:
            break
    else:
        raise RootFindFailure(best, best_res)

    res = tuple(abs(p(z)) for z in zs)
    flags = []
    for k in range(n):
        close = any(j != k and abs(zs[k] - zs[j]) < 1e-6 for j in range(n))
        flags.append(close)
    return RootReport(tuple(zs), res, tuple(flags), it)
