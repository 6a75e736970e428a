"""Moment functionals on Laurent polynomials and the orthogonality verifiers.

A functional is represented by a finite two-sided moment table.  The same type
serves the base functional (moments u_n at negative powers), its spectral
transform (table nu), the point-mass correction (table m), and the
correspondence functional (table o with entries on both sides).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DivisionByZeta,
    IndeterminateOrthogonality,
    MomentDepthExceeded,
)
from .poly import ComplexPoly


class LaurentPoly:
    """Sparse Laurent polynomial: mapping from integer power to coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, complex]):
        self.terms = {int(k): complex(v) for k, v in terms.items() if v != 0}

    @classmethod
    def from_poly(cls, p: ComplexPoly, shift: int = 0) -> "LaurentPoly":
        """Polynomial times z^shift."""
        return cls({k + shift: c for k, c in enumerate(p.coeffs)})

    def __repr__(self) -> str:
        return f"LaurentPoly({self.terms!r})"


class MomentFunctional:
    """Linear functional known through its moments.

    ``pos[i]`` is the moment of z^{-(i+1)}, ``neg[i]`` the moment of z^{i+1},
    ``at_one`` the moment of z^0.  When ``hermitian_flag`` is set the two sides
    are conjugates of each other, and constructors enforce it.
    """

    __slots__ = ("pos", "neg", "at_one", "hermitian_flag")

    def __init__(self, pos, neg, at_one=1.0, hermitian_flag=False):
        self.pos = tuple(complex(c) for c in pos)
        self.neg = tuple(complex(c) for c in neg)
        self.at_one = complex(at_one)
        self.hermitian_flag = bool(hermitian_flag)
        if self.hermitian_flag:
            for a, b in zip(self.pos, self.neg):
                if abs(a - b.conjugate()) > 1e-10 * max(1.0, abs(a)):
                    raise ValueError("hermitian flag set but tables are not conjugate")

    @classmethod
    def hermitian(cls, pos, at_one=1.0) -> "MomentFunctional":
        """Build a Hermitian functional from the negative-power moments alone."""
        pos = [complex(c) for c in pos]
        return cls(pos, [c.conjugate() for c in pos], at_one, hermitian_flag=True)

    @property
    def pos_depth(self) -> int:
        return len(self.pos)

    @property
    def neg_depth(self) -> int:
        return len(self.neg)

    @property
    def table_scale(self) -> float:
        """Largest moment modulus; the reference scale for relative tolerances."""
        vals = [abs(self.at_one)]
        vals += [abs(c) for c in self.pos]
        vals += [abs(c) for c in self.neg]
        return max(vals)

    def moment(self, power: int) -> complex:
        """Moment of z^power."""
        if power == 0:
            return self.at_one
        if power < 0:
            idx = -power - 1
            if idx >= len(self.pos):
                raise MomentDepthExceeded(f"moment of z^{power} not generated")
            return self.pos[idx]
        idx = power - 1
        if idx >= len(self.neg):
            raise MomentDepthExceeded(f"moment of z^{power} not generated")
        return self.neg[idx]

    def __call__(self, q) -> complex:
        return apply(self, q)

    def to_json(self) -> dict:
        return {
            "neg": [[c.real, c.imag] for c in self.neg],
            "at_one": [self.at_one.real, self.at_one.imag],
            "pos": [[c.real, c.imag] for c in self.pos],
            "hermitian": self.hermitian_flag,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MomentFunctional":
        return cls(
            [complex(re, im) for re, im in data["pos"]],
            [complex(re, im) for re, im in data["neg"]],
            complex(*data["at_one"]),
            data.get("hermitian", False),
        )


@dataclass(frozen=True)
class TransformParams:
    """Parameters of the spectral transform scale_lambda*(z - zeta)*N = (z - alpha)*L.

    ``e`` is the derived constant (zeta - alpha)/(1 - scale_lambda).
    """

    scale_lambda: complex
    zeta: complex
    alpha: complex
    e: complex = field(init=False)

    def __post_init__(self):
        lam = complex(self.scale_lambda)
        if lam == 0:
            raise ValueError("scale_lambda must be nonzero")
        if lam == 1:
            raise ValueError("scale_lambda = 1 leaves e undefined")
        if abs(abs(self.alpha) - 1.0) > 1e-12:
            raise ValueError("alpha must be unimodular")
        object.__setattr__(self, "scale_lambda", lam)
        object.__setattr__(self, "zeta", complex(self.zeta))
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "e", (self.zeta - self.alpha) / (1.0 - lam))


def apply(f: MomentFunctional, q) -> complex:
    """Linear extension of the moment table to a Laurent polynomial.

    Accepts a LaurentPoly, a ComplexPoly, or a bare {power: coeff} mapping.
    """
    if isinstance(q, ComplexPoly):
        terms = {k: c for k, c in enumerate(q.coeffs)}
    elif isinstance(q, LaurentPoly):
        terms = q.terms
    else:
        terms = q
    return sum((complex(c) * f.moment(k) for k, c in terms.items()), 0j)


def moments_of_N(L: MomentFunctional, p: TransformParams, depth: int) -> MomentFunctional:
    """Moment table of the transformed functional N, both sides to ``depth``.

    The defining relation pins each new moment in terms of the previous one and
    two moments of L.  Negative powers of z need a division by zeta.
    """
    lam, zeta, alpha = p.scale_lambda, p.zeta, p.alpha

    # positive powers of z: nu(z^{n+1}) = zeta*nu(z^n) + (L(z^{n+1}) - alpha*L(z^n))/lam
    neg = []
    prev = 1.0 + 0j
    for n in range(depth):
        cur = zeta * prev + (L.moment(n + 1) - alpha * L.moment(n)) / lam
        neg.append(cur)
        prev = cur

    # negative powers of z: nu(z^{-(n+1)}) = (nu(z^{-n}) - (L(z^{-n}) - alpha*L(z^{-(n+1)}))/lam) / zeta
    pos = []
    if depth > 0 and zeta == 0:
        raise DivisionByZeta("negative powers of the transformed table need zeta != 0")
    prev = 1.0 + 0j
    for n in range(depth):
        cur = (prev - (L.moment(-n) - alpha * L.moment(-(n + 1))) / lam) / zeta
        pos.append(cur)
        prev = cur

    return MomentFunctional(pos, neg, 1.0, hermitian_flag=False)


def moments_of_M(L: MomentFunctional, p: TransformParams, depth: int) -> MomentFunctional:
    """Moment table of the point-mass-corrected functional.

    Positive powers come from the finite geometric sum against L's positive
    moments; negative powers from the matching expansion of (z - zeta)^{-1}
    applied to negative powers, which requires zeta != 0.
    """
    zeta, e = p.zeta, p.e

    neg = []
    for k in range(depth):
        acc = sum(zeta ** (k - j) * L.moment(j) for j in range(k + 1))
        neg.append(zeta ** (k + 1) - e * acc)

    pos = []
    if depth > 0 and zeta == 0:
        raise DivisionByZeta("negative powers of the corrected table need zeta != 0")
    for j in range(1, depth + 1):
        acc = sum(zeta**m * L.moment(-(m + 1)) for m in range(j))
        pos.append(zeta ** (-j) * (1.0 + e * acc))

    return MomentFunctional(pos, neg, 1.0, hermitian_flag=False)


def bilinear(O: MomentFunctional, P: ComplexPoly, Q: ComplexPoly) -> complex:
    """Sesquilinear pairing <P, Q> = O(P * star-reverse of Q)."""
    acc = 0j
    for a, pa in enumerate(P.coeffs):
        if pa == 0j:
            continue
        for b, qb in enumerate(Q.coeffs):
            if qb == 0j:
                continue
            acc += pa * qb.conjugate() * O.moment(a - b)
    return acc


def _pair_with_monomial(O: MomentFunctional, P: ComplexPoly, k: int) -> complex:
    return sum(
        (pa * O.moment(a - k) for a, pa in enumerate(P.coeffs) if pa != 0j), 0j
    )


@dataclass(frozen=True)
class ParaOrthRow:
    n: int
    values: tuple
    passed: bool


@dataclass(frozen=True)
class ParaOrthReport:
    rows: tuple

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.rows)


def verify_para_orthogonal(O: MomentFunctional, X: list, tol: float = 1e-10) -> ParaOrthReport:
    """Check the para-orthogonality pattern of each X_n against O.

    For each n the pairing with z^k must be nonzero at k = 0 and k = n and
    zero in between.  "Zero" means modulus below tol*scale, "nonzero" above
    10*tol*scale, with scale the largest moment modulus; anything in between
    is refused rather than guessed.
    """
    scale_ = max(O.table_scale, 1e-300)
    lo, hi = tol * scale_, 10.0 * tol * scale_
    rows = []
    for n, Xn in enumerate(X):
        if Xn.degree != n:
            raise ValueError(f"X_{n} must have exact degree {n}, got {Xn.degree}")
        vals = tuple(_pair_with_monomial(O, Xn, k) for k in range(n + 1))
        ok = True
        for k, v in enumerate(vals):
            m = abs(v)
            want_zero = 0 < k < n
            if lo <= m <= hi:
                raise IndeterminateOrthogonality(
                    f"pairing at n={n}, k={k} has modulus {m:.3e} inside the dead zone"
                )
            if want_zero:
                ok = ok and m < lo
            else:
                ok = ok and m > hi
        rows.append(ParaOrthRow(n, vals, ok))
    return ParaOrthReport(tuple(rows))


def verify_M_orthogonality(M: MomentFunctional, X: list, n_max: int) -> bool:
    """True iff M annihilates z^{-j} X_{n+1} for j = 0..n, all n <= n_max.

    The residual is measured against the size of the terms being cancelled.
    """
    for n in range(n_max + 1):
        Xn1 = X[n + 1]
        for j in range(n + 1):
            val = 0j
            size = 0.0
            for a, xa in enumerate(Xn1.coeffs):
                term = xa * M.moment(a - j)
                val += term
                size += abs(term)
            if abs(val) > 1e-9 * max(size, 1e-300):
                return False
    return True


def verify_functional_relation(
    L: MomentFunctional,
    N: MomentFunctional,
    M: MomentFunctional,
    p: TransformParams,
    depth: int,
) -> bool:
    """Check the three-way moment identity tying L, N and M together.

    For k = 0..depth, in positive powers:
        e*(L(z^{k+1}) - alpha*L(z^k))
      = e*lambda*(N(z^{k+1}) - zeta*N(z^k))
      = -M(z^{k+2}) + (zeta+alpha)*M(z^{k+1}) - zeta*alpha*M(z^k).
    Tables must reach depth+2 on the positive-power side.
    """
    lam, zeta, alpha, e = p.scale_lambda, p.zeta, p.alpha, p.e
    ref = max(L.table_scale, N.table_scale, M.table_scale, 1.0)
    for k in range(depth + 1):
        a = e * (L.moment(k + 1) - alpha * L.moment(k))
        b = e * lam * (N.moment(k + 1) - zeta * N.moment(k))
        c = -M.moment(k + 2) + (zeta + alpha) * M.moment(k + 1) - zeta * alpha * M.moment(k)
        s = max(ref, abs(a), abs(b), abs(c))
        if abs(a - b) > 1e-10 * s or abs(b - c) > 1e-10 * s:
            return False
    return True
