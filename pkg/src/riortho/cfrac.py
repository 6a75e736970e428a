"""Descending continued fraction attached to a shifted recurrence pair.

When the shift parameters follow their Riccati-type recursion with the
degenerate leading seed, consecutive combinations collapse to a
three-term ladder whose partial quotients are cheap rational
expressions in the sequence data.  The convergents of that ladder give
two moment expansions at once, one ascending and one descending, and
the pair of end corrections per level feeds the bordered Toeplitz
solves downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BranchRequired,
    CorrespondenceFailure,
    InvalidInput,
    InvalidSeed,
    TailBreakdown,
)
from .poly import ComplexPoly

_SEED_REL = 1e-12
_CANCEL_REL = 1e-10
_COLLAPSE_REL = 1e-13
_STABLE_REL = 1e-9


@dataclass(frozen=True)
class CFracState:
    """Ladder coefficients and convergents up to a fixed level.

    Tuples indexed by level hold ``None`` at index 0 so that entry i is
    the level-i coefficient.  ``x`` and ``y`` are the two convergent
    families, ``x`` seeded by the constant 1 and ``y`` by the bare
    monomial.  ``x_n0`` collects constant terms of the first family in
    product form, and the two upsilon rows are the end corrections of
    the paired expansions at each level.
    """

    zeta: complex
    levels: int
    e: tuple
    d: tuple
    f: tuple
    x: tuple
    y: tuple
    x_n0: tuple
    upsilon_hat: tuple
    upsilon_tilde: tuple


def build_cfrac(seq, omega, n_max):
    """Assemble the ladder from a recurrence and its shift sequence.

    The leading shift must equal minus the leading weight and the shift
    recursion must actually hold along the range used; both are checked
    rather than assumed, so explicitly tabulated shifts that happen to
    satisfy the recursion are accepted.
    """
    if n_max < 1:
        raise InvalidInput("at least one level is required")
    zeta = omega.zeta
    tau0 = seq.tau(0)
    if abs(omega.value(0) + tau0) > _SEED_REL * abs(tau0):
        raise InvalidSeed("the ladder needs the leading shift to equal minus the leading weight")
    if omega.value(1) == seq.beta(0):
        raise InvalidSeed("degenerate first shift, the opening level vanishes")

    top = n_max + 1
    u = [None] * (top + 1)
    v = [None] * (top + 1)
    for i in range(1, top + 1):
        om_prev = omega.value(i - 1)
        om_here = omega.value(i)
        u[i] = om_prev + seq.tau(i - 1)
        v[i] = om_prev * (om_here - seq.beta(i - 1))
        if i >= 2:
            u_scale = max(abs(om_prev), abs(seq.tau(i - 1)))
            if abs(u[i]) <= _COLLAPSE_REL * u_scale:
                raise BranchRequired(i, "combination weight collapsed, no simplified ladder")
            resid = abs(u[i] * zeta + v[i])
            if resid > _CANCEL_REL * max(abs(u[i] * zeta), abs(v[i])):
                raise InvalidInput("shift sequence does not satisfy its recursion at the evaluation point")

    e = [None] * (top + 1)
    d = [None] * (top + 1)
    f = [None] * (top + 1)
    e[1] = complex(1.0)
    d[1] = seq.beta(0) - omega.value(1)
    f[1] = complex(1.0)
    if top >= 2:
        s1 = v[1] + tau0 * u[2]
        if s1 == 0:
            raise InvalidInput("opening quadratic level degenerated")
        e[2] = s1 / v[1]
        d[2] = (omega.value(0) * seq.beta(0) * v[2]) / (omega.value(1) * s1)
        f[2] = u[2] * tau0 / v[1]
    for i in range(3, top + 1):
        e[i] = complex(1.0)
        f[i] = (u[i] / u[i - 1]) * seq.tau(i - 2)
        d[i] = (u[i] * omega.value(i - 2) * seq.beta(i - 2)) / (u[i - 1] * omega.value(i - 1))
    for i in range(1, top + 1):
        if d[i] == 0:
            raise InvalidInput(f"level-{i} shift vanished, the descending normalization needs it nonzero")

    x_polys = [ComplexPoly.one()]
    y_polys = [ComplexPoly([])]
    if n_max >= 1:
        x_polys.append(ComplexPoly([-e[1] * d[1], e[1]]))
        y_polys.append(ComplexPoly.monomial(1))
    quad = ComplexPoly([0.0, -zeta, 1.0])
    for i in range(2, n_max + 1):
        lin = ComplexPoly([-d[i], 1.0]).scale(e[i])
        bridge = quad if i == 2 else ComplexPoly.monomial(1)
        x_polys.append(lin * x_polys[i - 1] - (bridge * x_polys[i - 2]).scale(f[i]))
        y_polys.append(lin * y_polys[i - 1] - (bridge * y_polys[i - 2]).scale(f[i]))

    x_n0 = [complex(1.0)]
    ed_prod = complex(1.0)
    ed_running = [complex(1.0)]
    for k in range(1, top + 1):
        ed_prod *= e[k] * d[k]
        ed_running.append(ed_prod)
    sign = 1.0
    for n in range(1, n_max + 1):
        sign = -sign
        x_n0.append(sign * ed_running[n])

    upsilon_hat = [complex(0.0)]
    upsilon_tilde = [complex(0.0)]
    tau_prod = complex(1.0)
    sign = 1.0
    for n in range(1, n_max + 1):
        tau_prod *= seq.tau(n - 1)
        sign = -sign
        upsilon_hat.append(tau_prod * u[n + 1] / v[1])
        upsilon_tilde.append(sign * tau_prod * u[n + 1] * zeta / (ed_running[n + 1] * v[1]))

    return CFracState(
        zeta=zeta,
        levels=n_max,
        e=tuple(e[: n_max + 2]),
        d=tuple(d[: n_max + 2]),
        f=tuple(f[: n_max + 2]),
        x=tuple(x_polys),
        y=tuple(y_polys),
        x_n0=tuple(x_n0),
        upsilon_hat=tuple(upsilon_hat),
        upsilon_tilde=tuple(upsilon_tilde),
    )


def ascending_series(num, den, terms):
    """Leading coefficients of num/den expanded around the origin."""
    if den.is_zero or den.coeff(0) == 0:
        raise InvalidInput("denominator must not vanish at the origin")
    d0 = den.coeff(0)
    out = []
    for j in range(terms):
        acc = num.coeff(j)
        for i in range(j):
            acc -= out[i] * den.coeff(j - i)
        out.append(acc / d0)
    return out


def descending_series(num, den, terms):
    """Coefficients of num/den in falling powers from z**(deg num - deg den)."""
    if den.is_zero:
        raise InvalidInput("denominator must be nonzero")
    dn = den.degree
    nm = num.degree if not num.is_zero else 0
    rev_num = ComplexPoly([num.coeff(nm - j) for j in range(nm + 1)])
    rev_den = ComplexPoly([den.coeff(dn - j) for j in range(dn + 1)])
    return ascending_series(rev_num, rev_den, terms)


@dataclass(frozen=True)
class CorrespondenceResult:
    """Stabilized two-sided moment coefficients pulled off the convergents."""

    depth: int
    _alpha: tuple
    _alpha_star: tuple

    def alpha(self, k):
        if not 1 <= k <= self.depth:
            raise InvalidInput(f"ascending moment {k} outside 1..{self.depth}")
        return self._alpha[k - 1]

    def alpha_star(self, k):
        if not -self.depth <= k <= 0:
            raise InvalidInput(f"descending moment {k} outside {-self.depth}..0")
        return self._alpha_star[-k]

    def o_table(self):
        """Unit-style Toeplitz table for the pairing built from both sides."""
        diag = -self.alpha(1)
        lower = [-self.alpha(k + 1) for k in range(1, self.depth)]
        upper = [self.alpha_star(-(k - 1)) for k in range(1, self.depth + 1)]
        return {"diag": diag, "lower": lower, "upper": upper}

    def to_csv(self):
        lines = ["index,re,im"]
        for k in range(self.depth, 0, -1):
            val = self.alpha(k)
            lines.append(f"{k},{val.real!r},{val.imag!r}")
        for k in range(0, -self.depth - 1, -1):
            val = self.alpha_star(k)
            lines.append(f"{k},{val.real!r},{val.imag!r}")
        return "\n".join(lines) + "\n"


def correspondence(state, depth):
    """Extract both moment sides and certify stabilization level by level.

    Ascending coefficients settle once the level passes the power and
    descending ones two levels later; each is compared across the two
    certifying levels and rejected if they disagree in relative terms.
    """
    if depth < 1:
        raise InvalidInput("depth must be positive")
    if state.levels < depth + 3:
        raise InvalidInput("ladder too shallow for the requested depth, build depth + 3 levels")

    asc = {}
    desc = {}
    for n in range(1, depth + 4):
        asc[n] = ascending_series(state.y[n], state.x[n], depth + 2)
        desc[n] = descending_series(state.y[n], state.x[n], depth + 2)

    alpha = []
    for k in range(1, depth + 1):
        a = asc[k][k]
        b = asc[k + 1][k]
        if abs(a - b) > _STABLE_REL * max(abs(a), abs(b), 1e-30):
            raise CorrespondenceFailure(k, "ascending coefficient failed to settle")
        alpha.append(a)

    alpha_star = []
    for k in range(0, depth + 1):
        a = desc[k + 2][k]
        b = desc[k + 3][k]
        if abs(a - b) > _STABLE_REL * max(abs(a), abs(b), 1e-30):
            raise CorrespondenceFailure(-k, "descending coefficient failed to settle")
        alpha_star.append(a)

    return CorrespondenceResult(depth=depth, _alpha=tuple(alpha), _alpha_star=tuple(alpha_star))


@dataclass(frozen=True)
class TailResult:
    """Tail value with its next-shallower truncation for convergence reads."""

    levels: int
    tail: complex
    tail_prev: complex
    omega1: complex
    omega1_prev: complex


def _tail_value(seq, zeta, levels):
    t = zeta - seq.beta(levels)
    for k in range(levels - 1, 0, -1):
        if t == 0:
            raise TailBreakdown(k + 1, "tail denominator vanished")
        t = (zeta - seq.beta(k)) - seq.tau(k + 1) * zeta / t
    if t == 0:
        raise TailBreakdown(1, "tail denominator vanished")
    return 1.0 / t


def tail_fraction_omega1(seq, zeta, levels):
    """Bottom-up tail evaluation giving the natural opening shift seed."""
    if levels < 2:
        raise InvalidInput("need at least two levels for a convergence pair")
    zeta = complex(zeta)
    tail = _tail_value(seq, zeta, levels)
    tail_prev = _tail_value(seq, zeta, levels - 1)
    factor = -seq.tau(1) * zeta
    return TailResult(
        levels=levels,
        tail=tail,
        tail_prev=tail_prev,
        omega1=factor * tail,
        omega1_prev=factor * tail_prev,
    )
