"""Para-orthogonal pairs, their coupled one-step recurrence, and the
bridge back to the bordered Toeplitz solutions.

A pair consists of two polynomial families normalized at opposite ends,
advanced together by a Szegő-type coupled step driven by two reflection
sequences.  The same pair can be assembled from the Toeplitz route via
two mixing weights per level, and taken apart again as long as the
mixing matrix stays invertible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import cfrac, toeplitz
from .errors import (
    GuardViolation,
    InvalidInput,
    InvalidParameter,
    LambdaCollapse,
)
from .functionals import MomentFunctional, _pair_with_monomial
from .poly import ComplexPoly

_GUARD_REL = 1e-12
_NORM_TOL = 1e-6


def sigma_pair(upsilon_hat, upsilon_tilde, x_n0, lambda_n):
    """Mixing weights from the end corrections at one level."""
    denom = upsilon_hat * upsilon_hat - upsilon_tilde * upsilon_tilde
    scale = max(abs(upsilon_hat) ** 2, abs(upsilon_tilde) ** 2)
    if abs(denom) <= _GUARD_REL * scale or scale == 0.0:
        raise GuardViolation("end corrections too close to balanced, mixing weights blow up")
    front = x_n0 * lambda_n
    return front * upsilon_hat / denom, front * upsilon_tilde / denom


def sigma_from_rho(rho_hat_n, rho_tilde_n):
    """Invert the end-coefficient relations for the mixing weights."""
    s = rho_tilde_n + rho_hat_n
    denom = 4.0 - s * s
    if abs(denom) <= _GUARD_REL * max(4.0, abs(s) ** 2):
        raise GuardViolation("reflection sum sits at +/-2, the mixing map degenerates")
    if rho_hat_n == rho_tilde_n:
        raise GuardViolation("equal reflections give zero mixing weights")
    sigma_tilde = 2.0 * (rho_hat_n - rho_tilde_n) / denom
    sigma_hat = (rho_tilde_n * rho_tilde_n - rho_hat_n * rho_hat_n) / denom
    return sigma_hat, sigma_tilde


def szego_step(u_hat, u_tilde, rho_hat_next, rho_tilde_next):
    """One coupled update of the two families."""
    new_hat = u_hat - u_tilde.shift_up().scale(rho_hat_next)
    new_tilde = u_tilde.shift_up() - u_hat.scale(rho_tilde_next)
    return new_hat, new_tilde


@dataclass(frozen=True)
class ParaPair:
    """Snapshot of both families up to one order.

    Index-0 entries of the reflection tuples are conventions (-1), not
    data, and the index-0 mixing weights are ``None`` because the two
    families coincide there and the mixing map has no meaning yet.
    """

    zeta: complex
    u_hat: tuple
    u_tilde: tuple
    rho_hat: tuple
    rho_tilde: tuple
    sigma_hat: tuple
    sigma_tilde: tuple
    lambdas: tuple

    @property
    def order(self):
        return len(self.u_hat) - 1

    @classmethod
    def initial(cls, zeta=1.0, lambda0=1.0):
        one = ComplexPoly.one()
        return cls(
            zeta=complex(zeta),
            u_hat=(one,),
            u_tilde=(one,),
            rho_hat=(complex(-1.0),),
            rho_tilde=(complex(-1.0),),
            sigma_hat=(None,),
            sigma_tilde=(None,),
            lambdas=(complex(lambda0),),
        )


def advance(pair, rho_hat_next, rho_tilde_next):
    """Extend the pair by one order with a fresh reflection pair."""
    rho_hat_next = complex(rho_hat_next)
    rho_tilde_next = complex(rho_tilde_next)
    if rho_hat_next == 0 or rho_tilde_next == 0:
        raise InvalidParameter("reflections must be nonzero to advance")
    factor = 1.0 - rho_hat_next * rho_tilde_next
    if factor == 0:
        raise LambdaCollapse("unit reflection product, the pairing constant dies")
    new_hat, new_tilde = szego_step(pair.u_hat[-1], pair.u_tilde[-1], rho_hat_next, rho_tilde_next)
    try:
        sh, st = sigma_from_rho(rho_hat_next, rho_tilde_next)
    except GuardViolation:
        sh, st = None, None
    return ParaPair(
        zeta=pair.zeta,
        u_hat=pair.u_hat + (new_hat,),
        u_tilde=pair.u_tilde + (new_tilde,),
        rho_hat=pair.rho_hat + (rho_hat_next,),
        rho_tilde=pair.rho_tilde + (rho_tilde_next,),
        sigma_hat=pair.sigma_hat + (sh,),
        sigma_tilde=pair.sigma_tilde + (st,),
        lambdas=pair.lambdas + (pair.lambdas[-1] * factor,),
    )


def from_rho(rho_hat, rho_tilde, zeta=1.0, lambda0=1.0):
    """Fold the coupled step over given reflection lists.

    Lists are index-aligned with the order; the index-0 entries are kept
    as stored conventions and do not drive any step.
    """
    if len(rho_hat) != len(rho_tilde):
        raise InvalidInput("reflection lists must have equal length")
    if not rho_hat:
        raise InvalidInput("need at least the index-0 convention entry")
    pair = ParaPair.initial(zeta, lambda0)
    pair = ParaPair(
        zeta=pair.zeta,
        u_hat=pair.u_hat,
        u_tilde=pair.u_tilde,
        rho_hat=(complex(rho_hat[0]),),
        rho_tilde=(complex(rho_tilde[0]),),
        sigma_hat=pair.sigma_hat,
        sigma_tilde=pair.sigma_tilde,
        lambdas=pair.lambdas,
    )
    for n in range(1, len(rho_hat)):
        pair = advance(pair, rho_hat[n], rho_tilde[n])
    return pair


def build_from_X(x_hat_rows, x_tilde_rows, sigma_hat_list, sigma_tilde_list, zeta=1.0, lambda0=1.0):
    """Assemble the pair from the two bordered solution families.

    Row n of each coefficient list is the order-n solution; the index-0
    mixing entries are ignored because the order-0 members are both the
    constant 1.  The mixing map must be invertible at every level and
    the combinations must come out normalized at their defining ends,
    otherwise the inputs are inconsistent.
    """
    levels = len(x_hat_rows)
    if not (len(x_tilde_rows) == len(sigma_hat_list) == len(sigma_tilde_list) == levels):
        raise InvalidInput("row and weight lists must be index-aligned")
    if levels == 0:
        raise InvalidInput("need at least the order-0 rows")
    u_hat = [ComplexPoly.one()]
    u_tilde = [ComplexPoly.one()]
    rho_hat = [complex(-1.0)]
    rho_tilde = [complex(-1.0)]
    sig_hat = [None]
    sig_tilde = [None]
    lambdas = [complex(lambda0)]
    for n in range(1, levels):
        sh = complex(sigma_hat_list[n])
        st = complex(sigma_tilde_list[n])
        if abs(sh * sh - st * st) <= _GUARD_REL * max(abs(sh) ** 2, abs(st) ** 2):
            raise GuardViolation(f"mixing weights at order {n} are not invertible")
        xh = ComplexPoly(x_hat_rows[n])
        xt = ComplexPoly(x_tilde_rows[n])
        uh = xh.scale(sh) - xt.scale(st)
        ut = xh.scale(st) - xt.scale(sh)
        norm_scale = max(1.0, max(abs(c) for c in uh.coeffs))
        if abs(uh.coeff(0) - 1.0) > _NORM_TOL * norm_scale:
            raise InvalidInput(f"hat family at order {n} is not unit at the constant term")
        if abs(ut.coeff(n) - 1.0) > _NORM_TOL * norm_scale:
            raise InvalidInput(f"tilde family at order {n} is not unit at the leading term")
        rh = -uh.coeff(n)
        rt = -ut.coeff(0)
        u_hat.append(uh)
        u_tilde.append(ut)
        rho_hat.append(rh)
        rho_tilde.append(rt)
        sig_hat.append(sh)
        sig_tilde.append(st)
        lambdas.append(lambdas[-1] * (1.0 - rh * rt))
    return ParaPair(
        zeta=complex(zeta),
        u_hat=tuple(u_hat),
        u_tilde=tuple(u_tilde),
        rho_hat=tuple(rho_hat),
        rho_tilde=tuple(rho_tilde),
        sigma_hat=tuple(sig_hat),
        sigma_tilde=tuple(sig_tilde),
        lambdas=tuple(lambdas),
    )


def reconstruct_X(pair):
    """Invert the mixing map level by level, giving both solution families."""
    x_hat = [ComplexPoly.one()]
    x_tilde = [ComplexPoly.one()]
    for n in range(1, pair.order + 1):
        sh = pair.sigma_hat[n]
        st = pair.sigma_tilde[n]
        if sh is None or st is None:
            raise GuardViolation(f"order {n} has no invertible mixing weights")
        det = sh * sh - st * st
        if abs(det) <= _GUARD_REL * max(abs(sh) ** 2, abs(st) ** 2):
            raise GuardViolation(f"mixing weights at order {n} are not invertible")
        uh = pair.u_hat[n]
        ut = pair.u_tilde[n]
        x_hat.append((uh.scale(sh) - ut.scale(st)).scale(1.0 / det))
        x_tilde.append((uh.scale(st) - ut.scale(sh)).scale(1.0 / det))
    return x_hat, x_tilde


def verify_biorthogonality(pair, O, n_max=None, tol=1e-8):
    """Check the cross pairing and both one-sided ladders under O.

    Returns None when everything holds, otherwise a ("cross", m, n) or
    ("hat"|"tilde", n, k) tag for the first failure.  The cross pairing
    of the order-m tilde member with the order-n hat member must be the
    order-n pairing constant exactly when m equals n and zero otherwise.
    """
    top = pair.order if n_max is None else n_max
    if top > pair.order:
        raise InvalidInput("pair too short for the requested range")
    for n in range(top + 1):
        lam = pair.lambdas[n]
        uh = pair.u_hat[n]
        for k in range(n + 1):
            acc = 0j
            ref = 0.0
            for b, cb in enumerate(uh.coeffs):
                term = cb * O.moment(k - n + b)
                acc += term
                ref += abs(term)
            want = lam if k == n else 0j
            if abs(acc - want) > tol * max(ref, abs(lam)):
                return ("hat", n, k)
        ut = pair.u_tilde[n]
        for k in range(n + 1):
            acc = 0j
            ref = 0.0
            for a, ca in enumerate(ut.coeffs):
                term = ca * O.moment(a - k)
                acc += term
                ref += abs(term)
            want = lam if k == n else 0j
            if abs(acc - want) > tol * max(ref, abs(lam)):
                return ("tilde", n, k)
    for m in range(top + 1):
        for n in range(top + 1):
            acc = 0j
            ref = 0.0
            for a, ca in enumerate(pair.u_tilde[m].coeffs):
                for b, cb in enumerate(pair.u_hat[n].coeffs):
                    term = ca * cb * O.moment(a + b - n)
                    acc += term
                    ref += abs(term)
            want = pair.lambdas[n] if m == n else 0j
            if abs(acc - want) > tol * max(ref, abs(pair.lambdas[n])):
                return ("cross", m, n)
    return None


def next_moment_identity(pair, O, n_max=None, tol=1e-8):
    """First order where O(hat member / z^(n+1)) misses rho_hat[n+1] lambda_n."""
    top = (pair.order - 1) if n_max is None else n_max
    if top >= pair.order:
        raise InvalidInput("pair too short, the check looks one reflection ahead")
    for n in range(top + 1):
        acc = 0j
        for b, cb in enumerate(pair.u_hat[n].coeffs):
            acc += cb * O.moment(b - n - 1)
        want = pair.rho_hat[n + 1] * pair.lambdas[n]
        if abs(acc - want) > tol * max(abs(want), abs(pair.lambdas[n])):
            return n
    return None


def u_prime_family(pair, n):
    """Derivative-normalized ladder attached to the hat reflections.

    Entry m is the degree-m member; the order-0 entry is the constant 1
    and the formal member below it is taken to be zero, which makes the
    opening step unambiguous.
    """
    if n > pair.order:
        raise InvalidInput("pair too short for the requested ladder length")
    rh = pair.rho_hat
    rt = pair.rho_tilde
    for m in range(min(n + 1, len(rh))):
        if rh[m] == 0:
            raise InvalidParameter("zero hat reflection, the ladder ratios are undefined")
    out = [ComplexPoly.one()]
    if n == 0:
        return out
    prev = ComplexPoly([])
    here = ComplexPoly.one()
    for k in range(0, n):
        # step producing the degree-(k+1) member from degrees k and k-1
        shift = rh[k] / rh[k + 1]
        lin = ComplexPoly([shift, 1.0])
        nxt = lin * here
        if k >= 1:
            w = (rh[k - 1] / rh[k]) * (1.0 - rh[k] * rt[k])
            nxt = nxt - prev.shift_up().scale(w)
        prev, here = here, nxt
        out.append(here)
    return out


def y_prime_combination(pair, m):
    """Degree-m member of the companion ladder built from the hat one.

    The order-0 member is the constant 1 by the opening convention.
    """
    if m < 0:
        raise InvalidInput("order must be nonnegative")
    if m == 0:
        return ComplexPoly.one()
    if m > pair.order:
        raise InvalidInput("pair too short for the requested order")
    fam = u_prime_family(pair, m)
    if pair.rho_hat[m] == 0 or pair.rho_hat[m - 1] == 0:
        raise InvalidParameter("zero hat reflection, the combination weight is undefined")
    w = (pair.rho_hat[m - 1] / pair.rho_hat[m]) * (1.0 - pair.rho_hat[m] * pair.rho_tilde[m])
    return fam[m] - fam[m - 1].scale(w)


def o_functional(table):
    """Moment functional whose pairing matrix is the given Toeplitz table.

    Accepts a ToeplitzSystem or the dict produced by the correspondence.
    """
    if isinstance(table, toeplitz.ToeplitzSystem):
        return MomentFunctional(pos=table.lower, neg=table.upper, at_one=table.diag)
    return MomentFunctional(pos=table["lower"], neg=table["upper"], at_one=table["diag"])


@dataclass(frozen=True)
class PipelineResult:
    """Everything the Toeplitz route produces on the way to a pair."""

    state: object
    correspondence: object
    system: object
    zohar: object
    x_hat_rows: tuple
    x_tilde_rows: tuple
    pair: object

    def functional(self):
        return o_functional(self.system)


def from_sequences(seq, omega, n_max):
    """Full route from recurrence data to a para-orthogonal pair.

    Builds the ladder, certifies the two-sided correspondence, inverts
    the pairing table, solves both bordered systems at every order, and
    mixes the solutions.  Depth bookkeeping: the pairing table must reach
    n_max on both sides, which needs the ladder built n_max + 4 deep.
    """
    state = cfrac.build_cfrac(seq, omega, n_max + 4)
    corr = cfrac.correspondence(state, n_max + 1)
    tab = corr.o_table()
    system = toeplitz.ToeplitzSystem(tab["lower"], tab["upper"], tab["diag"])
    ztab = toeplitz.zohar_invert(system, n_max)
    x_hat_rows = [(complex(1.0),)]
    x_tilde_rows = [(complex(1.0),)]
    sig_hat = [None]
    sig_tilde = [None]
    for n in range(1, n_max + 1):
        uh = state.upsilon_hat[n]
        ut = state.upsilon_tilde[n]
        c0 = state.x_n0[n]
        lam = ztab.det_ratios[n]
        x_hat_rows.append(tuple(toeplitz.solve_hat(ztab, uh, ut, c0, order=n)))
        x_tilde_rows.append(tuple(toeplitz.solve_tilde(ztab, uh, ut, c0, order=n)))
        sh, st = sigma_pair(uh, ut, c0, lam)
        sig_hat.append(sh)
        sig_tilde.append(st)
    pair = build_from_X(
        x_hat_rows,
        x_tilde_rows,
        sig_hat if n_max >= 1 else [None],
        sig_tilde if n_max >= 1 else [None],
        zeta=state.zeta,
        lambda0=system.diag,
    )
    return PipelineResult(
        state=state,
        correspondence=corr,
        system=system,
        zohar=ztab,
        x_hat_rows=tuple(x_hat_rows),
        x_tilde_rows=tuple(x_tilde_rows),
        pair=pair,
    )


def to_csv(pair):
    """One row per order with both reflections, both weights, the constant."""

    def fmt(v):
        if v is None:
            return ""
        return f"{v.real!r}{v.imag:+}j"

    lines = ["n,rho_hat,rho_tilde,sigma_hat,sigma_tilde,lambda"]
    for n in range(pair.order + 1):
        lines.append(
            ",".join(
                [
                    str(n),
                    fmt(pair.rho_hat[n]),
                    fmt(pair.rho_tilde[n]),
                    fmt(pair.sigma_hat[n]),
                    fmt(pair.sigma_tilde[n]),
                    fmt(pair.lambdas[n]),
                ]
            )
        )
    return "\n".join(lines) + "\n"
