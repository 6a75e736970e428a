"""Unit-disk seed sequences and the self-inversive side of the theory.

A sequence of points inside the unit disk generates two reflection
sequences, a real-parameter recurrence with all zeros on the unit
circle, and a transplanted three-term recurrence on (-1, 1).  A second
recursion characterizes the disk sequences for which the companion
derivative family is self-inversive as well, and a coefficient-level
criterion decides self-inversiveness directly from recurrence data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import recurrence
from .errors import (
    EscapedDisk,
    InvalidBeta,
    InvalidInput,
    InvalidParameter,
    InvalidSeed,
    OutOfDomain,
)
from .poly import ComplexPoly, roots

_EDGE = 1e-12
_SEED_REL = 1e-10


@dataclass(frozen=True)
class DiskSeq:
    """Points strictly inside the unit disk with their derived scalars.

    Entry k is beta_k.  The attached real sequences are 1-indexed the
    way the recurrences consume them: c(n) needs beta_{n-1}, d(n) needs
    beta_{n-2} and beta_{n-1}, so d starts at n = 2.
    """

    betas: tuple

    @classmethod
    def from_values(cls, values):
        out = []
        for k, v in enumerate(values):
            v = complex(v)
            if abs(v) >= 1.0 - _EDGE:
                raise InvalidBeta(k, "seed point not strictly inside the unit disk")
            out.append(v)
        return cls(betas=tuple(out))

    def __len__(self):
        return len(self.betas)

    def c(self, n):
        if n < 1 or n > len(self.betas):
            raise InvalidInput("c is defined for 1 <= n <= number of seeds")
        b = self.betas[n - 1]
        return -b.imag / (1.0 - b.real)

    def d(self, n):
        if n < 2 or n > len(self.betas):
            raise InvalidInput("d is defined for 2 <= n <= number of seeds")
        prev = self.betas[n - 2]
        here = self.betas[n - 1]
        return (
            (1.0 - abs(prev) ** 2)
            * abs(1.0 - here) ** 2
            / (4.0 * (1.0 - prev.real) * (1.0 - here.real))
        )


def rho_from_beta(disk, n_max, rho_hat_0=-1.0):
    """Both reflection sequences generated by the disk points.

    The hat sequence is the running product of (1-beta)/(1-conj beta)
    ratios off the given index-0 value; the tilde sequence carries the
    reciprocal product and a one-ahead bracket, scaled by 1/rho_hat_0 so
    the hat-tilde product is independent of the index-0 choice.  The
    index-0 tilde entry is filled with tilde_1 divided by the first
    ratio, the convention under which the seed identity of the
    self-inversive characterization reads as a plain ratio statement.
    """
    if n_max < 1:
        raise InvalidInput("need n_max >= 1")
    if len(disk.betas) < n_max + 1:
        raise InvalidInput("tilde entry n_max looks one seed ahead, need n_max + 1 seeds")
    rho_hat_0 = complex(rho_hat_0)
    if rho_hat_0 == 0:
        raise InvalidInput("index-0 hat reflection must be nonzero")
    b = disk.betas
    ratio = [(1.0 - b[k]) / (1.0 - b[k].conjugate()) for k in range(n_max + 1)]
    rho_hat = [rho_hat_0]
    for n in range(n_max):
        rho_hat.append(rho_hat[-1] * ratio[n])
    rho_tilde = [0j] * (n_max + 1)
    inv_prod = 1.0 + 0j
    for n in range(n_max):
        bracket = (1.0 - abs(b[n]) ** 2) / (1.0 - b[n]) * b[n + 1].conjugate() - b[n].conjugate()
        rho_tilde[n + 1] = bracket * inv_prod / rho_hat_0
        inv_prod /= ratio[n]
    rho_tilde[0] = rho_tilde[1] / ratio[0]
    return rho_hat, rho_tilde


@dataclass(frozen=True)
class RnSequence:
    """Recurrence outputs plus the transplanted evaluation on (-1, 1)."""

    disk: DiskSeq
    polys: tuple

    def g(self, n, x):
        if n < 0 or n >= len(self.polys):
            raise InvalidInput("index outside the built range")
        x = float(x)
        if abs(x) >= 1.0:
            raise OutOfDomain("the transplanted variable lives in (-1, 1)")
        w = complex(x, math.sqrt(1.0 - x * x))
        z = w * w
        return self.polys[n](z) / (2.0 * w) ** n


def build_Rn(disk, n_max):
    """Run the unit-circle recurrence to the requested degree."""
    if n_max < 1:
        raise InvalidInput("need n_max >= 1")
    if len(disk.betas) < n_max:
        raise InvalidInput(f"need {n_max} seeds for degree {n_max}")
    c1 = disk.c(1)
    polys = [ComplexPoly.one(), ComplexPoly([1.0 - 1j * c1, 1.0 + 1j * c1])]
    for n in range(1, n_max):
        cn = disk.c(n + 1)
        lin = ComplexPoly([1.0 - 1j * cn, 1.0 + 1j * cn])
        nxt = lin * polys[n] - polys[n - 1].shift_up().scale(4.0 * disk.d(n + 1))
        polys.append(nxt)
    return RnSequence(disk=disk, polys=tuple(polys))


def transform_G(rn, x):
    """All transplanted values at one point of (-1, 1)."""
    return tuple(rn.g(n, x) for n in range(len(rn.polys)))


def g_recurrence_residual(rn, xs):
    """Residual of the transplanted three-term step at sampled points.

    Reports both sign choices for the square-root coefficient; the
    derivation fixes the minus sign, the plus entry is diagnostic only.
    """
    out = {"minus": 0.0, "plus": 0.0}
    for x in xs:
        vals = transform_G(rn, x)
        root = math.sqrt(1.0 - float(x) ** 2)
        for n in range(1, len(vals) - 1):
            c = rn.disk.c(n + 1)
            d = rn.disk.d(n + 1)
            for key, sign in (("minus", -1.0), ("plus", 1.0)):
                step = (x + sign * c * root) * vals[n] - d * vals[n - 1]
                out[key] = max(out[key], abs(vals[n + 1] - step))
    return out


def beta_selfinv_recursion(beta0, rho_tilde_0, rho_tilde_1, n_max):
    """Disk sequence making the companion derivative family self-inversive.

    The seed must satisfy the characterization's compatibility identity
    tying it to the two index-0/1 tilde reflections.  Generation stops
    with an escape error carrying the partial sequence as soon as a
    generated point leaves the open disk; the sequence genuinely does
    escape for many seeds, real ones immediately.
    """
    beta0 = complex(beta0)
    if abs(beta0) >= 1.0 - _EDGE:
        raise InvalidBeta(0, "seed not strictly inside the unit disk")
    lhs = (1.0 - beta0.conjugate()) * complex(rho_tilde_0)
    rhs = (1.0 - beta0) * complex(rho_tilde_1)
    if abs(lhs - rhs) > _SEED_REL * max(abs(lhs), abs(rhs), _EDGE):
        raise InvalidSeed("seed point incompatible with the given tilde reflections")
    betas = [beta0]
    conj_sq = 1.0 + 0j
    for n in range(n_max):
        bn = betas[n]
        conj_sq *= ((1.0 - bn.conjugate()) / (1.0 - bn)) ** 2
        denom = 1.0 - abs(bn) ** 2
        nxt = conj_sq * (1.0 - bn) / denom + bn * (1.0 - bn.conjugate()) / denom
        if abs(nxt) >= 1.0 - _EDGE:
            raise EscapedDisk(n + 1, tuple(betas))
        betas.append(nxt)
    return DiskSeq(betas=tuple(betas))


def y_prime_ri_check(rho_hat, rho_tilde, n_max=None, tol=1e-10):
    """Decide the same-shape property for the companion derivative ladder.

    Builds the ladder's own recurrence data from the reflections and
    runs the generic classifier on it, then cross-checks the emitted
    proportionality ratios against their closed reflection-ratio form.
    Returns a dict with the decision, both ratio routes, their maximum
    relative deviation, and the emitted recurrence coefficients.
    """
    if len(rho_hat) != len(rho_tilde):
        raise InvalidInput("reflection lists must be index-aligned")
    if n_max is None:
        n_max = len(rho_hat) - 2
    if n_max < 3:
        raise InvalidInput("need n_max >= 3 to classify")
    if len(rho_hat) < n_max + 2:
        raise InvalidInput("reflection lists too short for the requested range")
    for i in range(n_max + 2):
        if rho_hat[i] == 0 or rho_tilde[i] == 0:
            raise InvalidParameter(f"zero reflection at index {i}")

    def tau_prime(m):
        # opening coefficient multiplies a vanishing term; any value works
        if m == 0:
            return 1.0 + 0j
        return (rho_hat[m - 1] / rho_hat[m]) * (1.0 - rho_tilde[m] * rho_hat[m])

    betas = [-rho_hat[m] / rho_hat[m + 1] for m in range(n_max + 1)]
    taus = [tau_prime(m) for m in range(n_max + 2)]
    seq = recurrence.RISequence.from_lists(betas, taus)
    omega = recurrence.OmegaSeq.explicit(1.0, [-t for t in taus])
    decision = recurrence.ri_again_decision(seq, omega, n_max)

    f_closed = {}
    for n in range(2, n_max + 1):
        f_closed[n] = (
            (rho_hat[n - 1] * rho_tilde[n + 1])
            / (rho_hat[n - 2] * rho_tilde[n])
            * (1.0 - rho_hat[n] * rho_tilde[n])
            / (1.0 - rho_hat[n - 1] * rho_tilde[n - 1])
        )
    dev = 0.0
    for n, want in f_closed.items():
        got = decision.f[n - decision.f_start]
        dev = max(dev, abs(got - want) / max(abs(want), _EDGE))

    emitted = []
    if decision.is_RI:
        for n in range(1, n_max + 1):
            shift = rho_tilde[n + 1] / rho_tilde[n]
            emitted.append((shift, shift * (1.0 - rho_tilde[n] * rho_hat[n])))
    return {
        "is_RI": decision.is_RI and dev <= tol,
        "branch": decision.branch,
        "f": list(decision.f),
        "f_start": decision.f_start,
        "f_closed": f_closed,
        "max_rel_dev": dev,
        "emitted": emitted,
    }


def self_inversive_criterion_ri(betas, taus, tol=1e-10):
    """Coefficient test for a same-shape recurrence to produce
    self-inversive members: unimodular shifts, and each z-coefficient's
    phase doubling matching the product of adjacent shifts.
    """
    betas = [complex(v) for v in betas]
    taus = [complex(v) for v in taus]
    n_terms = min(len(betas), len(taus))
    for n in range(n_terms):
        if abs(abs(betas[n]) - 1.0) > tol:
            return False
    for n in range(1, n_terms):
        if taus[n] == 0:
            return False
        phase = taus[n] / taus[n].conjugate()
        if abs(phase - betas[n] * betas[n - 1]) > tol:
            return False
    return True


def to_csv(disk, n_max, rho_hat_0=-1.0):
    """Summary rows: derived scalars, reflections, and root-circle drift."""
    if len(disk.betas) < n_max + 1:
        raise InvalidInput("need n_max + 1 seeds for the reflection columns")
    rho_hat, rho_tilde = rho_from_beta(disk, n_max, rho_hat_0)
    rn = build_Rn(disk, n_max)

    def fmt(v):
        return f"{v.real!r}{v.imag:+}j"

    lines = ["n,c,d,rho_hat,rho_tilde,root_drift"]
    for n in range(n_max + 1):
        c = repr(disk.c(n)) if n >= 1 else ""
        d = repr(disk.d(n)) if n >= 2 else ""
        drift = ""
        if n >= 1:
            rep = roots(rn.polys[n])
            drift = repr(max(abs(abs(r) - 1.0) for r in rep.roots))
        lines.append(",".join([str(n), c, d, fmt(rho_hat[n]), fmt(rho_tilde[n]), drift]))
    return "\n".join(lines) + "\n"
