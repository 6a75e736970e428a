"""R_I polynomial engine.

Generates the monic three-term family B_n, their first-kind companions, the
zeta-dependent omega sequence under its three constructions, the combined
family X_n, the mixed-recurrence coefficients (u, v, s, t), and the decision
procedure that classifies whether the X_n are again a three-term family of the
same shape.
"""

import threading
from dataclasses import dataclass

from .errors import (
    DegenerateStep,
    InvalidInput,
    InvalidSeed,
    InvalidTau,
    OmegaBreakdown,
    RBreakdown,
)
from .functionals import MomentFunctional, TransformParams
from .poly import ComplexPoly, eval_with_factor

_REL = 1e-10
_TINY = 1e-300


def _cplx(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


class RISequence:
    """Recurrence data (beta_n, tau_n) plus a growing cache of the B_n.

    ``beta`` and ``tau`` are callables from index to complex.  The cache is
    append-only and guarded by a lock, so a shared instance is safe to read
    from several threads.
    """

    def __init__(self, beta, tau):
        self._beta = beta
        self._tau = tau
        self._B = [ComplexPoly.one()]
        self._lock = threading.Lock()

    @classmethod
    def from_constants(cls, beta, tau) -> "RISequence":
        b, t = complex(beta), complex(tau)
        return cls(lambda n: b, lambda n: t)

    @classmethod
    def from_lists(cls, betas, taus) -> "RISequence":
        bs = [complex(x) for x in betas]
        ts = [complex(x) for x in taus]

        def beta(n):
            if n >= len(bs):
                raise InvalidInput(f"beta_{n} beyond supplied list")
            return bs[n]

        def tau(n):
            if n >= len(ts):
                raise InvalidInput(f"tau_{n} beyond supplied list")
            return ts[n]

        return cls(beta, tau)

    def beta(self, n: int) -> complex:
        return complex(self._beta(n))

    def tau(self, n: int) -> complex:
        return complex(self._tau(n))

    def B(self, n: int) -> ComplexPoly:
        """B_n, generating and caching intermediate degrees as needed."""
        if n < 0:
            return ComplexPoly([0.0])
        if n >= len(self._B):
            with self._lock:
                while len(self._B) <= n:
                    m = len(self._B) - 1
                    z_minus_beta = ComplexPoly([-self.beta(m), 1.0])
                    nxt = z_minus_beta * self._B[m]
                    if m >= 1:
                        nxt = nxt - self._B[m - 1].shift_up(1).scale(self.tau(m))
                    self._B.append(nxt)
        return self._B[n]


def generate_B(seq: RISequence, n_max: int) -> list:
    """Monic B_0..B_{n_max} of the three-term recurrence."""
    if seq.tau(0) == 0:
        raise InvalidTau(0, "tau_0 must be nonzero")
    return [seq.B(n) for n in range(n_max + 1)]


def first_kind(seq: RISequence, L: MomentFunctional, n_max: int) -> list:
    """First-kind companions; entry n is the degree n-1 companion of B_n.

    The companion is the functional applied in z to the divided difference
    (B_n(z) - B_n(y))/(z - y), leaving a polynomial in y.  Entry 0 is the zero
    polynomial.  Needs the positive-power moments of L up to n_max - 1.
    """
    out = [ComplexPoly([0.0])]
    for n in range(1, n_max + 1):
        b = seq.B(n).coeffs
        coeffs = []
        for j in range(n):
            acc = 0j
            for i in range(n - j):
                acc += b[i + j + 1] * L.moment(i)
            coeffs.append(acc)
        out.append(ComplexPoly(coeffs))
    return out


def omega_next(omega_n: complex, beta_n: complex, tau_n: complex, zeta: complex,
               n: int | None = None) -> complex:
    """One step of the recursive omega definition."""
    if omega_n == 0:
        raise OmegaBreakdown(-1 if n is None else n, "omega vanished; cannot advance")
    return ((beta_n - zeta) * omega_n - tau_n * zeta) / omega_n


class OmegaSeq:
    """omega_n(zeta) values under one of the three constructions.

    Modes: 'recursive' (seeded with omega_0 and omega_1, later values from
    omega_next), 'rratio' (ratios of the r_n remainders, precomputed), and
    'list' (explicit values).  Only the recursive mode extends on demand.
    """

    def __init__(self, zeta, mode, values, seq=None, r_values=None):
        self.zeta = complex(zeta)
        self.mode = mode
        self._values = [complex(v) for v in values]
        self._seq = seq
        self.r_values = list(r_values) if r_values is not None else None
        self._lock = threading.Lock()

    @classmethod
    def recursive(cls, seq: RISequence, zeta, omega0, omega1) -> "OmegaSeq":
        if complex(omega1) == seq.beta(0):
            raise InvalidSeed("omega_1 must differ from beta_0")
        return cls(zeta, "recursive", [omega0, omega1], seq=seq)

    @classmethod
    def explicit(cls, zeta, values) -> "OmegaSeq":
        return cls(zeta, "list", values)

    def value(self, n: int) -> complex:
        if n < 0:
            raise InvalidInput("omega index must be nonnegative")
        if n >= len(self._values):
            if self.mode != "recursive":
                raise InvalidInput(f"omega_{n} not available in {self.mode} mode")
            with self._lock:
                while len(self._values) <= n:
                    m = len(self._values) - 1
                    self._values.append(omega_next(
                        self._values[m], self._seq.beta(m), self._seq.tau(m),
                        self.zeta, n=m))
        return self._values[n]

    def __getitem__(self, n: int) -> complex:
        return self.value(n)


def omega_rratio(seq: RISequence, L: MomentFunctional, params: TransformParams,
                 zeta: complex | None = None, n_max: int = 16,
                 omega0: complex | None = None) -> OmegaSeq:
    """Omega sequence from ratios of the transform remainders r_n.

    r_n = (1 - scale_lambda) B_n(zeta) - (zeta - alpha) fk_n(zeta), with fk_n
    the first-kind companion of B_n, and omega_{n+1} = -r_{n+1}/r_n.  omega_0
    is free in this construction; the default -tau_0 matches the seed used by
    the continued-fraction build.
    """
    zt = params.zeta if zeta is None else complex(zeta)
    lam = params.scale_lambda
    fk = first_kind(seq, L, n_max)
    r = []
    for n in range(n_max + 1):
        r.append((1 - lam) * seq.B(n)(zt) - (zt - params.alpha) * fk[n](zt))
    values = [(-seq.tau(0)) if omega0 is None else complex(omega0)]
    for n in range(n_max):
        if r[n] == 0:
            raise RBreakdown(n, "remainder vanished; omega ratio undefined")
        values.append(-r[n + 1] / r[n])
    return OmegaSeq(zt, "rratio", values, seq=seq, r_values=r)


def build_X(seq: RISequence, omega: OmegaSeq, n_max: int) -> list:
    """X_0..X_{n_max}; X_n combines B_n with omega_n times B_{n-1}."""
    out = [ComplexPoly.one()]
    for n in range(1, n_max + 1):
        out.append(seq.B(n) + seq.B(n - 1).scale(omega.value(n)))
    return out


def eval_X(seq: RISequence, omega: OmegaSeq, n: int, z: complex) -> complex:
    """Evaluate X_n at z, stabilized near the punctured point.

    In recursive mode the family lives on the plane with zeta removed; an
    argument within 1e-12 of zeta is evaluated through the divided-out linear
    factor so that a genuine common zero does not degrade to roundoff noise.
    """
    X = build_X(seq, omega, n)[n]
    if omega.mode == "recursive" and abs(z - omega.zeta) < 1e-12:
        return eval_with_factor(X, omega.zeta, z)
    return X(z)


@dataclass(frozen=True)
class MixedCoeffs:
    """Scalars of the mixed recurrence at index n, plus the n+1 pair."""

    n: int
    u: complex
    v: complex
    s: complex
    t: complex
    u_next: complex
    v_next: complex
    f: complex | None


def mixed_coeffs(seq: RISequence, omega: OmegaSeq, n: int) -> MixedCoeffs:
    """u, v, s, t at index n >= 1, with the proportionality ratio when defined."""
    if n < 1:
        raise InvalidInput("mixed coefficients start at n = 1")
    w_prev = omega.value(n - 1)
    w_n = omega.value(n)
    w_next = omega.value(n + 1)
    if w_n == 0:
        raise OmegaBreakdown(n, "omega vanished inside the mixed coefficients")
    u = w_prev + seq.tau(n - 1)
    v = w_prev * (w_n - seq.beta(n - 1))
    u_next = w_n + seq.tau(n)
    v_next = w_n * (w_next - seq.beta(n))
    s = u * v_next / w_n + v - w_prev * u_next
    t = w_prev * seq.beta(n - 1) * v_next / w_n
    if abs(v) >= abs(u):
        f = v_next / v if v != 0 else None
    else:
        f = u_next / u
    return MixedCoeffs(n, u, v, s, t, u_next, v_next, f)


def verify_mixed_ttrr(seq: RISequence, omega: OmegaSeq, n_max: int):
    """Check the quadratic mixed recurrence for n = 1..n_max.

    Returns None when every index passes coefficientwise at 1e-10 relative,
    otherwise the first failing index.
    """
    X = build_X(seq, omega, n_max + 1)
    for n in range(1, n_max + 1):
        mc = mixed_coeffs(seq, omega, n)
        lhs = ComplexPoly([mc.v, mc.u]) * X[n + 1]
        quad = ComplexPoly([-mc.t, mc.s, mc.u])
        rhs = quad * X[n] - (ComplexPoly([mc.v_next, mc.u_next]) * X[n - 1]) \
            .shift_up(1).scale(seq.tau(n - 1))
        scale = max(max(abs(c) for c in lhs.coeffs),
                    max(abs(c) for c in rhs.coeffs), _TINY)
        diff = lhs - rhs
        if not diff.is_zero and max(abs(c) for c in diff.coeffs) > _REL * scale:
            return n
    return None


@dataclass(frozen=True)
class RIDecision:
    """Outcome of the R_I-again classification.

    ``steps`` holds (n, beta_eff, tau_eff) triples realizing
    X_{n+1} = (z - beta_eff) X_n - tau_eff * z * X_{n-1}; for the cancelled
    branch they start at n = 2 and ``n1_step`` (when present) carries the
    quadratic opening step (e2, d2, f2) with
    X_2 = e2 (z - d2) X_1 - f2 z (z - zeta) X_0.
    """

    is_RI: bool
    branch: str
    f: tuple
    f_start: int
    witness: int | None
    steps: tuple
    n1_step: tuple | None


def _near_zero(value: complex, scale: float) -> bool:
    return abs(value) <= _REL * max(scale, _TINY)


def ri_again_decision(seq: RISequence, omega: OmegaSeq, n_max: int) -> RIDecision:
    """Classify whether the X_n family satisfies a same-shape recurrence.

    Branches, in the order tested:
      'corollary'    all u_n vanish; f_n is the ratio of consecutive v_n.
      'cancelled'    u_n*zeta + v_n vanishes from n = 2 on (the recursive-mode
                     situation); a linear factor cancels and f_n is the ratio
                     of consecutive u_n, defined from n = 2.
      'proportional' generic case: (u_{n+1}, v_{n+1}) = f_n (u_n, v_n) checked
                     componentwise; first violation is reported as witness.
    """
    if n_max < 2:
        raise InvalidInput("classification needs n_max >= 2")
    mixed = [mixed_coeffs(seq, omega, n) for n in range(1, n_max + 1)]

    def u_scale(n):
        return max(abs(omega.value(n - 1)), abs(seq.tau(n - 1)))

    def v_scale(n):
        return abs(omega.value(n - 1)) * (abs(omega.value(n)) + abs(seq.beta(n - 1)))

    for mc in mixed:
        if _near_zero(mc.u, u_scale(mc.n)) and _near_zero(mc.v, v_scale(mc.n)):
            raise DegenerateStep(mc.n, "u and v both vanish; step carries no information")

    all_u_zero = all(_near_zero(mc.u, u_scale(mc.n)) for mc in mixed) \
        and _near_zero(mixed[-1].u_next, u_scale(n_max + 1))
    if all_u_zero:
        f = []
        steps = []
        for mc in mixed:
            if mc.v == 0:
                raise DegenerateStep(mc.n, "v vanished on the all-u-zero branch")
            fn = mc.v_next / mc.v
            f.append(fn)
            tau_prev = seq.tau(mc.n - 1)
            shift = (tau_prev * mc.v_next / (seq.tau(mc.n) * mc.v)) * seq.beta(mc.n - 1)
            steps.append((mc.n, shift, fn * tau_prev))
        return RIDecision(True, "corollary", tuple(f), 1, None, tuple(steps), None)

    zt = omega.zeta
    cancelled = all(
        _near_zero(mc.u * zt + mc.v, max(abs(mc.u * zt), abs(mc.v)))
        for mc in mixed if mc.n >= 2)
    if cancelled and n_max >= 2:
        f = []
        steps = []
        for mc in mixed:
            if mc.n < 2:
                continue
            if mc.u == 0:
                raise DegenerateStep(mc.n, "u vanished on the cancelled branch")
            fn = mc.u_next / mc.u
            f.append(fn)
            theta = mc.u_next * omega.value(mc.n - 1) * seq.beta(mc.n - 1) \
                / (mc.u * omega.value(mc.n))
            steps.append((mc.n, theta, fn * seq.tau(mc.n - 1)))
        n1 = None
        mc1 = mixed[0]
        if _near_zero(mc1.u, u_scale(1)):
            if mc1.v == 0:
                raise DegenerateStep(1, "v_1 vanished with u_1")
            e2 = mc1.s / mc1.v
            d2 = mc1.t / mc1.s
            f2 = (mc1.u_next / mc1.v) * seq.tau(0)
            n1 = (e2, d2, f2)
        return RIDecision(True, "cancelled", tuple(f), 2, None, tuple(steps), n1)

    f = []
    steps = []
    for mc in mixed:
        fn = mc.f
        if fn is None:
            raise DegenerateStep(mc.n, "no usable ratio at this step")
        ru = abs(mc.u_next - fn * mc.u)
        rv = abs(mc.v_next - fn * mc.v)
        su = max(abs(mc.u_next), abs(fn * mc.u), u_scale(mc.n + 1))
        sv = max(abs(mc.v_next), abs(fn * mc.v), v_scale(mc.n + 1))
        if ru > _REL * max(su, _TINY) or rv > _REL * max(sv, _TINY):
            return RIDecision(False, "not-ri", tuple(f), 1, mc.n, (), None)
        f.append(fn)
        w_n = omega.value(mc.n)
        shift = omega.value(mc.n - 1) * fn - mc.v_next / w_n
        steps.append((mc.n, shift, seq.tau(mc.n - 1) * fn))
    return RIDecision(True, "proportional", tuple(f), 1, None, tuple(steps), None)


def regenerate_X(seq: RISequence, omega: OmegaSeq, decision: RIDecision,
                 n_max: int) -> list:
    """Rebuild X_0..X_{n_max} from the emitted simplified recurrence."""
    if not decision.is_RI:
        raise InvalidInput("cannot regenerate from a negative classification")
    X = [ComplexPoly.one(),
         ComplexPoly([omega.value(1) - seq.beta(0), 1.0])]
    by_n = {n: (shift, t_eff) for n, shift, t_eff in decision.steps}
    start = 1
    if decision.branch == "cancelled":
        if decision.n1_step is not None:
            e2, d2, f2 = decision.n1_step
            lin = ComplexPoly([-d2, 1.0]).scale(e2)
            corr = ComplexPoly([-omega.zeta, 1.0]).shift_up(1).scale(f2)
            X.append(lin * X[1] - corr)
        else:
            X.append(build_X(seq, omega, 2)[2])
        start = 2
    for n in range(start, n_max):
        shift, t_eff = by_n[n]
        X.append(ComplexPoly([-shift, 1.0]) * X[n] - X[n - 1].shift_up(1).scale(t_eff))
    return X[:n_max + 1]


def _coeff_fn(cfg: dict, which: str):
    kind = cfg.get("kind")
    if kind == "const":
        c = _cplx(cfg["value"])
        return lambda n: c
    if kind == "list":
        vals = [_cplx(v) for v in cfg["values"]]

        def fn(n):
            if n >= len(vals):
                raise InvalidInput(f"{which}_{n} beyond configured list")
            return vals[n]

        return fn
    if kind == "hyper":
        b = complex(float(cfg["lam"]), float(cfg.get("eta", 0.0)))
        bb = b.conjugate()
        if which == "beta":
            return lambda n: -(bb + n + 1) / (b + n + 1)
        # The index-0 weight multiplies the vanished B_{-1} and never reaches
        # the recurrence; 1 stands in so the nonzero check is satisfied.
        return lambda n: 1.0 if n == 0 else \
            n * (b + bb + n + 1) / ((b + n) * (b + n + 1))
    raise InvalidInput(f"unknown {which} kind: {kind!r}")


def sequence_from_config(cfg: dict) -> RISequence:
    """RISequence from {'beta': {...}, 'tau': {...}} with kinds const/list/hyper."""
    return RISequence(_coeff_fn(cfg["beta"], "beta"), _coeff_fn(cfg["tau"], "tau"))


def omega_from_config(cfg: dict, seq: RISequence,
                      L: MomentFunctional | None = None,
                      params: TransformParams | None = None) -> OmegaSeq:
    """OmegaSeq from the 'omega' section of a sequence config."""
    mode = cfg.get("mode")
    zeta = _cplx(cfg["zeta"])
    if mode == "recursive":
        w0, w1 = (_cplx(v) for v in cfg["seeds"])
        return OmegaSeq.recursive(seq, zeta, w0, w1)
    if mode == "list":
        return OmegaSeq.explicit(zeta, [_cplx(v) for v in cfg["values"]])
    if mode == "rratio":
        if L is None or params is None:
            raise InvalidInput("rratio mode needs the functional and transform parameters")
        return omega_rratio(seq, L, params, zeta, int(cfg.get("n_max", 16)))
    raise InvalidInput(f"unknown omega mode: {mode!r}")
