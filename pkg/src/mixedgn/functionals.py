"""Grid-free algebra over norm triples.

Everything here acts on three scalars

    a = ||u||^2_{D^{1,2}},  b = ||u||^2_{D^{s,2}},  m = ||u||^p_{L^p}

together with the problem parameters (N, s, p). The functions are exact
closed forms; nothing in this module touches a grid, so every identity can be
checked to rounding precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateInputError, ParameterError


@dataclass(frozen=True)
class Params:
    """Dimension ``N >= 3``, fractional order ``s`` in (0, 1), exponent ``p``.

    The exponent must lie strictly between the fractional and the classical
    critical Sobolev exponents, 2N/(N-2s) < p < 2N/(N-2).
    """

    N: int
    s: float
    p: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 3:
            raise ParameterError(f"dimension N must be an integer >= 3, got {self.N}", bound="N >= 3")
        if not 0.0 < self.s < 1.0:
            raise ParameterError(f"s must lie in (0, 1), got {self.s}", bound="0 < s < 1")
        lo = 2.0 * self.N / (self.N - 2.0 * self.s)
        hi = 2.0 * self.N / (self.N - 2.0)
        if not self.p > lo:
            raise ParameterError(
                f"p must exceed 2*_s = {lo:.17g} (got p = {self.p})", bound=f"p > 2*_s = {lo:.17g}"
            )
        if not self.p < hi:
            raise ParameterError(
                f"p must be below 2* = {hi:.17g} (got p = {self.p})", bound=f"p < 2* = {hi:.17g}"
            )
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "p", float(self.p))

    @property
    def two_s_star(self) -> float:
        return 2.0 * self.N / (self.N - 2.0 * self.s)

    @property
    def two_star(self) -> float:
        return 2.0 * self.N / (self.N - 2.0)


@dataclass(frozen=True)
class NormTriple:
    a: float
    b: float
    m: float

    def __post_init__(self):
        for name in ("a", "b", "m"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0.0:
                raise ParameterError(f"triple component {name} must be finite and >= 0, got {v}", bound=f"{name} >= 0")
            object.__setattr__(self, name, v)

    def as_tuple(self):
        return (self.a, self.b, self.m)


@dataclass(frozen=True)
class ExponentBundle:
    alpha: float
    beta: float
    A1: float
    A2: float
    r_a: float
    r_b: float
    K: float
    two_s_star: float
    two_star: float


def exponents(params: Params) -> ExponentBundle:
    """Derived exponents of the inequality and the constant K = r_b^A1 r_a^A2.

    ``alpha`` is the power on ||u||_{D^{s,2}}, ``beta`` the power on
    ||u||_{D^{1,2}}; ``r_a`` and ``r_b`` are the ratios a/m and b/m of an
    optimizer.
    """
    N, s, p = params.N, params.s, params.p
    lo_gap = p * (N - 2 * s) - 2 * N   # > 0  <=>  p > 2*_s
    hi_gap = 2 * N - p * (N - 2)       # > 0  <=>  p < 2*
    if lo_gap <= 0:
        raise ParameterError(f"p must exceed 2*_s = {params.two_s_star:.17g}", bound="p > 2*_s")
    if hi_gap <= 0:
        raise ParameterError(f"p must be below 2* = {params.two_star:.17g}", bound="p < 2*")
    alpha = hi_gap / (2 * (1 - s))
    beta = lo_gap / (2 * (1 - s))
    r_a = lo_gap / (2 * p * (1 - s))
    r_b = hi_gap / (2 * p * (1 - s))
    A1, A2 = alpha / 2, beta / 2
    return ExponentBundle(
        alpha=alpha,
        beta=beta,
        A1=A1,
        A2=A2,
        r_a=r_a,
        r_b=r_b,
        K=r_b**A1 * r_a**A2,
        two_s_star=params.two_s_star,
        two_star=params.two_star,
    )


def ratio_d12_ds2(params: Params) -> float:
    """Optimizer ratio a/b = (p(N-2s)-2N) / (2N-p(N-2))."""
    N, s, p = params.N, params.s, params.p
    return (p * (N - 2 * s) - 2 * N) / (2 * N - p * (N - 2))


def optimizer_triple(m: float, params: Params) -> NormTriple:
    """The triple (r_a m, r_b m, m) that every optimizer satisfies."""
    e = exponents(params)
    return NormTriple(e.r_a * m, e.r_b * m, m)


def weinstein(t: NormTriple, params: Params) -> float:
    if t.m <= 0.0:
        raise DegenerateInputError("Weinstein undefined for zero L^p mass")
    e = exponents(params)
    return t.b**e.A1 * t.a**e.A2 / t.m


def energy_I(t: NormTriple, params: Params) -> float:
    return 0.5 * (t.a + t.b) - t.m / params.p


def pohozaev_P(t: NormTriple, params: Params) -> float:
    N, s, p = params.N, params.s, params.p
    return 0.5 * (N - 2) * t.a + 0.5 * (N - 2 * s) * t.b - N * t.m / p


def nehari_phi(t: NormTriple) -> float:
    """<I'(u), u> = a + b - m."""
    return t.a + t.b - t.m


def nehari_phi_derivative(t: NormTriple, params: Params) -> float:
    """<Phi'(u), u> = 2(a + b) - p m; equals (2 - p)(a + b) on the Nehari set."""
    return 2.0 * (t.a + t.b) - params.p * t.m


def scale_triple(t: NormTriple, lambda1: float, lambda2: float, params: Params) -> NormTriple:
    """Triple of v(x) = lambda1 * u(lambda2 * x)."""
    if not lambda2 > 0:
        raise ParameterError(f"lambda2 must be > 0, got {lambda2}", bound="lambda2 > 0")
    N, s, p = params.N, params.s, params.p
    l1 = abs(lambda1)

    def part(k1, k2, x):
        try:
            out = l1**k1 * lambda2**k2 * x
        except OverflowError:
            out = math.inf
        if math.isfinite(out) and (out != 0 or l1 == 0 or x == 0):
            return out
        # a huge factor times a tiny one: recombine in logs
        return math.exp(k1 * math.log(l1) + k2 * math.log(lambda2) + math.log(x))

    return NormTriple(part(2, 2 - N, t.a), part(2, 2 * s - N, t.b), part(p, -N, t.m))


def dilation_triple(t: NormTriple, dilation: float, params: Params) -> NormTriple:
    """Triple of u(x / dilation)."""
    if not dilation > 0:
        raise ParameterError(f"dilation must be > 0, got {dilation}", bound="dilation > 0")
    N, s = params.N, params.s
    return NormTriple(dilation ** (N - 2) * t.a, dilation ** (N - 2 * s) * t.b, dilation**N * t.m)


def _check_rel(value, target, rtol, what):
    if abs(value - target) > rtol * max(abs(target), 1e-300):
        raise ArithmeticError(f"postcondition failed: {what} = {value!r}, expected {target!r}")


def rescale_unit_lambdas(t: NormTriple, params: Params) -> tuple[float, float]:
    """(lambda1, lambda2) such that lambda1 * u(lambda2 x) has a = b = 1.

    Solves 1 = l1^2 l2^(2s-N) b and 1 = l1^2 l2^(2-N) a, which gives
    l1 = b^((N-2)/(4(1-s))) a^(-(N-2s)/(4(1-s))).
    """
    if t.a <= 0 or t.b <= 0:
        raise DegenerateInputError("rescale to a = b = 1 needs a > 0 and b > 0")
    N, s = params.N, params.s
    lambda2 = (t.b / t.a) ** (1.0 / (2 - 2 * s))
    lambda1 = t.b ** ((N - 2) / (4 * (1 - s))) * t.a ** (-(N - 2 * s) / (4 * (1 - s)))
    # checked in logs: lambda1^2 alone can overflow for extreme triples
    ll1, ll2 = 2.0 * math.log(lambda1), math.log(lambda2)
    _check_rel(math.exp(ll1 + (2 - N) * ll2 + math.log(t.a)), 1.0, 1e-10, "rescaled a")
    _check_rel(math.exp(ll1 + (2 * s - N) * ll2 + math.log(t.b)), 1.0, 1e-10, "rescaled b")
    return lambda1, lambda2


def q_lambdas(t: NormTriple, params: Params) -> tuple[float, float]:
    """Amplitude and dilation mapping a Weinstein critical point onto a solution of the equation."""
    if t.a <= 0 or t.b <= 0 or t.m <= 0:
        raise DegenerateInputError("q_lambdas needs a, b, m > 0")
    N, s, p = params.N, params.s, params.p
    lo_gap = p * (N - 2 * s) - 2 * N
    lambda2 = (ratio_d12_ds2(params) * t.b / t.a) ** (1.0 / (2 - 2 * s))
    lambda1 = lambda2 ** (2.0 / (p - 2)) * ((2 * p * (1 - s) / lo_gap) * t.a / t.m) ** (1.0 / (p - 2))
    return lambda1, lambda2


def nehari_t(t: NormTriple, params: Params) -> float:
    """Amplitude t_u with t_u * u on the Nehari set."""
    if t.m <= 0:
        raise DegenerateInputError("Nehari projection undefined for zero L^p mass")
    p = params.p
    tu = ((t.a + t.b) / t.m) ** (1.0 / (p - 2))
    if t.a + t.b > 0:
        a2, b2, m2 = tu * tu * t.a, tu * tu * t.b, tu**p * t.m
        _check_rel(a2 + b2, m2, 1e-10, "projected a + b")
    return tu


def fibering_g(t: float, C1: float, C2: float, C3: float, params: Params) -> tuple[float, float]:
    """g1(t) = C1 t^(N-2) + C2 t^(N-2s) - C3 t^N and its derivative."""
    if not t > 0:
        raise ParameterError(f"t must be > 0, got {t}", bound="t > 0")
    N, s = params.N, params.s
    g = C1 * t ** (N - 2) + C2 * t ** (N - 2 * s) - C3 * t**N
    dg = C1 * (N - 2) * t ** (N - 3) + C2 * (N - 2 * s) * t ** (N - 2 * s - 1) - C3 * N * t ** (N - 1)
    return g, dg


def fibering_g2(t: float, C1: float, C2: float, C3: float, params: Params) -> float:
    """Second derivative of g1."""
    N, s = params.N, params.s
    return (
        C1 * (N - 2) * (N - 3) * t ** (N - 4)
        + C2 * (N - 2 * s) * (N - 2 * s - 1) * t ** (N - 2 * s - 2)
        - C3 * N * (N - 1) * t ** (N - 2)
    )


def g3_g4(t: float, N: int, s: float) -> tuple[float, float]:
    if not t > 0:
        raise ParameterError(f"t must be > 0, got {t}", bound="t > 0")
    g3 = 1.0 / N + (N - 2) / (2.0 * N) * t**N - 0.5 * t ** (N - 2)
    g4 = s / N + (N - 2 * s) / (2.0 * N) * t**N - 0.5 * t ** (N - 2 * s)
    return g3, g4


class CramerTable(NamedTuple):
    detD: float
    detD1: float
    detD2: float
    detD3: float
    x1: float
    x2: float
    x3: float


class CramerResult(NamedTuple):
    numeric: CramerTable
    closed: CramerTable


def _det3(M) -> float:
    (a, b, c), (d, e, f), (g, h, i) = M
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def cramer_dets(params: Params, k: float) -> CramerResult:
    """Cramer's rule for the energy / Pohozaev / <P'(u),u> system at level k.

    ``numeric`` expands the 3x3 determinants directly; ``closed`` holds the
    simplified expressions. x2 < 0 for every k > 0, which is what rules out
    a critical point of P on the Pohozaev set.
    """
    N, s, p = params.N, params.s, params.p
    D = [
        [0.5, 0.5, -1.0 / p],
        [(N - 2) / 2.0, (N - 2 * s) / 2.0, -N / p],
        [N - 2.0, N - 2.0 * s, -float(N)],
    ]
    rhs = [k, 0.0, 0.0]
    dets = [_det3(D)]
    for col in range(3):
        Dc = [row[:] for row in D]
        for r in range(3):
            Dc[r][col] = rhs[r]
        dets.append(_det3(Dc))
    numeric = CramerTable(*dets, *(d / dets[0] for d in dets[1:]))

    detD = -N * (p - 2) * (1 - s) / (2 * p)
    closed = CramerTable(
        detD,
        -k * N * (p - 2) * (N - 2 * s) / (2 * p),
        k * N * (p - 2) * (N - 2) / (2 * p),
        0.0,
        k * (N - 2 * s) / (1 - s),
        -k * (N - 2) / (1 - s),
        0.0,
    )
    return CramerResult(numeric, closed)


def aux_J(z: float, t: NormTriple, params: Params) -> tuple[float, float]:
    """J(z) = I(u(e^{-z} x)) and dJ/dz = P(u(e^{-z} x))."""
    N, s, p = params.N, params.s, params.p
    J = math.exp((N - 2) * z) * t.a / 2 + math.exp((N - 2 * s) * z) * t.b / 2 - math.exp(N * z) * t.m / p
    return J, pohozaev_P(dilation_triple(t, math.exp(z), params), params)


def best_constant_from_Q(m: float, params: Params) -> float:
    """C = 1 / (K m^((p-2)/2)) with m = ||Q||_p^p of a solution-optimizer Q."""
    if not m > 0:
        raise DegenerateInputError("best constant needs a positive L^p mass")
    e = exponents(params)
    return 1.0 / (e.K * m ** ((params.p - 2) / 2))


def best_constant_from_c(c: float, params: Params) -> float:
    """Same constant expressed through the ground-state energy level c."""
    if not c > 0:
        raise ParameterError(f"ground-state level c must be > 0, got {c}", bound="c > 0")
    p = params.p
    e = exponents(params)
    return 1.0 / (e.K * (2 * p * c / (p - 2)) ** ((p - 2) / 2))


def relative_gap(x: float, y: float) -> float:
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0 else abs(x - y) / scale


__all__ = [
    "Params",
    "NormTriple",
    "ExponentBundle",
    "CramerTable",
    "CramerResult",
    "exponents",
    "ratio_d12_ds2",
    "optimizer_triple",
    "weinstein",
    "energy_I",
    "pohozaev_P",
    "nehari_phi",
    "nehari_phi_derivative",
    "scale_triple",
    "dilation_triple",
    "rescale_unit_lambdas",
    "q_lambdas",
    "nehari_t",
    "fibering_g",
    "fibering_g2",
    "g3_g4",
    "cramer_dets",
    "aux_J",
    "best_constant_from_Q",
    "best_constant_from_c",
    "relative_gap",
]
