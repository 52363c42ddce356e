"""Ground states of -Δu + (-Δ)^s u = |u|^{p-2} u on a periodic box.

The main entry point is :func:`petviashvili_solve`, a stabilised fixed-point
iteration

    û_{k+1} = M_k^γ K(ξ)^{-1} F[|u_k|^{p-2} u_k],
    M_k = <K u_k, u_k> / <|u_k|^{p-2} u_k, u_k>,

which removes the amplitude instability of the plain map u = K^{-1} N(u).
The remaining functions project fields onto the Nehari and Pohozaev sets and
rescale Weinstein critical points into solutions.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
import scipy.fft as sfft
from scipy.optimize import brentq

from .errors import DegenerateInputError, ParameterError
from .field import (
    Field,
    GridSpec,
    dilate,
    dilation_outside_fraction,
    mixed_symbol,
    norm_triple,
    rearrange_radial,
    synth_gaussian,
)
from .functionals import (
    NormTriple,
    Params,
    best_constant_from_Q,
    dilation_triple,
    energy_I,
    nehari_t,
    pohozaev_P,
    q_lambdas,
    scale_triple,
)
from .verify import IdentityReport, _nonlinearity, check_identities, zero_mode_k0

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class InitialGuess:
    amplitude: float = 2.0
    width: float = 1.0
    center: tuple = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-8
    max_iter: int = 500
    gamma: Optional[float] = None  # None -> (p-1)/(p-2)
    dealias: bool = False
    init: InitialGuess = InitialGuess()
    zero_mode: str = "projected"
    rearrange_init: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ParameterError(f"tol must be > 0, got {self.tol}", bound="tol > 0")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ParameterError(f"max_iter must be an integer >= 1, got {self.max_iter}", bound="max_iter >= 1")
        if self.gamma is not None and not self.gamma > 0:
            raise ParameterError(f"gamma must be > 0, got {self.gamma}", bound="gamma > 0")
        zero_mode_k0(self.zero_mode)

    def gamma_for(self, params: Params) -> float:
        return self.gamma if self.gamma is not None else (params.p - 1) / (params.p - 2)


@dataclass
class SolveReport:
    iterations: int
    residual_history: list
    stabilizer_history: list
    change_history: list
    min_history: list
    final_triple: NormTriple
    energy_c: float
    identity_report: IdentityReport
    best_constant: float
    converged: bool
    wall_time: float
    gamma: float = math.nan
    zero_mode: str = "projected"
    extras: dict = field(default_factory=dict)


def _rfft_symbol(grid: GridSpec, s: float, k0):
    """K on the rfftn half-spectrum, plus multiplicities of each stored mode."""
    n = grid.n
    K = mixed_symbol(grid, s, k0)[:, :, : n // 2 + 1].copy()
    mult = np.full(n // 2 + 1, 2.0)
    mult[0] = 1.0
    mult[n // 2] = 1.0
    return K, mult[None, None, :]


def _dealias_mask(grid: GridSpec) -> np.ndarray:
    n = grid.n
    k = np.abs(sfft.fftfreq(n, d=1.0 / n))
    keep = k <= n / 3.0
    kz = keep[: n // 2 + 1].copy()
    kz[n // 2] = False
    return keep[:, None, None] & keep[None, :, None] & kz[None, None, :]


class _StabilisedMap:
    """The map u -> M(u)^γ K^{-1} N(u) on the rfftn half-spectrum."""

    def __init__(self, params: Params, grid: GridSpec, cfg: SolverConfig):
        self.p = params.p
        self.gamma = cfg.gamma_for(params)
        k0 = zero_mode_k0(cfg.zero_mode)
        self.projected = k0 is not None and math.isinf(k0)
        self.K, self.mult = _rfft_symbol(grid, params.s, k0)
        if self.projected:
            self.K[0, 0, 0] = 1.0  # placeholder; the zero mode is zeroed explicitly
        p = params.p
        even = float(p).is_integer() and p % 2 == 0
        self.mask = _dealias_mask(grid) if cfg.dealias and even else None
        self.w = grid.spectral_weight
        self.shape = grid.shape

    def __call__(self, u: np.ndarray):
        """Return (next iterate, stabiliser M, relative equation residual at u)."""
        mult, K = self.mult, self.K
        c = sfft.rfftn(u)
        nc = sfft.rfftn(_nonlinearity(u, self.p))
        if self.mask is not None:
            nc *= self.mask
        pw = c.real**2 + c.imag**2
        if self.projected:
            pw[0, 0, 0] = 0.0
        kuu = self.w * float(np.sum(mult * K * pw))
        nuu = self.w * float(np.sum(mult * (nc * np.conj(c)).real))
        if not nuu > 0:
            raise DegenerateInputError("<N(u), u> vanished; the iterate collapsed to zero")
        M = kuu / nuu
        r = K * c - nc
        if self.projected:
            r[0, 0, 0] = 0.0
        res = math.sqrt(float(np.sum(mult * np.abs(r) ** 2)) / float(np.sum(mult * np.abs(nc) ** 2)))
        c_new = M**self.gamma * nc / K
        if self.projected:
            c_new[0, 0, 0] = 0.0
        return sfft.irfftn(c_new, s=self.shape), M, res


def petviashvili_solve(params: Params, grid: GridSpec, cfg: SolverConfig = SolverConfig(), initial: Optional[Field] = None):
    """Stabilised fixed-point solve; returns ``(field, SolveReport)``.

    Stops once the relative field change, |M_k - 1| and the relative
    equation residual are all below ``cfg.tol``. Running out of iterations is
    not an error: the report then has ``converged=False``.
    """
    t0 = time.perf_counter()
    if initial is None:
        init = cfg.init
        initial = synth_gaussian(grid, init.amplitude, init.width, init.center)
    if initial.grid != grid:
        raise ParameterError("initial field lives on a different grid", bound="grid")
    if not np.any(initial.values):
        raise DegenerateInputError("zero initial field: the iteration has no nontrivial direction")
    if cfg.rearrange_init:
        initial = rearrange_radial(initial)

    step = _StabilisedMap(params, grid, cfg)
    u = initial.values.copy()
    residuals, stabilizers, changes, minima = [], [], [], []
    converged = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        u_new, M, res = step(u)
        change = float(np.linalg.norm(u_new - u) / np.linalg.norm(u_new))
        residuals.append(res)
        stabilizers.append(M)
        changes.append(change)
        minima.append(float(u.min()))
        if change <= cfg.tol and abs(M - 1.0) <= cfg.tol and res <= cfg.tol:
            converged = True
            break
        u = u_new

    result = Field(grid, u)
    triple = norm_triple(result, params)
    ident = check_identities(triple, params, result, cfg.zero_mode)
    report = SolveReport(
        iterations=it,
        residual_history=residuals,
        stabilizer_history=stabilizers,
        change_history=changes,
        min_history=minima,
        final_triple=triple,
        energy_c=energy_I(triple, params),
        identity_report=ident,
        best_constant=best_constant_from_Q(triple.m, params),
        converged=converged,
        wall_time=time.perf_counter() - t0,
        gamma=step.gamma,
        zero_mode=cfg.zero_mode,
    )
    log.info("solve N=%d s=%g p=%g n=%d L=%g: %d iterations, converged=%s, residual=%.3e",
             params.N, params.s, params.p, grid.n, grid.half_width, it, converged, residuals[-1])
    return result, report


def petviashvili_step(u: Field, params: Params, cfg: SolverConfig = SolverConfig()) -> Field:
    """One application of the stabilised map."""
    u_new, _, _ = _StabilisedMap(params, u.grid, cfg)(u.values)
    return Field(u.grid, u_new)


# ------------------------------------------------------------ projections

class BuildQResult(NamedTuple):
    field: Field
    lambda1: float
    lambda2: float
    predicted: NormTriple
    measured: NormTriple
    outside_fraction: float


def build_Q(u: Field, params: Params) -> BuildQResult:
    """Q = lambda1 u(lambda2 x) with the amplitude/dilation pair of :func:`q_lambdas`."""
    t = norm_triple(u, params)
    if t.a <= 0 or t.b <= 0 or t.m <= 0:
        raise DegenerateInputError("build_Q needs a strictly positive triple")
    l1, l2 = q_lambdas(t, params)
    Q = dilate(u, l1, l2)
    return BuildQResult(
        Q, l1, l2, scale_triple(t, l1, l2, params), norm_triple(Q, params), dilation_outside_fraction(u, l2)
    )


def nehari_project(u: Field, params: Params) -> Field:
    t = norm_triple(u, params)
    if t.m <= 0:
        raise DegenerateInputError("Nehari projection of the zero field")
    return Field(u.grid, nehari_t(t, params) * u.values)


def fibering_root(C1: float, C2: float, C3: float, params: Params, rtol: float = 1e-13) -> float:
    """Unique maximiser of g1(t) = C1 t^(N-2) + C2 t^(N-2s) - C3 t^N on t > 0.

    Works on q(t) = g1'(t) / t^(N-2s-1), which is strictly decreasing;
    brackets by doubling/halving from t = 1, bisects, then polishes with
    Newton steps.
    """
    if not C3 > 0:
        raise DegenerateInputError("C3 <= 0: g1 is increasing, no critical point")
    if not C1 + C2 > 0:
        raise DegenerateInputError("C1 + C2 = 0: the critical point degenerates to t = 0")
    N, s = params.N, params.s

    def q(t):
        return C1 * (N - 2) * t ** (2 * s - 2) + C2 * (N - 2 * s) - C3 * N * t ** (2 * s)

    def dq(t):
        return C1 * (N - 2) * (2 * s - 2) * t ** (2 * s - 3) - C3 * N * 2 * s * t ** (2 * s - 1)

    lo = hi = 1.0
    while q(lo) <= 0:
        lo *= 0.5
        if lo < 1e-300:
            raise ArithmeticError("failed to bracket the fibering root from below")
    while q(hi) >= 0:
        hi *= 2.0
        if hi > 1e300:
            raise ArithmeticError("failed to bracket the fibering root from above")
    t = brentq(q, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    for _ in range(3):
        step = q(t) / dq(t)
        if not math.isfinite(step) or abs(step) > 0.5 * t:
            break
        t -= step
        if abs(step) <= rtol * t:
            break

    # g1' = t^(N-2s-1) q(t), so the checks run on q and q' (no overflow for huge roots)
    scale = C1 * (N - 2) * t ** (2 * s - 2) + C2 * (N - 2 * s) + C3 * N * t ** (2 * s)
    if abs(q(t)) > 1e-10 * scale:
        raise ArithmeticError(f"fibering root postcondition failed: g1'({t}) / t^(N-2s-1) = {q(t)}")
    if not dq(t) < 0:
        raise ArithmeticError("fibering root is not a maximum")
    return t


def pohozaev_project(u: Field, params: Params) -> tuple[float, Field]:
    """Dilation t with u(x/t) on the Pohozaev set, and that dilated field."""
    t = norm_triple(u, params)
    if t.m <= 0:
        raise DegenerateInputError("zero L^p mass: g2' > 0 everywhere, no Pohozaev projection")
    tbar = pohozaev_dilation(t, params)
    return tbar, dilate(u, 1.0, 1.0 / tbar)


def pohozaev_dilation(t: NormTriple, params: Params) -> float:
    tbar = fibering_root(t.a / 2, t.b / 2, t.m / params.p, params)
    d = dilation_triple(t, tbar, params)
    scale = params.N * d.m / params.p
    if abs(pohozaev_P(d, params)) > 1e-10 * scale:
        raise ArithmeticError("Pohozaev projection postcondition failed")
    return tbar
