"""Acceptance suite: the nine headline criteria at their stated tolerances.

Each criterion prints one ``PASS``/``FAIL`` line. Run standalone for just the
summary::

    python3 tests/test_acceptance.py
"""
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))
from conftest import REF_PARAMS, random_params, reference_solve  # noqa: E402
from mixedgn import (  # noqa: E402
    GridSpec,
    NormTriple,
    Params,
    best_constant_from_Q,
    best_constant_from_c,
    cramer_dets,
    dilation_triple,
    energy_I,
    exponents,
    fibering_g,
    g3_g4,
    gaussian_oracle,
    lp_norm,
    nehari_phi,
    nehari_t,
    norm_triple,
    optimizer_triple,
    pohozaev_P,
    rearrange_radial,
    rescale_unit_lambdas,
    scale_triple,
    weinstein,
)
from mixedgn.field import Field  # noqa: E402
from mixedgn.verify import (  # noqa: E402
    dJdz_fd_error,
    derivative_checks,
    gn_sample_details,
    holder_check,
    holder_exponents,
    random_mixture,
)

P = REF_PARAMS


def _rel(x, y):
    return abs(x - y) / max(abs(y), 1e-300)


class Outcome:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.checks = []

    def check(self, name, value, limit, ok=None):
        ok = (value <= limit) if ok is None else ok
        self.checks.append((name, value, limit, bool(ok)))

    @property
    def passed(self):
        return all(c[3] for c in self.checks)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        parts = []
        for name, value, limit, ok in self.checks:
            mark = "" if ok else " !"
            parts.append(f"{name}={value:.3g} (<= {limit:.3g}){mark}")
        return f"[{status}] criterion {self.number}: {self.title} | " + "; ".join(parts)


# ----------------------------------------------------------- criterion 1

def criterion_1() -> Outcome:
    out = Outcome(1, "algebraic identity suite, 1e4 random cases, residuals <= 1e-11")
    rng = np.random.default_rng(20240601)
    worst = dict.fromkeys(
        ["balance", "r_sum", "W_scale", "fibering", "rescale_unit", "nehari_t", "cramer", "g3_g4_at_1"], 0.0
    )
    g_positive = True
    t0 = time.perf_counter()
    for _ in range(10_000):
        params = random_params(rng)
        N, s, p = params.N, params.s, params.p
        a, b, m = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), 3))
        t = NormTriple(a, b, m)
        e = exponents(params)
        worst["balance"] = max(worst["balance"], _rel(e.alpha + e.beta, p))
        worst["r_sum"] = max(worst["r_sum"], abs(e.r_a + e.r_b - 1))

        l1, l2 = np.exp(rng.uniform(math.log(0.1), math.log(10.0), 2))
        worst["W_scale"] = max(worst["W_scale"], _rel(weinstein(scale_triple(t, l1, l2, params), params), weinstein(t, params)))

        tt = float(np.exp(rng.uniform(math.log(0.05), math.log(20.0))))
        _, dg = fibering_g(tt, a / 2, b / 2, m / p, params)
        d = dilation_triple(t, tt, params)
        scale = (N - 2) * d.a / 2 + (N - 2 * s) * d.b / 2 + N * d.m / p
        worst["fibering"] = max(worst["fibering"], abs(tt * dg - pohozaev_P(d, params)) / scale)

        l1, l2 = rescale_unit_lambdas(t, params)
        ll1, ll2 = 2 * math.log(l1), math.log(l2)
        ua = math.exp(ll1 + (2 - N) * ll2 + math.log(a))
        ub = math.exp(ll1 + (2 * s - N) * ll2 + math.log(b))
        worst["rescale_unit"] = max(worst["rescale_unit"], abs(ua - 1), abs(ub - 1))

        tn = scale_triple(t, nehari_t(t, params), 1.0, params)
        worst["nehari_t"] = max(worst["nehari_t"], abs(nehari_phi(tn)) / tn.m)

        res = cramer_dets(params, float(rng.uniform(0.0, 10.0)))
        cs = max(abs(v) for v in res.closed) or 1.0
        worst["cramer"] = max(worst["cramer"], max(abs(x - y) for x, y in zip(res.numeric, res.closed)) / cs)

        g1 = g3_g4(1.0, N, s)
        worst["g3_g4_at_1"] = max(worst["g3_g4_at_1"], abs(g1[0]), abs(g1[1]))
        off = float(rng.choice([rng.uniform(0.01, 0.999), rng.uniform(1.001, 8.0)]))
        g3, g4 = g3_g4(off, N, s)
        g_positive &= g3 > 0 and g4 > 0
    elapsed = time.perf_counter() - t0
    for k, v in worst.items():
        out.check(k, v, 1e-11)
    out.check("g3_g4>0 off t=1", 0.0 if g_positive else 1.0, 0.0)
    out.check("runtime_s", elapsed, 5.0)
    return out


# ----------------------------------------------------------- criterion 2

def criterion_2() -> Outcome:
    out = Outcome(2, "identity chain on optimizer triples, 1e-12")
    rng = np.random.default_rng(7)
    worst = dict.fromkeys(["P", "Phi", "eq16", "C_Q_vs_1/W", "C_Q_vs_C_c"], 0.0)
    t0 = time.perf_counter()
    for _ in range(1000):
        params = random_params(rng)
        N, s, p = params.N, params.s, params.p
        m = float(np.exp(rng.uniform(math.log(1e-3), math.log(1e3))))
        t = optimizer_triple(m, params)
        worst["P"] = max(worst["P"], abs(pohozaev_P(t, params)) / (N * m / p))
        worst["Phi"] = max(worst["Phi"], abs(nehari_phi(t)) / m)
        worst["eq16"] = max(worst["eq16"], _rel((N - 2) * t.a / 2 + (N - 2 * s) * t.b / 2, N * m / p))
        C = best_constant_from_Q(m, params)
        worst["C_Q_vs_1/W"] = max(worst["C_Q_vs_1/W"], _rel(C, 1 / weinstein(t, params)))
        c = (p - 2) * m / (2 * p)
        worst["C_Q_vs_C_c"] = max(worst["C_Q_vs_C_c"], _rel(best_constant_from_c(c, params), C))
        worst["C_Q_vs_C_c"] = max(worst["C_Q_vs_C_c"], _rel(energy_I(t, params), c))
    elapsed = time.perf_counter() - t0
    for k, v in worst.items():
        out.check(k, v, 1e-12)
    out.check("runtime_s", elapsed, 1.0)
    return out


# ----------------------------------------------------------- criterion 3

def criterion_3() -> Outcome:
    out = Outcome(3, "unit Gaussian closed forms on n=64, L=10, 1e-5")
    t0 = time.perf_counter()
    rows = gaussian_oracle(P, GridSpec(64, 10.0))
    elapsed = time.perf_counter() - t0
    for r in rows:
        out.check(r["quantity"], r["rel_error"], 1e-5)
    out.check("runtime_s", elapsed, 5.0)
    return out


# ----------------------------------------------------------- criterion 4

def criterion_4() -> Outcome:
    out = Outcome(4, "ground state N=3, s=1/2, p=4, n=64, L=12")
    u, rep = reference_solve(64)
    ident = rep.identity_report
    out.check("converged", 0.0 if rep.converged else 1.0, 0.0)
    out.check("iterations", rep.iterations, 500)
    out.check("equation_res", ident.equation_residual, 1e-6)
    out.check("nehari_res", ident.nehari_residual, 1e-6)
    out.check("pohozaev_res", ident.pohozaev_residual, 2e-2)
    t = rep.final_triple
    out.check("|a/b-1|", abs(t.a / t.b - 1.0), 2e-2)
    out.check("C_Q_vs_C_c", ident.route_gap, 2e-2)
    out.check("runtime_s", rep.wall_time, 120.0)
    return out


# ----------------------------------------------------------- criterion 5

def criterion_5() -> Outcome:
    out = Outcome(5, "refinement n=64 -> 128 at L=12")
    _, r64 = reference_solve(64)
    _, r128 = reference_solve(128)
    out.check("converged_128", 0.0 if r128.converged else 1.0, 0.0)
    out.check("dC_rel", _rel(r128.best_constant, r64.best_constant), 1e-2)
    p64, p128 = r64.identity_report.pohozaev_residual, r128.identity_report.pohozaev_residual
    out.check("pohozaev_128", p128, p64, ok=p128 < p64)
    return out


# ----------------------------------------------------------- criterion 6

def criterion_6() -> Outcome:
    out = Outcome(6, "min over 100 random fields of W(u)/W(Q) >= 1 - 1e-3")
    u, rep = reference_solve(64)
    t0 = time.perf_counter()
    gs = gn_sample_details(rep.final_triple, P, u.grid, seed=0, count=100)
    elapsed = time.perf_counter() - t0
    out.check("1 - min_ratio", 1.0 - gs.minimum, 1e-3)
    out.check("runtime_s", elapsed, 60.0)
    return out


# ----------------------------------------------------------- criterion 7

def criterion_7() -> Outcome:
    out = Outcome(7, "Hölder interpolation slack, 100 fields x 5 exponents")
    grid = GridSpec(32, 12.0)
    rng = np.random.default_rng(3)
    exps = np.linspace(P.two_s_star, P.two_star, 5)
    worst = 0.0
    for _ in range(100):
        u = random_mixture(grid, rng)
        for t in exps:
            th_s, th_1 = holder_exponents(P, t)
            rhs = lp_norm(u, P.two_s_star) ** th_s * lp_norm(u, P.two_star) ** th_1
            worst = max(worst, -holder_check(u, P, t) / rhs)
    out.check("max(-slack/RHS)", worst, 1e-12)

    v = np.zeros(grid.shape)
    v[4:13, 10:20, 7:9] = 2.3
    ind = Field(grid, v)
    eq = 0.0
    for t in exps:
        th_s, th_1 = holder_exponents(P, t)
        rhs = lp_norm(ind, P.two_s_star) ** th_s * lp_norm(ind, P.two_star) ** th_1
        eq = max(eq, abs(holder_check(ind, P, t)) / rhs)
    out.check("indicator |slack|/RHS", eq, 1e-12)
    return out


# ----------------------------------------------------------- criterion 8

def criterion_8() -> Outcome:
    out = Outcome(8, "derivative checks and criticality of Q")
    rng = np.random.default_rng(8)
    dj = 0.0
    for _ in range(1000):
        params = random_params(rng)
        a, b, m = np.exp(rng.uniform(math.log(0.1), math.log(10.0), 3))
        dj = max(dj, dJdz_fd_error(NormTriple(a, b, m), params, float(rng.uniform(-1, 1))))
    out.check("dJdz_rel", dj, 1e-6)

    grid = GridSpec(32, 12.0)
    gat = 0.0
    for k in range(20):
        u = random_mixture(grid, rng)
        gat = max(gat, derivative_checks(u, P, seed=k).gateaux_error)
    out.check("gateaux_rel", gat, 1e-5)

    q, _ = reference_solve(64)
    crit = max(derivative_checks(q, P, seed=k).criticality for k in range(5))
    out.check("criticality_at_Q", crit, 1e-4)
    return out


# ----------------------------------------------------------- criterion 9

def criterion_9() -> Outcome:
    out = Outcome(9, "rearrangement on smooth random fields at n=64")
    grid = GridSpec(64, 12.0)
    rng = np.random.default_rng(9)
    exact = True
    worst_a = worst_b = -math.inf
    for _ in range(100):
        u = random_mixture(grid, rng)
        v = rearrange_radial(u)
        exact &= bool(np.array_equal(np.sort(np.abs(u.values), axis=None), np.sort(v.values, axis=None)))
        for p in (1.0, 2.0, P.p, P.two_s_star, P.two_star):
            exact &= lp_norm(u, p) == lp_norm(v, p)
        tu, tv = norm_triple(u, P), norm_triple(v, P)
        worst_a = max(worst_a, tv.a / tu.a - 1)
        worst_b = max(worst_b, tv.b / tu.b - 1)
    out.check("lp_norm bitwise", 0.0 if exact else 1.0, 0.0)
    out.check("max a*/a - 1", worst_a, 1e-2)
    out.check("max b*/b - 1", worst_b, 1e-2)
    return out


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 10)])
def test_acceptance(criterion, capsys):
    outcome = criterion()
    with capsys.disabled():
        print("\n" + outcome.line())
    assert outcome.passed, outcome.line()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for r in results:
        print(r.line())
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria pass")
    sys.exit(0 if all(r.passed for r in results) else 1)
