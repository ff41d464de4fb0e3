"""Experiment harnesses behind the CLI.

Every harness returns a :class:`ResultTable`: column names, rows and a
``meta`` dict echoing the configuration. Randomised harnesses draw from
``numpy.random.PCG64`` seeded with ``SeedSequence([seed, *cell_index])``, so
each cell's stream depends only on the seed and its index, not on execution
order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..core import HankelShape
from ..errors import PreconditionError
from ..solver import Ball, Exact, ProblemSpec, SolverConfig, Status, calibrate_tau, solve, unstructured_tau
from ..theory import PROBE_CONFIG, c_rho, certificate_check, max_missing, optimal_window, success_probe
from ..weights import Exponential, Trapezoid, Uniform, build_weights, scheme_label
from .data import SURFACE_OPTIMUM, REFERENCE_RMSE

RNG_ALGORITHM = "numpy.random.PCG64 via SeedSequence([seed, *cell_index])"

PHASE_RHOS = tuple(np.round(np.arange(0.5, 1.31, 0.1), 2))
PHASE_MS = tuple(range(1, 13))
SURFACE_ALPHAS = tuple(np.round(np.arange(0.0, 0.1001, 0.01), 2))
SURFACE_TAUS = tuple(float(t) for t in range(1000, 12001, 1000))


@dataclass
class ResultTable:
    """Rows of one experiment plus its metadata."""

    name: str
    columns: tuple
    rows: list
    meta: dict = field(default_factory=dict)

    def column(self, name):
        j = self.columns.index(name)
        return [row[j] for row in self.rows]

    def records(self):
        return [dict(zip(self.columns, row)) for row in self.rows]


def cell_rng(seed, *index):
    """Independent generator for one experiment cell."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, index)])))


def rmse(forecast, truth):
    """``sqrt(mean((forecast - truth)**2))``."""
    diff = np.asarray(forecast, dtype=float) - np.asarray(truth, dtype=float)
    return float(np.sqrt(np.mean(diff * diff)))


def config_dict(config: SolverConfig):
    return {
        "max_iterations": config.max_iterations,
        "rho": config.rho,
        "adaptive_rho": config.adaptive_rho,
        "eps_abs": config.eps_abs,
        "eps_rel": config.eps_rel,
        "multiplier_tol": config.multiplier_tol,
    }


def _map(fn, items, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# -- forecasting on a single series ---------------------------------------


@dataclass(frozen=True)
class ForecastOutcome:
    completed: np.ndarray
    singular_values: np.ndarray
    tau: float
    status: Status
    iterations: int
    n: int
    rmse: float | None

    @property
    def forecast(self):
        return self.completed[self.n:]


def forecast_series(
    values, m, L=None, weights=Uniform(), tau=None, rank=None, holdout=False, config=SolverConfig()
) -> ForecastOutcome:
    """Complete ``m`` values after the known part of ``values``.

    With ``holdout`` the last ``m`` entries of ``values`` are treated as unseen
    truth (``n = len(values) - m``) and the forecast error is reported.
    ``tau`` or a calibration ``rank`` sets the budget; neither (or ``tau = 0``)
    means the exact constraint.
    """
    values = np.asarray(values, dtype=float)
    if tau is not None and rank is not None:
        raise PreconditionError("give either tau or a calibration rank, not both")
    n = values.shape[0] - m if holdout else values.shape[0]
    if n < 2:
        raise PreconditionError(f"only {n} known values")
    p0 = values[:n]
    if L is None:
        L = optimal_window(n + m, m)
    shape = HankelShape.from_window(n, m, L)
    if m > 0:
        shape.require_forecastable()
    w = np.asarray(build_weights(weights, n, min(L, n)))
    if rank is not None:
        tau = calibrate_tau(p0, min(L, n), rank, w)
    tau = 0.0 if tau is None else float(tau)
    mode = Exact() if tau == 0.0 else Ball(tau)
    res = solve(ProblemSpec(p0=p0, shape=shape, weights=w, mode=mode), config)
    err = rmse(res.forecast, values[n:]) if holdout and m > 0 else None
    return ForecastOutcome(res.completed, res.singular_values, tau, res.status, res.iterations, n, err)


def forecast_table(values, outcome: ForecastOutcome, meta):
    rows = []
    n = outcome.n
    for k, v in enumerate(outcome.completed, start=1):
        truth = float(values[k - 1]) if k <= len(values) else None
        rows.append((k, "known" if k <= n else "forecast", float(v), truth))
    meta = dict(meta)
    meta.update(
        n=n,
        m=int(outcome.completed.shape[0] - n),
        tau=outcome.tau,
        status=outcome.status.value,
        iterations=outcome.iterations,
        rmse=outcome.rmse,
        singular_values=[float(s) for s in outcome.singular_values],
    )
    return ResultTable("forecast", ("k", "part", "value", "observed"), rows, meta)


def scheme_specs(alpha=0.05):
    return (Trapezoid(), Uniform(), Exponential(alpha))


def calibrate_table(values, L, ranks=(3, 6, 12), alpha=0.05):
    """``tau`` for each weighting scheme and calibration rank."""
    p0 = np.asarray(values, dtype=float)
    rows = []
    for spec in scheme_specs(alpha):
        w = np.asarray(build_weights(spec, p0.shape[0], L))
        for r in ranks:
            rows.append((scheme_label(spec), int(r), calibrate_tau(p0, L, r, w), unstructured_tau(p0, L, r)))
    return ResultTable(
        "calibrate", ("scheme", "rank", "tau", "unstructured_tau"), rows, {"L": L, "n": int(p0.shape[0]), "alpha": alpha}
    )


def scheme_comparison(values, n=72, m=6, L=24, alpha=0.05, ranks=(3, 6, 12), config=SolverConfig()):
    """Forecast the held-out values under each scheme and calibration rank."""
    values = np.asarray(values, dtype=float)
    truth = values[n:n + m]
    rows = []
    for spec in scheme_specs(alpha):
        for r in ranks:
            out = forecast_series(values[:n + m], m, L, spec, rank=r, holdout=True, config=config)
            label = scheme_label(spec)
            rows.append(
                (label, int(r), out.tau, *map(float, out.forecast), out.rmse, out.status.value,
                 REFERENCE_RMSE.get((label, int(r))))
            )
    cols = ("scheme", "rank", "tau", *(f"f{i}" for i in range(1, m + 1)), "rmse", "status", "reference_rmse")
    meta = {"n": n, "m": m, "L": L, "alpha": alpha, "truth": [float(t) for t in truth]}
    return ResultTable("scheme-comparison", cols, rows, meta)


def alpha_tau_surface(values, n=72, m=6, L=24, alphas=SURFACE_ALPHAS, taus=SURFACE_TAUS, config=SolverConfig()):
    """Forecast error over a grid of exponential rates and budgets.

    The exponential weights enter the ball constraint of the plain-structure
    problem directly.
    """
    values = np.asarray(values, dtype=float)
    rows = []
    for a in alphas:
        spec = Exponential(float(a))
        for t in taus:
            out = forecast_series(values[:n + m], m, L, spec, tau=float(t), holdout=True, config=config)
            rows.append((float(a), float(t), out.rmse, math.log(out.rmse), out.status.value))
    best = min(rows, key=lambda r: r[2])
    meta = {
        "n": n, "m": m, "L": L,
        "argmin": {"alpha": best[0], "tau": best[1], "rmse": best[2]},
        "reference_optimum": SURFACE_OPTIMUM,
    }
    return ResultTable("alpha-tau", ("alpha", "tau", "rmse", "log_rmse", "status"), rows, meta)


# -- phase diagrams --------------------------------------------------------


def _phase_cell(args):
    rho, m, L, K, config = args
    shape = HankelShape(L, K, L + K - 1 - m, m)
    series = float(rho) ** np.arange(1, L + K, dtype=float)
    probe = success_probe(series, shape, config, rank=1)
    return probe


def sweep_phase(rhos=PHASE_RHOS, ms=PHASE_MS, L=13, K=13, config=PROBE_CONFIG, jobs=None):
    """Rank-one success diagram for ``p_k = rho**k`` with the recovery-bound overlay."""
    cells = [(float(r), int(m), L, K, config) for r in rhos for m in ms]
    probes = _map(_phase_cell, cells, jobs)
    bounds = {float(r): max_missing(float(r), L, K) for r in rhos}
    rows = []
    for (rho, m, *_), probe in zip(cells, probes):
        rows.append(
            (rho, m, bool(probe.success), probe.distance, bool(probe.iteration_limited), m <= bounds[rho].max_m)
        )
    meta = {
        "L": L, "K": K, "signal": "p_k = rho**k",
        "bound_overlay": [{"rho": r, "bound": b.bound, "max_m": b.max_m} for r, b in bounds.items()],
        "solver": config_dict(config),
    }
    return ResultTable(
        "sweep-phase", ("rho", "m", "success", "distance", "iteration_limited", "in_bound"), rows, meta
    )


def rank_r_signal(rho, omegas, N, exponent="k"):
    """Real cosine realisation of a sum of ``r`` complex exponentials.

    ``exponent="k"`` gives ``sum_j rho**k cos(omega_j k)`` (common modulus);
    ``exponent="j"`` gives ``sum_j rho**j cos(omega_j k)`` (amplitudes ``rho**j``).
    """
    k = np.arange(1, N + 1, dtype=float)
    out = np.zeros(N)
    for j, om in enumerate(omegas, start=1):
        amp = rho ** k if exponent == "k" else rho ** j
        out += amp * np.cos(om * k)
    return out


def _rank_cell(args):
    rho, m, r, omegas, L, K, config, exponent = args
    shape = HankelShape(L, K, L + K - 1 - m, m)
    series = rank_r_signal(rho, omegas, L + K - 1, exponent)
    return success_probe(series, shape, config, rank=2 * r)


def sweep_rank(
    rhos=PHASE_RHOS, ms=PHASE_MS, ranks=(1, 2, 3), realizations=20, seed=0, L=13, K=13,
    config=PROBE_CONFIG, exponent="k", jobs=None,
):
    """Empirical success probability over random frequencies (rank ``2r`` real signals)."""
    omegas = {
        (r, i): cell_rng(seed, r, i).uniform(0.0, 2 * np.pi, size=r) for r in ranks for i in range(realizations)
    }
    cells = []
    for r in ranks:
        for rho in rhos:
            for m in ms:
                if 2 * r > min(L, K, (L + K - 1 - m) / 2):
                    continue
                for i in range(realizations):
                    cells.append((float(rho), int(m), int(r), omegas[(r, i)], L, K, config, exponent))
    probes = _map(_rank_cell, cells, jobs)
    agg = {}
    for cell, probe in zip(cells, probes):
        key = cell[2], cell[0], cell[1]
        s, lim = agg.get(key, (0, 0))
        agg[key] = (s + int(probe.success), lim + int(probe.iteration_limited))
    rows = [(r, rho, m, s, lim, realizations, s / realizations) for (r, rho, m), (s, lim) in agg.items()]
    meta = {
        "L": L, "K": K, "seed": seed, "rng": RNG_ALGORITHM, "realizations": realizations,
        "signal": "sum_j rho**%s cos(omega_j k), omega_j ~ U[0, 2pi)" % exponent,
        "rank_axis": "r complex terms realised as real rank 2r",
        "solver": config_dict(config),
    }
    return ResultTable(
        "sweep-rank", ("r", "rho", "m", "successes", "iteration_limited", "M", "probability"), rows, meta
    )


# -- simulation study ------------------------------------------------------


def simulation_signal(case, N=100):
    i = np.arange(1, N + 1, dtype=float)
    base = np.cos(2 * np.pi * i / 10)
    if case == 1:
        return base
    if case == 2:
        return np.exp(0.02 * i) * base
    raise PreconditionError(f"case must be 1 or 2, got {case}")


def _simulate_rep(args):
    case, rep, seed, sigma, N, L, ms, specs, rank, config = args
    s = simulation_signal(case, N)
    p = s + sigma * cell_rng(seed, case, rep).standard_normal(N)
    out = {}
    for m in ms:
        n = N - m
        shape = HankelShape.from_window(n, m, L)
        p0 = p[:n]
        for spec in specs:
            w = np.asarray(build_weights(spec, n, L))
            tau = calibrate_tau(p0, L, rank, w)
            mode = Exact() if tau == 0.0 else Ball(tau)
            res = solve(ProblemSpec(p0=p0, shape=shape, weights=w, mode=mode, rank_hint=rank), config)
            out[(scheme_label(spec), m)] = (rmse(res.forecast, p[n:]), res.status is Status.ITERATION_LIMIT)
    return out


def simulate(
    case=2, ms=range(1, 16), reps=50, seed=0, sigma=0.1, N=100, L=30, alpha=0.05, specs=None,
    rank=2, config=SolverConfig(), jobs=None,
):
    """Mean forecast error against ``m`` for noisy cosine signals.

    Each repetition draws one noisy series and reuses it for every ``m`` and
    scheme, so the comparison between schemes is paired.
    """
    specs = tuple(specs) if specs is not None else scheme_specs(alpha)
    ms = tuple(int(m) for m in ms)
    jobs_args = [(case, rep, seed, sigma, N, L, ms, specs, rank, config) for rep in range(reps)]
    results = _map(_simulate_rep, jobs_args, jobs)
    rows = []
    for spec in specs:
        label = scheme_label(spec)
        for m in ms:
            vals = [res[(label, m)][0] for res in results]
            lim = sum(res[(label, m)][1] for res in results)
            rows.append((label, m, float(np.mean(vals)), float(np.std(vals)), reps, lim))
    meta = {
        "case": case, "N": N, "L": L, "sigma": sigma, "alpha": alpha, "calibration_rank": rank,
        "seed": seed, "rng": RNG_ALGORITHM, "target": "noisy held-out observations",
        "solver": config_dict(config),
    }
    return ResultTable("simulate", ("scheme", "m", "mean_rmse", "std_rmse", "reps", "iteration_limited"), rows, meta)


# -- theory ----------------------------------------------------------------


def bounds_table(L=13, K=13, rhos=PHASE_RHOS, ms=None):
    """``C(rho, L, K, m)`` on a grid with the largest guaranteed ``m`` per ``rho``."""
    ms = range(min(L, K)) if ms is None else ms
    rows = []
    overlay = []
    for r in rhos:
        b = max_missing(float(r), L, K)
        overlay.append({"rho": float(r), "bound": b.bound, "max_m": b.max_m})
        for m in ms:
            c = c_rho(float(r), L, K, int(m))
            rows.append((float(r), int(m), c, c < 1.0))
    return ResultTable("bounds", ("rho", "m", "c_rho", "guaranteed"), rows, {"L": L, "K": K, "max_missing": overlay})


def certificate_table(candidate, shape: HankelShape):
    rep = certificate_check(candidate, shape)
    rows = [(rep.verdict, rep.spectral_norm, rep.constraint_residual, rep.rank, rep.method)]
    meta = {
        "L": shape.L, "K": shape.K, "n": shape.n, "m": shape.m,
        "frobenius_certificate_norm": rep.frobenius_certificate_norm,
        "hankel_certificate_norm": rep.hankel_certificate_norm,
    }
    return ResultTable("certificate", ("verdict", "spectral_norm", "constraint_residual", "rank", "method"), rows, meta)

