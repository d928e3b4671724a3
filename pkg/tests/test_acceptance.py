"""Acceptance gate for the solver.

Each test exercises one acceptance criterion at its stated tolerance and
prints a single PASS line on success (run with ``pytest -s`` to see the
lines; a failing criterion fails its test).  The frozen reference errors
describe the manufactured cubic problem under balanced mesh coupling at
sigma = 1 with levels N in {20, 40, 80}.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np
import pytest

from fracheat.cli import StudyConfig, run_caputo_order, run_convergence
from fracheat.core import Grid, Problem, SchemeParams, face_coefficients
from fracheat.fractional import (
    caputo_oracle,
    discrete_caputo,
    energy_identity_remainders,
)
from fracheat.manufactured import build_manufactured, verify_compatibility
from fracheat.norms import energy_norm, sigma_threshold
from fracheat.prng import uniform_symmetric
from fracheat.stepper import StepSystem, march, solve_bordered, solve_dense_oracle

ERROR_TOL = 0.05      # relative tolerance on reference error norms
ORDER_TOL = 0.05      # absolute tolerance on observed convergence orders


@dataclass(frozen=True)
class ReferenceStudy:
    key: str
    gamma: float
    alpha: float
    beta: float
    err_full: tuple[float, ...]
    co_full: tuple[float, ...]
    err_max: tuple[float, ...]
    co_max: tuple[float, ...]
    # Indices of err_max entries not compared (inconsistent source value).
    max_skip: tuple[int, ...] = field(default=())


PRIMARY_STUDY = ReferenceStudy(
    "g0.5-a3-b2", 0.5, 3.0, 2.0,
    (3.03169e-2, 7.61510e-3, 1.90780e-3), (1.993, 1.997),
    (5.50676e-2, 1.38318e-2, 3.46463e-3), (1.993, 1.997))

OTHER_STUDIES = (
    ReferenceStudy("g0.5-a2-b5", 0.5, 2.0, 5.0,
                   (6.35368e-3, 1.56940e-3, 3.90276e-4), (2.017, 2.008),
                   (7.31523e-3, 1.80908e-3, 4.49971e-4), (2.016, 2.007)),
    ReferenceStudy("g0.5-a0.7-b0.1", 0.5, 0.7, 0.1,
                   (2.19544e-2, 5.50422e-3, 1.37776e-3), (1.996, 1.998),
                   (2.67764e-2, 6.71201e-3, 1.67992e-3), (1.996, 1.998)),
    ReferenceStudy("g0.2-a1.1-b1.1", 0.2, 1.1, 1.1,
                   (3.85126e-2, 9.65615e-3, 2.42041e-3), (1.995, 1.996),
                   (4.38852e-2, 1.10031e-2, 2.75763e-3), (1.996, 1.996)),
    # The middle max-norm reference value is exempt: it is inconsistent
    # with its neighbours (the error ratio implies 1e-3, the source prints
    # 1e-2), a suspected transcription slip.
    ReferenceStudy("g0.2-a0.9-b0.9", 0.2, 0.9, 0.9,
                   (3.26779e-2, 8.19304e-3, 2.05366e-3), (1.996, 1.996),
                   (3.66507e-2, 9.18862e-2, 2.30287e-3), (1.996, 1.996),
                   max_skip=(1,)),
    ReferenceStudy("g0.8-a200-b100", 0.8, 200.0, 100.0,
                   (1.27484e0, 3.18346e-1, 7.95685e-2), (2.002, 2.000),
                   (2.14188e0, 5.35201e-1, 1.33790e-1), (2.001, 2.000)),
    ReferenceStudy("g0.8-a100-b200", 0.8, 100.0, 200.0,
                   (6.49129e-1, 1.62100e-1, 4.05159e-2), (2.002, 2.000),
                   (1.09160e0, 2.72769e-1, 6.81875e-2), (2.001, 2.000)),
)

UNSTABLE_STUDY = dict(gamma=0.4, alpha=0.1, beta=10.0)

ALL_CONFIGS = [(s.alpha, s.beta, s.gamma)
               for s in (PRIMARY_STUDY, *OTHER_STUDIES)]
ALL_CONFIGS.append((UNSTABLE_STUDY["alpha"], UNSTABLE_STUDY["beta"],
                    UNSTABLE_STUDY["gamma"]))


@pytest.fixture(scope="module")
def studies():
    """Run every reference study once (residual checking on)."""
    out = {}
    for ref in (PRIMARY_STUDY, *OTHER_STUDIES):
        config = StudyConfig(gamma=ref.gamma, alpha=ref.alpha, beta=ref.beta,
                             check_residuals=True)
        out[ref.key] = run_convergence(config)
    out["unstable"] = run_convergence(StudyConfig(**UNSTABLE_STUDY))
    return out


def _observed_orders(errs, hs):
    return [math.log(errs[i - 1] / errs[i]) / math.log(hs[i - 1] / hs[i])
            for i in range(1, len(errs))]


def _check_study(ref, report):
    hs = [row.h for row in report.rows]
    got_full = [row.err_full for row in report.rows]
    got_max = [row.err_max for row in report.rows]
    for i, (got, want) in enumerate(zip(got_full, ref.err_full)):
        assert got == pytest.approx(want, rel=ERROR_TOL), \
            f"{ref.key}: err_full[{i}]"
    for i, (got, want) in enumerate(zip(got_max, ref.err_max)):
        if i in ref.max_skip:
            continue
        assert got == pytest.approx(want, rel=ERROR_TOL), \
            f"{ref.key}: err_max[{i}]"
    for got, want in zip(_observed_orders(got_full, hs), ref.co_full):
        assert got == pytest.approx(want, abs=ORDER_TOL), f"{ref.key}: co_full"
    for got, want in zip(_observed_orders(got_max, hs), ref.co_max):
        assert got == pytest.approx(want, abs=ORDER_TOL), f"{ref.key}: co_max"


def test_criterion_1_primary_convergence_study(studies):
    report = studies[PRIMARY_STUDY.key]
    _check_study(PRIMARY_STUDY, report)
    assert report.wall_time < 30.0
    print(f"\ncriterion-1 convergence study {PRIMARY_STUDY.key} "
          f"({report.wall_time:.1f}s): PASS")


def test_criterion_2_remaining_convergence_studies(studies):
    notes = []
    for ref in OTHER_STUDIES:
        _check_study(ref, studies[ref.key])
        if ref.max_skip:
            notes.append(f"{ref.key}: max-norm entry {ref.max_skip} skipped "
                         f"(reference value inconsistent with neighbours, "
                         f"suspected transcription error)")
    print("\ncriterion-2 remaining convergence studies: PASS")
    for note in notes:
        print(f"  note: {note}")


def test_criterion_3_instability_demonstration(studies):
    rows = studies["unstable"].rows
    assert math.isfinite(rows[0].err_full) and rows[0].err_full < 1.0
    assert rows[1].err_full >= 1e30
    assert rows[2].err_full >= 1e100 or rows[2].blew_up
    print("\ncriterion-3 instability at mixed boundary parameters: PASS")


def test_criterion_4_memory_operator_truncation_order():
    start = time.perf_counter()
    taus = [0.05, 0.025, 0.0125, 0.00625, 0.003125]
    report = run_caputo_order([0.3, 0.5, 0.9], taus, "cubic")
    for gamma in (0.3, 0.5, 0.9):
        assert report.fitted_order(gamma) == pytest.approx(2.0 - gamma,
                                                           abs=0.1)
    # Oracle accuracy against closed-form monomial derivatives.
    for gamma in (0.3, 0.5, 0.9):
        for m in (1, 2, 3):
            for t in (0.4, 1.0):
                want = (math.gamma(m + 1) / math.gamma(m + 1 - gamma)
                        * t ** (m - gamma))
                got = caputo_oracle(lambda s, m=m: s**m,
                                    lambda s, m=m: m * s ** (m - 1), t, gamma)
                assert abs(got - want) <= 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\ncriterion-4 memory-operator order ({elapsed:.1f}s): PASS")


def test_criterion_5_energy_identities_randomized():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        m = int(rng.integers(2, 51))
        nu = rng.uniform(0.05, 0.95)
        tau = 10 ** rng.uniform(-3, 0)
        y = rng.uniform(-1, 1, m)
        d = discrete_caputo(y, nu, tau)
        d2 = discrete_caputo(y * y, nu, tau)
        g2 = math.gamma(2 - nu)
        two = 2.0 ** (1 - nu)
        j1, j2 = energy_identity_remainders(y, nu, tau)
        quad1 = tau**nu * g2 / 2.0 * d * d
        quad2 = tau**nu * g2 / (2.0 * (2.0 - two)) * d * d
        r1 = y[-1] * d - 0.5 * d2 - quad1 - j1
        r2 = y[-2] * d - 0.5 * d2 + quad2 - j2
        s1 = max(abs(y[-1] * d), abs(0.5 * d2), abs(quad1), abs(j1), 1.0)
        s2 = max(abs(y[-2] * d), abs(0.5 * d2), abs(quad2), abs(j2), 1.0)
        assert abs(r1) / s1 <= 1e-12
        assert abs(r2) / s2 <= 1e-12
        assert j1 >= -1e-13 and j2 >= -1e-13
    print("\ncriterion-5 energy identities on 1000 random series: PASS")


def _random_sign_consistent(rng, direct):
    sign = 1.0 if rng.uniform() < 0.5 else -1.0
    if direct:
        alpha = sign * (1.0 + rng.uniform(0.0, 3.0))
        beta = alpha * (1.0 + rng.uniform(0.0, 2.0))
    else:
        alpha = sign * rng.uniform(0.3, 1.0)
        beta = alpha * rng.uniform(0.1, 1.0)
    return alpha, beta


def test_criterion_6_energy_decay_randomized():
    rng = np.random.default_rng(77)
    for trial in range(50):
        alpha, beta = _random_sign_consistent(rng, direct=trial % 2 == 0)
        gamma = rng.uniform(0.1, 0.9)
        N = int(rng.integers(8, 25))
        Nt = int(rng.integers(30, 81))
        problem = Problem(gamma=gamma, alpha=alpha, beta=beta,
                          k=lambda x: np.exp(x),
                          f=lambda x, t: np.zeros_like(
                              np.asarray(x, dtype=float)),
                          mu=lambda t: 0.0,
                          u0=lambda x: np.zeros_like(
                              np.asarray(x, dtype=float)),
                          c1=1.0, c2=math.e)
        grid = Grid(N=N, Nt=Nt)
        face = face_coefficients(problem, grid)
        threshold = sigma_threshold(gamma, grid.h, grid.tau, problem.c2)
        u0 = uniform_symmetric(4000 + trial, N + 1)
        u0[0] = alpha * u0[-1]
        for sigma in (1.0, min(max(threshold, 0.0), 1.0)):
            outcome = march(problem, grid, SchemeParams(sigma), y0=u0)
            assert outcome.blow_up is None
            norms = [energy_norm(outcome.history[n], problem, grid, face)
                     for n in range(len(outcome.history))]
            bound = norms[0] * (1.0 + 1e-12)
            assert all(v <= bound for v in norms), (
                f"decay violated: alpha={alpha}, beta={beta}, gamma={gamma}, "
                f"sigma={sigma}")
    # Classical-limit identity of the threshold formula.
    for h, tau, c2 in ((0.05, 0.01, 2.0), (0.02, 0.001, math.e)):
        got = sigma_threshold(1.0, h, tau, c2)
        assert abs(got - (0.5 - h * h / (4.0 * c2 * tau))) <= 1e-10
    print("\ncriterion-6 energy decay on 50 random homogeneous runs: PASS")


def test_criterion_7_solver_correctness(studies):
    rng = np.random.default_rng(31337)
    for _ in range(100):
        N = int(rng.choice([4, 8, 16]))
        lower = np.zeros(N - 1)
        lower[1:] = rng.uniform(-1.0, 0.0, N - 2)
        system = StepSystem(
            lower=lower,
            diag=rng.uniform(2.5, 4.0, N - 1),
            upper=rng.uniform(-1.0, 0.0, N - 1),
            corner=rng.uniform(-1.0, 0.0),
            last_row=(rng.uniform(-1.0, 0.0), rng.uniform(-1.0, 0.0),
                      rng.uniform(2.5, 4.0)),
            rhs=rng.uniform(-1.0, 1.0, N),
        )
        fast = solve_bordered(system)
        dense = solve_dense_oracle(system)
        scale = max(float(np.max(np.abs(dense))), 1e-30)
        assert np.max(np.abs(fast - dense)) / scale <= 1e-11
    worst = 0.0
    for ref in (PRIMARY_STUDY, *OTHER_STUDIES):
        for row in studies[ref.key].rows:
            assert row.max_residual is not None
            assert row.max_residual <= 1e-11
            worst = max(worst, row.max_residual)
    print(f"\ncriterion-7 solver oracle match and step residuals "
          f"(worst {worst:.1e}): PASS")


def test_criterion_8_manufactured_compatibility():
    for alpha, beta, gamma in ALL_CONFIGS:
        problem = build_manufactured(alpha, beta, gamma)
        report = verify_compatibility(problem, Grid(N=20, Nt=10))
        assert report.max_pde_residual <= 1e-8
        assert report.max_value_residual <= 1e-12
        assert report.max_flux_residual <= 1e-12
    print(f"\ncriterion-8 manufactured compatibility for "
          f"{len(ALL_CONFIGS)} configurations: PASS")
