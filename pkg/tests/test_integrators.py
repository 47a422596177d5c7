"""One-step maps, the evolution loop, blow-up detection, mean shifting."""

import numpy as np
import pytest

from kdvlri.integrators import (
    BlowUpError,
    SchemeConfigError,
    SchemeKind,
    SolverRun,
    Trajectory,
    elri1_step,
    elri2_step,
    evolve,
    lri1_step,
    solve_with_mean_shift,
    step_function,
)
from kdvlri.rough_data import RoughSpec, generate_rough
from kdvlri.spectral import (
    Field,
    Grid,
    conjugate_symmetry_defect,
    exp_airy,
    inv_dx,
    mean_value,
    sobolev_norm,
)

ALL_STEPS = [lri1_step, elri1_step, elri2_step]


def l2_diff(a, b):
    return sobolev_norm(Field.from_spectrum(a.grid, a.spectrum - b.spectrum), 0.0)


def rough(n=64, theta=2.0, seed=4):
    return generate_rough(RoughSpec(n, theta, seed))


# ---------------------------------------------------------------------------
# one-step maps


def test_step_function_dispatch():
    assert step_function(SchemeKind.LRI1) is lri1_step
    assert step_function(SchemeKind.ELRI1) is elri1_step
    assert step_function(SchemeKind.ELRI2) is elri2_step
    with pytest.raises(SchemeConfigError, match="reserved"):
        step_function(SchemeKind.LRI2)


def test_zero_field_is_fixed_point():
    g = Grid(32)
    zero = Field.from_values(g, np.zeros(g.n))
    for step in ALL_STEPS:
        out = step(zero, 0.25)
        assert np.max(np.abs(out.values)) == 0.0


def test_tau_zero_is_exact_identity():
    # every scheme collapses to the identity at tau = 0, bitwise exact:
    # the cancelling term pairs are assembled as single differences
    u = rough(n=64, theta=2.0, seed=11)
    for step in ALL_STEPS:
        out = step(u, 0.0)
        assert np.max(np.abs(out.values - u.values)) == 0.0
        assert np.max(np.abs(out.spectrum - u.spectrum)) == 0.0


def test_lri1_cosine_closed_form():
    # LRI1(cos, tau) = cos(x+tau) + cos(2x+8tau)/12 - cos(2x+2tau)/12,
    # worked out by hand from the three-term update applied to one mode
    g = Grid(64)
    for tau in (0.05, 0.3, 1.0):
        out = lri1_step(Field.from_values(g, np.cos(g.x)), tau)
        expected = (
            np.cos(g.x + tau)
            + np.cos(2 * g.x + 8 * tau) / 12.0
            - np.cos(2 * g.x + 2 * tau) / 12.0
        )
        assert np.max(np.abs(out.values - expected)) < 1e-14


def test_elri2_is_elri1_plus_correction():
    u = rough(n=64, theta=2.0, seed=2)
    g = u.grid
    tau = 0.07
    a = elri1_step(u, tau)
    b = elri2_step(u, tau)
    eu = exp_airy(u, tau)
    u3 = Field.from_values(g, u.values**3)
    eu3 = Field.from_values(g, eu.values**3)
    corr = (tau / 36.0) * (
        exp_airy(inv_dx(u3), tau).spectrum - inv_dx(eu3).spectrum
    )
    assert np.max(np.abs(b.spectrum - a.spectrum - corr)) < 1e-15


def test_steps_preserve_mean_and_realness():
    u = rough(n=128, theta=2.0, seed=8)
    for step in ALL_STEPS:
        out = step(u, 0.1)
        assert abs(mean_value(out)) < 1e-13
        assert conjugate_symmetry_defect(out) < 1e-13


def test_public_steps_reject_nonzero_mean():
    g = Grid(32)
    u = Field.from_values(g, 0.5 + np.cos(g.x))
    for step in ALL_STEPS:
        with pytest.raises(SchemeConfigError, match="zero-mean"):
            step(u, 0.1)


def test_dealias_keyword_truncates_output():
    u = rough(n=32, theta=2.0, seed=6)
    out = elri1_step(u, 0.1, dealias=True)
    k = np.abs(out.grid.wavenumbers)
    assert np.all(out.spectrum[3 * k >= out.grid.n] == 0.0)


# ---------------------------------------------------------------------------
# solver configuration


def test_solver_run_validation():
    u = rough(n=32)
    with pytest.raises(SchemeConfigError, match="tau must be positive"):
        SolverRun(SchemeKind.ELRI1, -0.1, 1.0, u)
    with pytest.raises(SchemeConfigError, match="t_final must be positive"):
        SolverRun(SchemeKind.ELRI1, 0.1, 0.0, u)
    with pytest.raises(SchemeConfigError, match="not a positive integer"):
        SolverRun(SchemeKind.ELRI1, 0.3, 1.0, u)
    with pytest.raises(SchemeConfigError, match="record_every"):
        SolverRun(SchemeKind.ELRI1, 0.1, 1.0, u, record_every=-1)
    with pytest.raises(SchemeConfigError, match="reserved"):
        SolverRun(SchemeKind.LRI2, 0.1, 1.0, u)
    g = Grid(32)
    shifted = Field.from_values(g, 1.0 + np.cos(g.x))
    with pytest.raises(SchemeConfigError, match="zero-mean"):
        SolverRun(SchemeKind.ELRI1, 0.1, 1.0, shifted)
    # same data is fine when the mean shift is requested
    SolverRun(SchemeKind.ELRI1, 0.1, 1.0, shifted, mean_shift=True)


def test_solver_run_step_count():
    u = rough(n=32)
    assert SolverRun(SchemeKind.ELRI1, 0.125, 1.0, u).n_steps == 8
    # ratio off by < 1e-9 still rounds to an integer count
    assert SolverRun(SchemeKind.ELRI1, 0.1, 1.0, u).n_steps == 10


# ---------------------------------------------------------------------------
# evolution loop


def test_evolve_single_step_matches_public_step():
    u = rough(n=64, theta=2.0, seed=13)
    tau = 0.05
    for kind, step in zip(
        (SchemeKind.LRI1, SchemeKind.ELRI1, SchemeKind.ELRI2), ALL_STEPS
    ):
        traj = evolve(SolverRun(kind, tau, tau, u))
        direct = step(u, tau)
        assert traj.n_steps == 1
        assert np.array_equal(traj.final.values, direct.values)


def test_evolve_recording_pattern():
    u = rough(n=32)
    tau = 0.125
    run = SolverRun(SchemeKind.ELRI1, tau, 1.0, u, record_every=3)
    traj = evolve(run)
    assert [t for t, _ in traj] == [0.0, 3 * tau, 6 * tau, 8 * tau]
    assert len(traj) == 4
    assert traj[0][1] is u
    # record_every = 0: endpoints only, and the final step is never duplicated
    assert len(evolve(SolverRun(SchemeKind.ELRI1, tau, 1.0, u))) == 2
    assert len(evolve(SolverRun(SchemeKind.ELRI1, tau, 1.0, u, record_every=4))) == 3


def test_evolve_mean_drift_stays_tiny():
    g = Grid(64)
    u = Field.from_values(g, np.cos(g.x))
    traj = evolve(SolverRun(SchemeKind.ELRI2, 0.01, 0.5, u))
    assert traj.max_mean_drift <= 1e-12
    assert abs(mean_value(traj.final)) <= 1e-12


def test_blow_up_raises_with_step_index():
    # large-amplitude rough data at a huge step diverges fast; the loop must
    # report the step where values stop being finite instead of warning or
    # tripping the mean gate on roundoff
    base = generate_rough(RoughSpec(64, 1.0, seed=3))
    u = Field.from_values(base.grid, 50.0 * base.values)
    run = SolverRun(SchemeKind.ELRI1, 0.5, 5.0, u)
    with pytest.raises(BlowUpError) as info:
        evolve(run)
    assert info.value.step == 6
    assert "step 6" in str(info.value)


# ---------------------------------------------------------------------------
# mean shift


def test_mean_shift_with_zero_mean_matches_plain_evolve():
    u = rough(n=64, theta=2.0, seed=21)
    plain = evolve(SolverRun(SchemeKind.ELRI2, 0.05, 0.5, u))
    shifted = solve_with_mean_shift(
        SolverRun(SchemeKind.ELRI2, 0.05, 0.5, u, mean_shift=True)
    )
    assert l2_diff(plain.final, shifted.final) < 1e-13


def test_mean_shift_constant_state_is_steady():
    g = Grid(32)
    c = 1.5
    u = Field.from_values(g, np.full(g.n, c))
    traj = evolve(SolverRun(SchemeKind.ELRI2, 0.1, 1.0, u, mean_shift=True))
    assert np.max(np.abs(traj.final.values - c)) < 1e-13


def test_mean_shift_self_convergence_is_second_order():
    # ELRI2 on 0.4 + cos(x): successive refinement against a tau = 2^-12
    # reference reproduces the expected slope (measured 2.076 here)
    g = Grid(64)
    u0 = Field.from_values(g, 0.4 + np.cos(g.x))

    def final(tau):
        run = SolverRun(SchemeKind.ELRI2, tau, 1.0, u0, mean_shift=True)
        return solve_with_mean_shift(run).final

    ref = final(2.0**-12)
    taus = [2.0**-4, 2.0**-5, 2.0**-6, 2.0**-7, 2.0**-8]
    errs = [l2_diff(final(t), ref) for t in taus]
    slope = np.polyfit(np.log(taus), np.log(errs), 1)[0]
    assert 1.7 < slope < 2.4


def test_trajectory_final_of_empty_is_error():
    with pytest.raises(IndexError):
        Trajectory().final
