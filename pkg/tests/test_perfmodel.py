import numpy as np
import pytest

from pitwave.perfmodel import SpeedupInputs, speedup_bounds, speedup_cfl_estimate, speedup_estimate


class TestSpeedupEstimate:
    def test_degenerate_no_iteration_sweep(self):
        # G as expensive as F, one fine step per interval, no corrections
        inp = SpeedupInputs(n_p=4, n_it=0, n_c=4, n_f=1, tau_c=1.0, tau_f=1.0)
        assert speedup_estimate(inp) == pytest.approx(1.0)

    def test_many_processor_limit(self):
        base = dict(n_it=2, n_c=10, n_f=20, tau_c=1.165, tau_f=1.0, tau_qr=0.0)
        limit = base["n_f"] * base["tau_f"] / ((1 + base["n_it"]) * base["tau_c"])
        s = speedup_estimate(SpeedupInputs(n_p=10**6, **base))
        assert s == pytest.approx(limit, rel=1e-3)

    def test_rotating_baseline_configuration(self):
        # N_p=6, N_it=2, C_f=0.2, C_c=4.0 -> N_f=20; cost ratio 1.165
        inp = SpeedupInputs(n_p=6, n_it=2, n_c=6, n_f=20, tau_c=1.165, tau_f=1.0)
        assert speedup_estimate(inp) == pytest.approx(1.97, abs=0.01)

    def test_monotonicity_sweeps(self, rng):
        for _ in range(200):
            n_p = int(rng.integers(1, 12))
            n_it = int(rng.integers(1, 6))
            n_f = int(rng.integers(2, 40))
            tau_c = float(rng.uniform(0.1, 3.0))
            tau_qr = float(rng.uniform(0.0, 2.0))
            base = SpeedupInputs(n_p=n_p, n_it=n_it, n_c=n_p, n_f=n_f,
                                 tau_c=tau_c, tau_f=1.0, tau_qr=tau_qr)
            s = speedup_estimate(base)
            assert speedup_estimate(SpeedupInputs(n_p=n_p, n_it=n_it + 1, n_c=n_p, n_f=n_f,
                                                  tau_c=tau_c, tau_f=1.0, tau_qr=tau_qr)) < s
            assert speedup_estimate(SpeedupInputs(n_p=n_p, n_it=n_it, n_c=n_p, n_f=n_f,
                                                  tau_c=tau_c * 1.5, tau_f=1.0, tau_qr=tau_qr)) < s
            assert speedup_estimate(SpeedupInputs(n_p=n_p, n_it=n_it, n_c=n_p, n_f=n_f,
                                                  tau_c=tau_c, tau_f=1.0, tau_qr=tau_qr + 0.5)) < s
            assert speedup_estimate(SpeedupInputs(n_p=n_p + 1, n_it=n_it, n_c=n_p, n_f=n_f,
                                                  tau_c=tau_c, tau_f=1.0, tau_qr=tau_qr)) > s

    def test_invalid_inputs(self):
        with pytest.raises(ValueError, match="positive"):
            SpeedupInputs(n_p=0, n_it=1, n_c=4, n_f=10, tau_c=1.0, tau_f=1.0)
        with pytest.raises(ValueError, match="costs"):
            SpeedupInputs(n_p=4, n_it=1, n_c=4, n_f=10, tau_c=0.0, tau_f=1.0)


class TestSpeedupBounds:
    def test_iteration_bound_values(self):
        inp = SpeedupInputs(n_p=8, n_it=2, n_c=8, n_f=20, tau_c=1.0, tau_f=1.0)
        assert speedup_bounds(inp)[0] == 4.0
        inp = SpeedupInputs(n_p=6, n_it=5, n_c=6, n_f=20, tau_c=1.0, tau_f=1.0)
        assert speedup_bounds(inp)[0] == pytest.approx(1.2)

    def test_estimate_below_all_bounds(self, rng):
        for _ in range(1000):
            inp = SpeedupInputs(
                n_p=int(rng.integers(1, 16)), n_it=int(rng.integers(1, 8)),
                n_c=int(rng.integers(1, 16)), n_f=int(rng.integers(1, 64)),
                tau_c=float(rng.uniform(0.05, 5.0)), tau_f=float(rng.uniform(0.05, 5.0)),
                tau_qr=float(rng.uniform(0.0, 3.0)))
            s = speedup_estimate(inp)
            assert s <= min(speedup_bounds(inp)) * (1 + 1e-12)


class TestCflEstimate:
    def test_strong_coarsening_values(self):
        s = speedup_cfl_estimate(0.2, 4.0, 1.165, 6, 2)
        assert s == pytest.approx(1.0 / (3 * 0.05 * 1.165 + 1.0 / 3.0), rel=1e-12)
        assert 1.85 <= s <= 2.10

    def test_mild_coarsening_values(self):
        s = speedup_cfl_estimate(0.2, 2.0, 1.165, 6, 1)
        assert s == pytest.approx(1.0 / (2 * 0.1 * 1.165 + 1.0 / 6.0), rel=1e-12)
        assert s == pytest.approx(2.50, abs=0.01)

    def test_coarse_cfl_limit_recovers_iteration_bound(self):
        s = speedup_cfl_estimate(0.2, 1e9, 1.165, 6, 2)
        assert s == pytest.approx(6 / 2, rel=1e-6)

    def test_identity_with_full_model(self, rng):
        for _ in range(100):
            c_f = float(rng.uniform(0.05, 0.5))
            n_f = int(rng.integers(2, 40))
            c_c = c_f * n_f
            n_p = int(rng.integers(1, 12))
            n_it = int(rng.integers(1, 6))
            ratio = float(rng.uniform(0.2, 3.0))
            n_c = n_p
            cfl_s = speedup_cfl_estimate(c_f, c_c, ratio, n_p, n_it)
            full_s = speedup_estimate(SpeedupInputs(n_p=n_p, n_it=n_it, n_c=n_c, n_f=n_f,
                                                    tau_c=ratio, tau_f=1.0, tau_qr=0.0))
            assert cfl_s == pytest.approx(full_s, rel=1e-12)

    def test_printed_form_flag(self):
        got = speedup_cfl_estimate(0.2, 4.0, 1.165, 6, 2, printed_form=True)
        assert got == pytest.approx(1.0 / (3 * 0.05 * 1.165 + 3.0), rel=1e-12)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError, match="positive"):
            speedup_cfl_estimate(0.0, 4.0, 1.165, 6, 2)
