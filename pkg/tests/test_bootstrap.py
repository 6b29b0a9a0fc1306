import math

import numpy as np
import pytest

from mdhtest import (
    MULTIPLIERS,
    BootstrapConfig,
    derive_seed,
    draw_multipliers,
    substream,
)


class TestBootstrapConfig:
    def test_defaults(self):
        cfg = BootstrapConfig()
        assert cfg.n_boot == 500
        assert cfg.multiplier == "normal"
        assert cfg.seed == 0

    def test_rejects_nonpositive_n_boot(self):
        for bad in (0, -3):
            with pytest.raises(ValueError, match="n_boot"):
                BootstrapConfig(n_boot=bad)

    def test_rejects_unknown_multiplier(self):
        with pytest.raises(ValueError, match="multiplier"):
            BootstrapConfig(multiplier="uniform")


class TestSubstreams:
    def test_same_path_reproduces(self):
        a = substream(42, 1, 7).standard_normal(16)
        b = substream(42, 1, 7).standard_normal(16)
        assert np.array_equal(a, b)

    def test_different_paths_differ(self):
        a = substream(42, 1, 7).standard_normal(16)
        b = substream(42, 1, 8).standard_normal(16)
        c = substream(42, 2, 7).standard_normal(16)
        d = substream(43, 1, 7).standard_normal(16)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)
        assert not np.array_equal(a, d)

    def test_derive_seed_deterministic_and_distinct(self):
        seeds = [derive_seed(9, 3, w) for w in range(64)]
        assert seeds == [derive_seed(9, 3, w) for w in range(64)]
        assert len(set(seeds)) == 64
        assert all(0 <= s < 2**64 for s in seeds)


class TestMultipliers:
    def test_rademacher_support(self):
        eta = draw_multipliers(substream(0, 1), "rademacher", 5000)
        assert set(np.unique(eta)) == {-1.0, 1.0}

    def test_mammen_support_and_probability(self):
        eta = draw_multipliers(substream(0, 2), "mammen", 200_000)
        lo = (1.0 - math.sqrt(5.0)) / 2.0
        hi = (1.0 + math.sqrt(5.0)) / 2.0
        points = np.unique(eta)
        assert points == pytest.approx([lo, hi], rel=1e-15)
        p_lo = np.mean(eta == points[0])
        assert p_lo == pytest.approx((math.sqrt(5.0) + 1.0) / (2.0 * math.sqrt(5.0)), abs=0.005)

    @pytest.mark.parametrize("law", MULTIPLIERS)
    def test_mean_zero_variance_one(self, law):
        eta = draw_multipliers(substream(7, 3), law, 200_000)
        assert abs(eta.mean()) < 0.01
        assert eta.var() == pytest.approx(1.0, abs=0.02)

    def test_mammen_third_moment_is_one(self):
        # the property the law was constructed for
        eta = draw_multipliers(substream(7, 4), "mammen", 200_000)
        assert (eta**3).mean() == pytest.approx(1.0, abs=0.03)

    def test_unknown_law_rejected(self):
        with pytest.raises(ValueError, match="multiplier"):
            draw_multipliers(substream(0, 0), "bad", 4)
