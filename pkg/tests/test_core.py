"""Tests for settings, seeding and bit packing."""

import numpy as np
import pytest

from boolearn.core.bits import ALL_ONES, pack_bits, popcount, tail_mask, unpack_bits
from boolearn.core.config import CONTEST_BUDGET, get_settings
from boolearn.core.errors import BAD_REQUEST, UNPROCESSABLE, ModelConfigError, PlaFormatError
from boolearn.core.rng import derive_seed, make_rng, spawn_seeds
from boolearn.schemas.portfolio import PortfolioConfig


class TestSettings:
    """Tests for environment-driven settings."""

    def test_defaults(self, monkeypatch):
        """Test defaults when nothing is set."""
        for name in ("BOOLEARN_THREADS", "BOOLEARN_BUDGET", "BOOLEARN_REPORT_TIMING"):
            monkeypatch.delenv(name, raising=False)
        settings = get_settings()
        assert settings.threads == 1
        assert settings.budget == CONTEST_BUDGET == 5000
        assert settings.report_timing is False

    def test_environment(self, monkeypatch):
        """Test BOOLEARN_* variables override the defaults."""
        monkeypatch.setenv("BOOLEARN_THREADS", "3")
        monkeypatch.setenv("BOOLEARN_BUDGET", "123")
        monkeypatch.setenv("BOOLEARN_LOG_LEVEL", "debug")
        monkeypatch.setenv("BOOLEARN_REPORT_TIMING", "yes")
        settings = get_settings()
        assert (settings.threads, settings.budget, settings.log_level) == (3, 123, "DEBUG")
        assert settings.report_timing is True

    def test_budget_feeds_config(self, monkeypatch):
        """Test the default portfolio budget follows the settings."""
        monkeypatch.setenv("BOOLEARN_BUDGET", "77")
        assert PortfolioConfig().budget == 77

    def test_config_digest(self):
        """Test the digest is stable and sensitive to changes."""
        assert PortfolioConfig(budget=10).digest() == PortfolioConfig(budget=10).digest()
        assert PortfolioConfig(budget=10).digest() != PortfolioConfig(budget=11).digest()
        assert len(PortfolioConfig().digest()) == 12


class TestErrors:
    """Tests for error status codes."""

    def test_status_codes(self):
        """Test format errors are bad requests and configuration errors unprocessable."""
        assert PlaFormatError("x").status_code == BAD_REQUEST
        assert ModelConfigError("x").status_code == UNPROCESSABLE
        assert PlaFormatError("x", status_code=418).status_code == 418


class TestSeeds:
    """Tests for derived random streams."""

    def test_derive_seed_is_stable(self):
        """Test child seeds depend only on master seed and index."""
        assert derive_seed(7, 3) == derive_seed(7, 3)
        assert len(set(spawn_seeds(7, 50))) == 50
        assert derive_seed(7, 0) != derive_seed(8, 0)

    def test_make_rng_reproducible(self):
        """Test equal seeds give equal streams."""
        assert make_rng(5).random(4).tolist() == make_rng(5).random(4).tolist()


class TestBits:
    """Tests for 64-bit word packing."""

    def test_word_layout(self):
        """Test bit c lives in word c // 64 at position c % 64."""
        bits = np.zeros(70, dtype=bool)
        bits[0] = bits[65] = True
        assert pack_bits(bits).tolist() == [1, 2]

    @pytest.mark.parametrize("width", [1, 63, 64, 65, 130])
    def test_unpack_inverts_pack(self, width):
        """Test unpacking restores the matrix."""
        matrix = make_rng(width).integers(0, 2, size=(5, width)).astype(bool)
        assert np.array_equal(unpack_bits(pack_bits(matrix), width), matrix)

    def test_tail_mask(self):
        """Test only the used positions of the last word are set."""
        assert tail_mask(70).tolist() == [int(ALL_ONES), 63]
        assert tail_mask(64).tolist() == [int(ALL_ONES)]

    def test_popcount(self):
        """Test counting set bits across words."""
        words = np.array([ALL_ONES, np.uint64(5)], dtype=np.uint64)
        assert popcount(words) == 66
