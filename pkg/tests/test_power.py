"""Receiver power model and energy-efficiency arithmetic."""

import numpy as np
import pytest

from quantlink import PowerModelParams, adc_power, energy_efficiency, total_power

DEFAULTS = PowerModelParams()


class TestAdcPower:
    def test_one_bit_default_is_one_milliwatt(self):
        assert adc_power(DEFAULTS, 1) == pytest.approx(1.0, abs=1e-15)

    def test_four_bits(self):
        assert adc_power(DEFAULTS, 4) == pytest.approx(8.0, abs=1e-15)

    def test_doubles_per_bit_exactly(self):
        for bits in range(1, 12):
            assert adc_power(DEFAULTS, bits + 1) == 2.0 * adc_power(DEFAULTS, bits)

    def test_bits_validation(self):
        with pytest.raises(ValueError):
            adc_power(DEFAULTS, 0)


class TestTotalPower:
    def test_reference_arithmetic(self):
        # 8*20 + 2*(8*10 + 40 + 2*8) + 200
        assert total_power(DEFAULTS, 8, 2, 4) == 632.0

    def test_no_chains_degenerate(self):
        assert total_power(DEFAULTS, 8, 0, 4) == 360.0

    def test_fully_digital_variant_drops_phase_shifters(self):
        # 8*20 + 8*(40 + 2*8) + 200, no per-chain phase shifter bank
        assert total_power(DEFAULTS, 8, 8, 4, phase_shifters=False) == 808.0

    def test_strictly_increasing_in_each_argument(self):
        base = total_power(DEFAULTS, 8, 2, 4)
        assert total_power(DEFAULTS, 9, 2, 4) > base
        assert total_power(DEFAULTS, 8, 3, 4) > base
        assert total_power(DEFAULTS, 8, 2, 5) > base

    def test_chain_count_validation(self):
        with pytest.raises(ValueError):
            total_power(DEFAULTS, 4, 5, 2)

    def test_adc_share_dominates_from_nine_bits(self):
        """With two chains at defaults the ADCs cross half the receiver budget
        at b = 9 and not before."""
        def share(bits):
            adc = 2 * 2 * adc_power(DEFAULTS, bits)
            return adc / total_power(DEFAULTS, 8, 2, bits)

        assert share(8) < 0.5
        assert share(9) > 0.5


class TestEnergyEfficiency:
    def test_unit_identity(self):
        assert energy_efficiency(1.0, 1e9, 1000.0) == pytest.approx(1e9, rel=1e-12)

    def test_zero_rate(self):
        assert energy_efficiency(0.0, 1e9, 632.0) == 0.0

    def test_reference_value(self):
        assert energy_efficiency(10.0, 1e9, 632.0) == pytest.approx(1.5822784810126582e10, rel=1e-12)

    def test_decreasing_in_power(self):
        powers = np.linspace(100.0, 2000.0, 10)
        ee = [energy_efficiency(5.0, 1e9, p) for p in powers]
        assert all(a > b for a, b in zip(ee, ee[1:]))

    def test_validation(self):
        with pytest.raises(ValueError):
            energy_efficiency(1.0, 1e9, 0.0)
        with pytest.raises(ValueError):
            energy_efficiency(-1.0, 1e9, 100.0)


class TestParamsValidation:
    def test_positive_fields_enforced(self):
        with pytest.raises(ValueError):
            PowerModelParams(p_lna_mw=0.0)
        with pytest.raises(ValueError):
            PowerModelParams(f_s_hz=-1e9)
