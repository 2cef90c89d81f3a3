from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entlink.loading import (
    CouplingPair,
    MemoryCavityParams,
    coupling_integrals,
    loaded_pair_state,
    quadrature_loading_oracle,
)
from entlink.source import OpaParams

# exact rational values of the reference coupling integrals
# (g=0.1, Gamma=gamma=1, Gamma_c=gamma_c=0.5, eta=0.1)
I_MINUS_EXACT = Fraction(1, 10) * Fraction(1, 20) / (Fraction(1, 2) * Fraction(9, 10) * Fraction(7, 5))
I_PLUS_EXACT = Fraction(1, 10) * Fraction(1, 20) / (Fraction(1, 2) * Fraction(11, 10) * Fraction(8, 5))


class TestMemoryCavityParams:
    def test_input_coupling_defaults_to_linewidth(self):
        mem = MemoryCavityParams(gamma_c_total=0.5)
        assert mem.gamma_c_in == 0.5
        assert mem.coupling_ratio == 1.0

    def test_rejects_overcoupling(self):
        with pytest.raises(ValueError):
            MemoryCavityParams(gamma_c_total=0.5, gamma_c_in=0.6)

    def test_rejects_non_positive_load_time(self):
        with pytest.raises(ValueError):
            MemoryCavityParams(gamma_c_total=0.5, t_load=0.0)


class TestCouplingIntegrals:
    def test_unpumped(self, reference_memory):
        opa = OpaParams(g=0.0, gamma_total=1.0)
        pair = coupling_integrals(opa, reference_memory, eta=0.5)
        assert pair == CouplingPair(0.0, 0.0)

    def test_reference_values(self, reference_opa, reference_memory):
        pair = coupling_integrals(reference_opa, reference_memory, eta=0.1)
        assert pair.i_minus == pytest.approx(float(I_MINUS_EXACT), rel=1e-14)
        assert pair.i_plus == pytest.approx(float(I_PLUS_EXACT), rel=1e-14)
        assert float(I_MINUS_EXACT) == pytest.approx(0.0079365, rel=1e-5)
        assert float(I_PLUS_EXACT) == pytest.approx(0.0056818, rel=1e-5)

    def test_rate_scale_invariance(self, reference_opa, reference_memory):
        scaled_opa = OpaParams(g=0.1, gamma_total=1000.0, gamma_out=1000.0)
        scaled_mem = MemoryCavityParams(gamma_c_total=500.0, gamma_c_in=500.0)
        base = coupling_integrals(reference_opa, reference_memory, eta=0.1)
        scaled = coupling_integrals(scaled_opa, scaled_mem, eta=0.1)
        assert scaled.i_minus == pytest.approx(base.i_minus, rel=1e-14)
        assert scaled.i_plus == pytest.approx(base.i_plus, rel=1e-14)

    def test_ordering(self, reference_opa, reference_memory):
        pair = coupling_integrals(reference_opa, reference_memory, eta=0.1)
        assert pair.i_minus > pair.i_plus > 0.0

    def test_eta_out_of_range_rejected(self, reference_opa, reference_memory):
        with pytest.raises(ValueError):
            coupling_integrals(reference_opa, reference_memory, eta=1.5)


class TestLoadedPairState:
    def test_reference_state(self, reference_opa, reference_memory):
        state = loaded_pair_state(reference_opa, reference_memory, eta=0.1, pair_index=1)
        assert state.nbar == pytest.approx(float(I_MINUS_EXACT - I_PLUS_EXACT), rel=1e-13)
        assert state.ntilde_signed == pytest.approx(float(I_MINUS_EXACT + I_PLUS_EXACT), rel=1e-13)
        assert state.nbar == pytest.approx(0.0022547, rel=1e-4)
        assert state.ntilde_signed == pytest.approx(0.0136183, rel=1e-4)

    def test_pair_two_flips_sign_only(self, reference_opa, reference_memory):
        first = loaded_pair_state(reference_opa, reference_memory, eta=0.1, pair_index=1)
        second = loaded_pair_state(reference_opa, reference_memory, eta=0.1, pair_index=2)
        assert second.nbar == first.nbar
        assert second.ntilde_signed == -first.ntilde_signed

    def test_dark_arm_loads_vacuum(self, reference_opa, reference_memory):
        state = loaded_pair_state(reference_opa, reference_memory, eta=0.0, pair_index=1)
        assert state.nbar == 0.0
        assert state.ntilde_signed == 0.0

    def test_invalid_pair_index(self, reference_opa, reference_memory):
        with pytest.raises(ValueError):
            loaded_pair_state(reference_opa, reference_memory, eta=0.1, pair_index=3)

    @given(
        eta_low=st.floats(min_value=1e-3, max_value=0.5),
        boost=st.floats(min_value=1.01, max_value=2.0),
    )
    @settings(max_examples=40)
    def test_monotone_in_eta(self, eta_low, boost, reference_opa, reference_memory):
        eta_high = min(1.0, eta_low * boost)
        low = loaded_pair_state(reference_opa, reference_memory, eta_low, 1)
        high = loaded_pair_state(reference_opa, reference_memory, eta_high, 1)
        assert high.nbar > low.nbar
        assert high.ntilde_signed > low.ntilde_signed

    @given(
        g=st.floats(min_value=0.001, max_value=0.9),
        ratio=st.floats(min_value=0.1, max_value=4.0),
        eta=st.floats(min_value=1e-3, max_value=1.0),
    )
    @settings(max_examples=80)
    def test_loaded_state_is_physical(self, g, ratio, eta):
        opa = OpaParams(g=g, gamma_total=1.0)
        mem = MemoryCavityParams(gamma_c_total=ratio)
        state = loaded_pair_state(opa, mem, eta, 1)  # constructor enforces physicality
        assert state.ntilde_signed**2 <= state.nbar * (state.nbar + 1.0) * (1.0 + 1e-12)


class TestQuadratureOracle:
    def test_matches_closed_form_at_reference(self, reference_opa, reference_memory):
        state = loaded_pair_state(reference_opa, reference_memory, eta=0.1, pair_index=1)
        nbar_q, ntilde_q = quadrature_loading_oracle(reference_opa, reference_memory, eta=0.1)
        assert state.nbar == pytest.approx(nbar_q, rel=1e-8)
        assert state.ntilde_signed == pytest.approx(ntilde_q, rel=1e-8)

    def test_unpumped(self, reference_memory):
        opa = OpaParams(g=0.0, gamma_total=1.0)
        assert quadrature_loading_oracle(opa, reference_memory, eta=0.1) == (0.0, 0.0)

    def test_finite_window_converges_to_steady_state(self):
        # Gamma_c * T = 20 is "a few cold-cavity lifetimes": a 400 ns window
        # for a 5e7 s^-1 memory cavity fed by a 1e8 s^-1 OPA
        opa = OpaParams(g=0.1, gamma_total=1e8)
        mem = MemoryCavityParams(gamma_c_total=5e7)
        steady = quadrature_loading_oracle(opa, mem, eta=0.1)
        finite = quadrature_loading_oracle(opa, mem, eta=0.1, t_load=400e-9)
        assert finite[0] == pytest.approx(steady[0], rel=1e-6)
        assert finite[1] == pytest.approx(steady[1], rel=1e-6)

    def test_finite_window_increases_to_steady_state(self):
        opa = OpaParams(g=0.1, gamma_total=1e8)
        mem = MemoryCavityParams(gamma_c_total=5e7)
        steady = quadrature_loading_oracle(opa, mem, eta=0.1)
        previous = (0.0, 0.0)
        for gamma_c_t in (0.5, 1.0, 2.0, 4.0, 8.0):
            current = quadrature_loading_oracle(opa, mem, eta=0.1, t_load=gamma_c_t / 5e7)
            assert previous[0] < current[0] <= steady[0] * (1.0 + 1e-12)
            assert previous[1] < current[1] <= steady[1] * (1.0 + 1e-12)
            previous = current

    def test_window_from_params_matches_override(self):
        opa = OpaParams(g=0.1, gamma_total=1e8)
        with_window = MemoryCavityParams(gamma_c_total=5e7, t_load=40e-9)
        without = MemoryCavityParams(gamma_c_total=5e7)
        assert quadrature_loading_oracle(opa, with_window, eta=0.1) == pytest.approx(
            quadrature_loading_oracle(opa, without, eta=0.1, t_load=40e-9)
        )

    def test_rate_scale_invariance(self, reference_opa, reference_memory):
        scaled_opa = OpaParams(g=0.1, gamma_total=1e9, gamma_out=1e9)
        scaled_mem = MemoryCavityParams(gamma_c_total=5e8)
        base = quadrature_loading_oracle(reference_opa, reference_memory, eta=0.1)
        scaled = quadrature_loading_oracle(scaled_opa, scaled_mem, eta=0.1)
        assert scaled[0] == pytest.approx(base[0], rel=1e-10)
        assert scaled[1] == pytest.approx(base[1], rel=1e-10)
