import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import fvshock as fv
from fvshock.errors import InadmissibleStateError
from fvshock.euler import axis_rusanov_flux

from conftest import random_admissible_states

GAS = fv.GasModel()

admissible_primitive = st.builds(
    fv.PrimitiveState,
    rho=st.floats(0.1, 10.0),
    u=st.floats(-5.0, 5.0),
    v=st.floats(-5.0, 5.0),
    p=st.floats(0.1, 10.0),
)


class TestGasModel:
    def test_default_gamma(self):
        assert GAS.gamma == 1.4

    def test_rejects_gamma_at_or_below_one(self):
        with pytest.raises(ValueError):
            fv.GasModel(1.0)

    def test_sound_speed(self):
        assert GAS.sound_speed(1.0, 1.0) == pytest.approx(math.sqrt(1.4), rel=1e-14)


class TestConversions:
    def test_rest_state(self):
        w = fv.primitive_from_conserved(fv.ConservedState(1.0, 0.0, 0.0, 2.5), GAS)
        assert w == fv.PrimitiveState(1.0, 0.0, 0.0, pytest.approx(1.0, rel=1e-14))

    def test_moving_state(self):
        w = fv.primitive_from_conserved(fv.ConservedState(2.0, 2.0, 0.0, 3.0), GAS)
        assert w.u == pytest.approx(1.0)
        assert w.p == pytest.approx(0.4 * (3.0 - 1.0), rel=1e-14)

    def test_energy_at_rest(self):
        q = fv.conserved_from_primitive(fv.PrimitiveState(1.0, 0.0, 0.0, 1.0), GAS)
        assert q.energy == pytest.approx(2.5, rel=1e-14)

    def test_energy_moving(self):
        q = fv.conserved_from_primitive(fv.PrimitiveState(1.0, 3.0, 0.0, 1.0), GAS)
        assert q.energy == pytest.approx(7.0, rel=1e-14)

    @given(admissible_primitive)
    def test_round_trip(self, w):
        q = fv.conserved_from_primitive(w, GAS)
        back = fv.primitive_from_conserved(q, GAS)
        np.testing.assert_allclose(back.as_array(), w.as_array(), rtol=1e-14, atol=1e-14)

    def test_round_trip_vectorized(self):
        rng = np.random.default_rng(7)
        q = random_admissible_states(rng, 500)
        w = fv.primitive_from_conserved(q, GAS)
        np.testing.assert_allclose(fv.conserved_from_primitive(w, GAS), q, rtol=1e-14, atol=1e-14)

    def test_negative_density_raises(self):
        with pytest.raises(InadmissibleStateError):
            fv.primitive_from_conserved(np.array([-1.0, 0.0, 0.0, 2.5]), GAS)

    def test_negative_pressure_raises_with_cell_context(self):
        q = np.tile([1.0, 0.0, 0.0, 2.5], (3, 1))
        q[1, 3] = -1.0
        with pytest.raises(InadmissibleStateError) as err:
            fv.primitive_from_conserved(q, GAS)
        assert err.value.cells is not None
        assert [1] in err.value.cells.tolist()

    def test_conserved_admissibility_check(self):
        from fvshock.euler import check_admissible_conserved

        check_admissible_conserved(np.array([1.0, 0.0, 0.0, 2.5]), GAS)
        with pytest.raises(InadmissibleStateError):
            # kinetic energy exceeds the total: internal energy negative
            check_admissible_conserved(np.array([1.0, 3.0, 0.0, 2.5]), GAS)


class TestPhysicalFlux:
    def test_rest_state_x(self):
        q = fv.conserved_from_primitive(np.array([1.0, 0.0, 0.0, 1.0]), GAS)
        np.testing.assert_allclose(fv.physical_flux(q, (1.0, 0.0), GAS), [0.0, 1.0, 0.0, 0.0])

    def test_rest_state_y(self):
        q = fv.conserved_from_primitive(np.array([1.0, 0.0, 0.0, 1.0]), GAS)
        np.testing.assert_allclose(fv.physical_flux(q, (0.0, 1.0), GAS), [0.0, 0.0, 1.0, 0.0])

    def test_moving_state_hand_value(self):
        # E = 2.5 + 0.5 = 3.0; flux = (rho u, rho u^2 + p, 0, u (E + p)) = (1, 2, 0, 4)
        q = fv.conserved_from_primitive(np.array([1.0, 1.0, 0.0, 1.0]), GAS)
        np.testing.assert_allclose(fv.physical_flux(q, (1.0, 0.0), GAS), [1.0, 2.0, 0.0, 4.0],
                                   rtol=1e-14)

    @pytest.mark.parametrize("angle_deg", [0.0, 90.0, 40.0])
    def test_rotation_covariance(self, angle_deg):
        a = math.radians(angle_deg)
        rot = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
        w = np.array([1.3, 1.1, -0.4, 2.2])
        q = fv.conserved_from_primitive(w, GAS)
        n = np.array([0.3, 0.9539392014169457])  # unit
        f = fv.physical_flux(q, n, GAS)

        w_rot = w.copy()
        w_rot[1:3] = rot @ w[1:3]
        q_rot = fv.conserved_from_primitive(w_rot, GAS)
        f_rot = fv.physical_flux(q_rot, rot @ n, GAS)

        np.testing.assert_allclose(f_rot[[0, 3]], f[[0, 3]], rtol=1e-13)
        np.testing.assert_allclose(f_rot[1:3], rot @ f[1:3], rtol=1e-13, atol=1e-14)


class TestWaveSpeed:
    def test_rest(self):
        q = fv.conserved_from_primitive(np.array([1.0, 0.0, 0.0, 1.0]), GAS)
        assert fv.max_wave_speed(q, (1.0, 0.0), GAS) == pytest.approx(1.183216, abs=1e-6)

    def test_moving(self):
        q = fv.conserved_from_primitive(np.array([1.0, 3.0, 0.0, 1.0]), GAS)
        assert fv.max_wave_speed(q, (1.0, 0.0), GAS) == pytest.approx(3.0 + math.sqrt(1.4), rel=1e-12)

    def test_normal_velocity_zero(self):
        q = fv.conserved_from_primitive(np.array([1.0, 3.0, 0.0, 1.0]), GAS)
        assert fv.max_wave_speed(q, (0.0, 1.0), GAS) == pytest.approx(math.sqrt(1.4), rel=1e-12)


class TestLaxFriedrichs:
    def test_consistency(self):
        q = fv.conserved_from_primitive(np.array([1.2, 0.7, -0.3, 2.0]), GAS)
        np.testing.assert_allclose(
            fv.lax_friedrichs_flux(q, q, (1.0, 0.0), GAS),
            fv.physical_flux(q, (1.0, 0.0), GAS),
            rtol=1e-14,
        )

    def test_flip_antisymmetry(self):
        rng = np.random.default_rng(3)
        qa, qb = random_admissible_states(rng, 2)
        n = np.array([0.6, 0.8])
        f1 = fv.lax_friedrichs_flux(qa, qb, n, GAS)
        f2 = fv.lax_friedrichs_flux(qb, qa, -n, GAS)
        np.testing.assert_allclose(f1 + f2, 0.0, atol=1e-13)

    def test_sod_ends_mass_flux(self):
        # both states at rest: mass flux is pure dissipation, lam = a_left
        qL = fv.conserved_from_primitive(np.array([1.0, 0.0, 0.0, 1.0]), GAS)
        qR = fv.conserved_from_primitive(np.array([0.125, 0.0, 0.0, 0.1]), GAS)
        f = fv.lax_friedrichs_flux(qL, qR, (1.0, 0.0), GAS)
        expected = 0.5 * math.sqrt(1.4) * (1.0 - 0.125)
        assert f[0] == pytest.approx(expected, rel=1e-14)
        assert f[0] > 0.0

    @pytest.mark.parametrize("axis", [0, 1])
    def test_axis_fast_path_matches_generic(self, axis):
        rng = np.random.default_rng(11)
        qL = random_admissible_states(rng, 200)
        qR = random_admissible_states(rng, 200)
        wL = fv.primitive_from_conserved(qL, GAS)
        wR = fv.primitive_from_conserved(qR, GAS)
        n = (1.0, 0.0) if axis == 0 else (0.0, 1.0)
        f_generic, lam_generic = fv.lax_friedrichs_flux(qL, qR, n, GAS, return_max_speed=True)
        f_fast, lam_fast = axis_rusanov_flux(wL.reshape(20, 10, 4), wR.reshape(20, 10, 4), axis, GAS)
        np.testing.assert_allclose(f_fast.reshape(200, 4), f_generic, rtol=1e-13, atol=1e-13)
        np.testing.assert_allclose(lam_fast.reshape(200), lam_generic, rtol=1e-13)


@settings(max_examples=50)
@given(admissible_primitive, admissible_primitive)
def test_conservativity_property(wa, wb):
    qa = fv.conserved_from_primitive(wa, GAS)
    qb = fv.conserved_from_primitive(wb, GAS)
    n = np.array([1.0, 0.0])
    total = fv.lax_friedrichs_flux(qa, qb, n, GAS) + fv.lax_friedrichs_flux(qb, qa, -n, GAS)
    np.testing.assert_allclose(total, 0.0, atol=1e-12)
