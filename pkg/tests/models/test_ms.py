"""Tests for the rotating-field model."""
import numpy as np
import pytest

from adlab.models import (
    MSModel,
    MSParams,
    get_model,
    ms_diagonal_elements,
    ms_eigensystem,
    ms_exact_propagator,
    ms_hamiltonian,
    verify_ms_propagator,
)
from adlab.models.ms import ms_energy, ms_theta


@pytest.fixture(scope="module")
def ms_params():
    return MSParams(omega0=1.0, Omega=0.3)


class TestMSModel:
    def test_rejects_non_positive_strength(self):
        """omega0 must be positive."""
        with pytest.raises(ValueError):
            MSParams(omega0=0.0, Omega=1.0)

    def test_period(self, ms_params):
        """τ = 2π/Ω, None for a static field."""
        assert ms_params.period == pytest.approx(2 * np.pi / 0.3)
        assert MSParams(omega0=1.0, Omega=0.0).period is None

    @pytest.mark.parametrize("t", [0.0, 0.4, 2.5, 6.0])
    def test_eigenpairs(self, ms_params, t):
        """H|n_{1,2}⟩ = ±E₀|n_{1,2}⟩ with E₀ = √(ω₀² + Ω² sin² ω₀t)."""
        energies, states = ms_eigensystem(ms_params, t)
        h = ms_hamiltonian(ms_params, t)
        assert energies[0] == pytest.approx(ms_energy(ms_params, t))
        for i in range(2):
            assert np.allclose(h @ states[:, i], energies[i] * states[:, i], atol=1e-12)
        assert np.allclose(states.conj().T @ states, np.eye(2), atol=1e-12)

    def test_theta_principal_branch(self, ms_params):
        """θ(t) at sin 2ω₀t = 1 equals tan⁻¹(Ω/2ω₀)."""
        t = np.pi / 4
        assert ms_theta(ms_params, t) == pytest.approx(np.arctan(0.15))

    def test_printed_propagator_solves_schrodinger(self, ms_params):
        """The closed-form U(t) agrees with integrating i·dU/dt = HU."""
        assert verify_ms_propagator(ms_params) < 1e-4

    def test_printed_propagator_is_used_after_verification(self, ms_params):
        """exact_propagator returns the closed form once it has been verified."""
        model = MSModel(ms_params)
        assert model.printed_propagator_ok
        assert np.allclose(model.exact_propagator(1.1), ms_exact_propagator(ms_params, 1.1))

    def test_failed_verification_falls_back_to_integration(self, ms_params, mocker):
        """A propagator that fails verification is replaced by integration."""
        mocker.patch("adlab.models.ms.verify_ms_propagator", return_value=1.0)
        model = MSModel(ms_params)
        assert not model.printed_propagator_ok
        u = model.exact_propagator(0.5)
        assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-10)
        assert np.max(np.abs(u - ms_exact_propagator(ms_params, 0.5))) < 1e-4

    def test_verification_runs_once_at_construction(self, ms_params, mocker):
        """The propagator check happens when the model is built, never on later calls."""
        check = mocker.patch("adlab.models.ms.verify_ms_propagator", return_value=0.0)
        model = MSModel(ms_params)
        assert check.call_count == 1
        for t in (0.1, 0.2, 0.3):
            model.exact_propagator(t)
        assert check.call_count == 1
        assert MSModel(ms_params, verify=False).printed_propagator_ok
        assert check.call_count == 1

    def test_diagonal_elements(self, ms_params):
        """⟨n_i(t)|U(t)|n_i(0)⟩ from the closed forms matches direct projection."""
        _, start = ms_eigensystem(ms_params, 0.0)
        for t in (0.3, 1.7, 4.2):
            _, now = ms_eigensystem(ms_params, t)
            projected = now.conj().T @ ms_exact_propagator(ms_params, t) @ start
            assert np.allclose(ms_diagonal_elements(ms_params, t), np.diag(projected), atol=1e-12)

    def test_factory(self):
        """get_model('ms', ...) builds an MSModel."""
        model = get_model("MS", {"omega0": 2.0, "Omega": 0.1})
        assert isinstance(model, MSModel)
        assert model.describe() == {"name": "ms", "omega0": 2.0, "Omega": 0.1}
