import pytest

from zgkn_dirac.geometry import ALPHA_S, ModelParams
from zgkn_dirac.spectrum import point_spectrum

HYDROGEN = ModelParams(1e-3, ALPHA_S)


@pytest.fixture(scope="session")
def hydrogen_params():
    return HYDROGEN


@pytest.fixture(scope="session")
def hydrogen_report():
    """Full-gap search at a = 1e-3, gamma = alpha_S over kappa = +-1/2 (about a minute and a half)."""
    return point_spectrum(HYDROGEN, [0.5, -0.5], E_window=(-1.0, 1.0), max_branches=1)


@pytest.fixture(scope="session")
def hydrogen_top_reports():
    """Searches near E = 1 for the a-sequence used in the convergence check."""
    return {a: point_spectrum(ModelParams(a, ALPHA_S), [0.5, -0.5], E_window=(0.999, 1.0))
            for a in (1e-2, 1e-3, 1e-4)}
