import pytest

from pdcw import model
from pdcw.jsa import build_jsa
from pdcw.wigner import wigner_of_gaussian_jsa


@pytest.fixture(scope="session")
def symmetric_config():
    return model.shipped_config("ktp_symmetric")


@pytest.fixture(scope="session")
def narrow_config():
    return model.shipped_config("ktp_narrow_pump")


@pytest.fixture(scope="session")
def chirped_config():
    return model.shipped_config("ktp_chirped")


@pytest.fixture(scope="session", params=["ktp_symmetric", "ktp_narrow_pump", "ktp_chirped"])
def any_config(request):
    return model.shipped_config(request.param)


@pytest.fixture(scope="session")
def narrow_form(narrow_config):
    params = model.derive_params(narrow_config)
    return wigner_of_gaussian_jsa(build_jsa(params, narrow_config.chirp))


@pytest.fixture(scope="session")
def chirped_form(chirped_config):
    params = model.derive_params(chirped_config)
    return wigner_of_gaussian_jsa(build_jsa(params, chirped_config.chirp))
