import pytest

from rissec import config


@pytest.fixture(scope="session")
def params():
    return config.default_params()


@pytest.fixture(scope="session")
def links(params):
    main_rf, main_uowc, eve_rf, eve_uowc = config.build_links(params)
    return {"main_rf": main_rf, "main_uowc": main_uowc, "eve_rf": eve_rf, "eve_uowc": eve_uowc}


def make_cfg(scenario="I", **overrides):
    p = config.default_params()
    for path, value in overrides.items():
        p = config.set_path(p, path.replace("__", "."), value)
    return config.build_config(p, scenario)


@pytest.fixture
def cfg_factory():
    return make_cfg
