import pytest

from source.apps.cli.corpus import (
    diamond_over,
    four_element_chain,
    lukasiewicz_chain,
    three_element_chain,
)
from source.apps.core.cache_manager import CacheManager
from source.apps.decide.services import DecisionService
from source.apps.semimodules.services import boolean_semifield, product_semiring
from source.settings.settings_manager import SettingsManager


@pytest.fixture
def b2():
    return boolean_semifield()


@pytest.fixture
def a3():
    return three_element_chain()


@pytest.fixture
def c4():
    return four_element_chain()


@pytest.fixture
def l3():
    return lukasiewicz_chain()


@pytest.fixture
def b2xb2(b2):
    return product_semiring([b2, b2], name='B2xB2')


@pytest.fixture
def m3(b2):
    return diamond_over(b2)


@pytest.fixture
def settings():
    return SettingsManager()


@pytest.fixture
def decision_service(settings):
    return DecisionService(settings, cache_manager=CacheManager(settings))
