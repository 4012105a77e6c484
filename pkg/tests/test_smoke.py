"""Smoke tests: the package compiles, wires and configures itself."""
import compileall
import sys
from pathlib import Path

from source.apps.core.cache_manager import CacheManager
from source.apps.decide.services import DecisionService
from source.layers.di.container import Container
from source.layers.middleware.monitoring import MetricsCollector, PerformanceMonitor, ResourceMonitor
from source.settings.settings_manager import SettingsManager, settings_manager

ROOT = Path(__file__).resolve().parent.parent


def _square(x):
    return x * x


def test_no_syntax_errors():
    """Every source file compiles"""
    sys.dont_write_bytecode = True
    assert compileall.compile_dir(str(ROOT / 'source'), quiet=1, force=True)


def test_container_wires_services():
    container = Container()
    service = container.decision_service()
    assert isinstance(service, DecisionService)
    assert container.decision_service() is service
    assert container.enumeration_service().resource_monitor is container.resource_monitor()


def test_settings_defaults():
    assert settings_manager.get_setting('search', 'max_size_limit') == 7
    assert settings_manager.get_setting('decision', 'free_rank_scope') == 2
    assert settings_manager.get_setting('nowhere', 'nothing', 'fallback') == 'fallback'


def test_cache_manager_memoises_by_key():
    cache = CacheManager(settings_manager)
    calls = []
    create = lambda: calls.append(1) or len(calls)
    assert cache.get_or_create('DecisionService:id:x', create) == 1
    assert cache.get_or_create('DecisionService:id:x', create) == 1
    assert (cache.hits, cache.misses) == (1, 1)
    cache.clear_cache('DecisionService:')
    assert cache.get_or_create('DecisionService:id:x', create) == 2


def test_performance_monitor_records_timings():
    collector = MetricsCollector()
    monitor = PerformanceMonitor(collector, threshold=60.0)
    with monitor.timed('block') as timing:
        pass
    assert timing['seconds'] >= 0
    assert monitor.monitor('call')(_square)(3) == 9
    assert set(collector.get_metrics()) == {'block', 'call'}


def test_disabled_monitoring_records_nothing(monkeypatch):
    monkeypatch.setenv('SEMIRING_MONITORING', 'off')
    settings = SettingsManager()
    assert settings.monitoring_enabled() is False
    collector = MetricsCollector()
    monitor = PerformanceMonitor(collector, threshold=0.0, enabled=settings.monitoring_enabled())
    with monitor.timed('block') as timing:
        pass
    assert timing['seconds'] >= 0
    assert collector.get_metrics() == {}


def test_monitoring_enabled_by_default():
    assert settings_manager.get_category('monitoring')['enabled'] is True
    assert Container().performance_monitor().enabled is True


def test_resource_monitor_keeps_order():
    monitor = ResourceMonitor(max_workers=1)
    assert monitor.map(_square, range(5)) == [0, 1, 4, 9, 16]
    assert list(monitor.imap(_square, [3, 1])) == [9, 1]
    assert monitor.metrics_collector.get_metrics('map')['map'][0]['metadata']['items'] == 5
