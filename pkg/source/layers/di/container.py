from dependency_injector import containers, providers

from source.apps.core.cache_manager import CacheManager
from source.apps.decide.services import DecisionService
from source.apps.enumerate.services import BatteryService, EnumerationService
from source.layers.middleware.monitoring import (
    PerformanceMonitor,
    ResourceMonitor,
    MetricsCollector
)
from source.settings.settings_manager import settings_manager


class Container(containers.DeclarativeContainer):
    """Dependency Injection Container"""

    # Settings Manager
    settings = providers.Object(settings_manager)

    # Core Services
    metrics_collector = providers.Singleton(MetricsCollector)

    performance_monitor = providers.Singleton(
        PerformanceMonitor,
        metrics_collector=metrics_collector,
        threshold=providers.Callable(
            lambda: settings_manager.get_performance_thresholds().get('performance', 1.0)
        ),
        enabled=providers.Callable(settings_manager.monitoring_enabled)
    )

    resource_monitor = providers.Singleton(
        ResourceMonitor,
        max_workers=providers.Callable(
            lambda: settings_manager.get_resource_limits().get('max_workers', 1)
        ),
        backend=providers.Callable(
            lambda: settings_manager.get_resource_limits().get('backend', 'loky')
        ),
        batch_size=providers.Callable(
            lambda: settings_manager.get_resource_limits().get('batch_size', 'auto')
        ),
        metrics_collector=metrics_collector
    )

    cache_manager = providers.Singleton(
        CacheManager,
        settings=settings,
        performance_monitor=performance_monitor
    )

    # Decision and Search Services
    decision_service = providers.Singleton(
        DecisionService,
        settings=settings,
        cache_manager=cache_manager,
        performance_monitor=performance_monitor,
        resource_monitor=resource_monitor
    )

    enumeration_service = providers.Singleton(
        EnumerationService,
        settings=settings,
        cache_manager=cache_manager,
        performance_monitor=performance_monitor,
        resource_monitor=resource_monitor
    )

    battery_service = providers.Singleton(
        BatteryService,
        settings=settings,
        enumeration_service=enumeration_service,
        resource_monitor=resource_monitor,
        performance_monitor=performance_monitor
    )
