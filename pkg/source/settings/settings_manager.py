from typing import Any, Dict
import copy
import logging
import os

from .service_settings import (
    SEARCH_SETTINGS,
    DECISION_SETTINGS,
    RESOURCE_MONITOR_SETTINGS,
    CACHE_SETTINGS,
    REPORT_SETTINGS,
    MONITORING_SETTINGS
)


class SettingsManager:
    """Manages application settings with environment variable support"""

    def __init__(self):
        self._settings = {
            'search': self._load_search_settings(),
            'decision': copy.deepcopy(DECISION_SETTINGS),
            'resource_monitor': self._load_resource_settings(),
            'cache': copy.deepcopy(CACHE_SETTINGS),
            'report': copy.deepcopy(REPORT_SETTINGS),
            'monitoring': self._load_monitoring_settings()
        }

    def _load_search_settings(self) -> Dict[str, Any]:
        """Load search settings with environment variables"""
        settings = SEARCH_SETTINGS.copy()
        settings['checkpoint_dir'] = os.getenv('SEMIRING_CHECKPOINT_DIR', settings['checkpoint_dir'])
        budget = os.getenv('SEMIRING_TIME_BUDGET')
        if budget:
            settings['time_budget'] = float(budget)
        return settings

    def _load_resource_settings(self) -> Dict[str, Any]:
        """Load worker limits with environment variables"""
        settings = RESOURCE_MONITOR_SETTINGS.copy()
        threads = os.getenv('SEMIRING_THREADS')
        if threads:
            settings['max_workers'] = max(1, int(threads))
        return settings

    def _load_monitoring_settings(self) -> Dict[str, Any]:
        settings = MONITORING_SETTINGS.copy()
        settings['log_level'] = os.getenv('SEMIRING_LOG_LEVEL', settings['log_level'])
        enabled = os.getenv('SEMIRING_MONITORING')
        if enabled:
            settings['enabled'] = enabled.lower() not in ('0', 'false', 'off')
        return settings

    def get_setting(self, category: str, key: str, default: Any = None) -> Any:
        """Get a specific setting value"""
        category_settings = self._settings.get(category, {})
        return category_settings.get(key, default)

    def get_category(self, category: str) -> Dict[str, Any]:
        """Get all settings for a category"""
        return self._settings.get(category, {}).copy()

    def override(self, category: str, key: str, value: Any) -> None:
        """Override a setting for the rest of the process (CLI flags)"""
        self._settings.setdefault(category, {})[key] = value

    def get_search_settings(self) -> Dict[str, Any]:
        return self.get_category('search')

    def get_decision_settings(self) -> Dict[str, Any]:
        return self.get_category('decision')

    def get_cache_size(self) -> int:
        return self.get_setting('cache', 'max_entries', 512)

    def get_resource_limits(self) -> Dict[str, Any]:
        """Get worker pool limits"""
        return {
            'max_workers': self.get_setting('resource_monitor', 'max_workers'),
            'backend': self.get_setting('resource_monitor', 'backend'),
            'batch_size': self.get_setting('resource_monitor', 'batch_size')
        }

    def monitoring_enabled(self) -> bool:
        return bool(self.get_setting('monitoring', 'enabled', True))

    def get_performance_thresholds(self) -> Dict[str, float]:
        return {
            'performance': self.get_setting('monitoring', 'performance_threshold')
        }

    def configure_logging(self) -> None:
        """Apply the monitoring log level to the root logger"""
        level = str(self.get_setting('monitoring', 'log_level', 'WARNING')).upper()
        logging.basicConfig(
            level=getattr(logging, level, logging.WARNING),
            format='%(asctime)s %(levelname)s %(name)s %(message)s'
        )


# Global settings manager instance
settings_manager = SettingsManager()
