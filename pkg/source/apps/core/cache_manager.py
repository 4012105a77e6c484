import threading
from typing import Any, Callable, Optional

from cachetools import LRUCache

from source.layers.middleware.monitoring import PerformanceMonitor


class CacheManager:
    """Memoises derived objects (ideals, Id(A), hom lists) per algebra"""

    def __init__(self, settings, performance_monitor: Optional[PerformanceMonitor] = None, **kwargs):
        self.settings = settings
        self.performance_monitor = performance_monitor
        self._cache = LRUCache(maxsize=self.settings.get_cache_size())
        self._lock = threading.RLock()
        self.hits = 0
        self.misses = 0

    def get_or_create(self, key: str, creator_func: Optional[Callable[[], Any]] = None) -> Any:
        """Get from cache or create"""
        with self._lock:
            if key in self._cache:
                self.hits += 1
                return self._cache[key]
        if creator_func is None:
            return None
        value = creator_func()
        with self._lock:
            self.misses += 1
            self._cache[key] = value
        return value

    def clear_cache(self, prefix: Optional[str] = None) -> None:
        """Clear cache entries with the given key prefix (or everything)"""
        with self._lock:
            if prefix:
                for key in [k for k in self._cache.keys() if k.startswith(prefix)]:
                    del self._cache[key]
            else:
                self._cache.clear()
