from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional
from collections import defaultdict
from contextlib import contextmanager
from datetime import datetime
from functools import wraps
import logging
import threading
import time

from joblib import Parallel, delayed

logger = logging.getLogger(__name__)


class MetricsCollector:
    """Collects and manages performance metrics"""

    def __init__(self, settings: Optional[Dict[str, Any]] = None):
        self.metrics = defaultdict(list)
        self.settings = settings or {}
        self._lock = threading.Lock()

    def record_metric(self, operation: str, duration: float, success: bool,
                      metadata: Optional[Dict[str, Any]] = None):
        with self._lock:
            self.metrics[operation].append({
                'duration': duration,
                'timestamp': datetime.now().isoformat(),
                'success': success,
                'metadata': metadata or {}
            })

    def get_metrics(self, operation: Optional[str] = None) -> Dict:
        with self._lock:
            if operation:
                return {operation: list(self.metrics[operation])}
            return dict(self.metrics)


class PerformanceMonitor:
    """Monitors and tracks duration of operations"""

    def __init__(self, metrics_collector: Optional[MetricsCollector] = None,
                 threshold: float = 1.0, enabled: bool = True):
        self.metrics_collector = metrics_collector or MetricsCollector()
        self.threshold = threshold
        self.enabled = enabled

    def monitor(self, operation_name: str):
        def decorator(func):
            @wraps(func)
            def wrapper(*args, **kwargs):
                with self.timed(operation_name):
                    return func(*args, **kwargs)
            return wrapper
        return decorator

    @contextmanager
    def timed(self, operation_name: str) -> Iterator[Dict[str, float]]:
        """Time a block; the yielded dict receives 'seconds' on exit"""
        timing: Dict[str, float] = {}
        start_time = time.perf_counter()
        success = True
        try:
            yield timing
        except Exception:
            success = False
            raise
        finally:
            duration = time.perf_counter() - start_time
            timing['seconds'] = duration
            if self.enabled:
                self.metrics_collector.record_metric(operation_name, duration, success)
            if self.enabled and duration > self.threshold:
                logger.info(f"{operation_name} took {duration:.3f}s")


class ResourceMonitor:
    """Fans CPU-bound work out over a bounded worker pool"""

    def __init__(self, max_workers: int = 1, backend: str = 'loky',
                 batch_size: Any = 'auto',
                 metrics_collector: Optional[MetricsCollector] = None):
        self.max_workers = max(1, int(max_workers or 1))
        self.backend = backend
        self.batch_size = batch_size
        self.metrics_collector = metrics_collector or MetricsCollector()

    def map(self, func: Callable, items: Iterable, operation: str = 'map') -> List[Any]:
        """Apply func to every item; results keep input order"""
        items = list(items)
        start_time = time.perf_counter()
        success = True
        try:
            if self.max_workers == 1 or len(items) < 2:
                return [func(item) for item in items]
            return Parallel(n_jobs=self.max_workers, backend=self.backend,
                            batch_size=self.batch_size)(delayed(func)(item) for item in items)
        except Exception:
            success = False
            raise
        finally:
            self.metrics_collector.record_metric(
                operation,
                time.perf_counter() - start_time,
                success,
                {'items': len(items), 'workers': self.max_workers}
            )

    def imap(self, func: Callable, items: Iterable, operation: str = 'imap') -> Iterator[Any]:
        """Like map, but yields results in input order as they complete"""
        items = list(items)
        if self.max_workers == 1 or len(items) < 2:
            for item in items:
                yield func(item)
            return
        runner = Parallel(n_jobs=self.max_workers, backend=self.backend,
                          return_as='generator', batch_size=self.batch_size)
        yield from runner(delayed(func)(item) for item in items)
