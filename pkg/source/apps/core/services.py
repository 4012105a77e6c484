import json
import logging
import traceback
from abc import ABC, abstractmethod
from datetime import datetime
from typing import Any, Dict, Generic, List, Optional, Tuple, TypeVar

from .exceptions import InputError

logger = logging.getLogger(__name__)

T = TypeVar('T')

CHECK = 'check'
VALUE = 'value'


class Report(Generic[T]):
    """Verdict of a check (pass/fail) or a computed value, with witness on failure"""

    def __init__(self, success: bool, data: Optional[T] = None,
                 error: Optional[str] = None, witness: Optional[Tuple] = None,
                 certificate: Any = None, details: Optional[Dict] = None,
                 name: str = '', kind: str = CHECK):
        self.success = success
        self.data = data
        self.error = error
        self.witness = tuple(int(w) if _is_int(w) else w for w in witness) if witness is not None else None
        self.certificate = certificate
        self.details = details or {}
        self.name = name
        self.kind = kind
        self.timestamp = datetime.now()

    @classmethod
    def passed(cls, name: str = '', data: Optional[T] = None, **kwargs) -> 'Report[T]':
        return cls(True, data, name=name, **kwargs)

    @classmethod
    def failed_with(cls, name: str, error: str, witness: Optional[Tuple] = None,
                    **kwargs) -> 'Report[T]':
        return cls(False, error=error, witness=witness, name=name, **kwargs)

    @classmethod
    def value(cls, name: str, data: T, **kwargs) -> 'Report[T]':
        return cls(True, data, name=name, kind=VALUE, **kwargs)

    @property
    def failed(self) -> bool:
        return not self.success

    @property
    def verdict(self) -> str:
        if self.kind == VALUE:
            return 'value'
        return 'pass' if self.success else 'fail'

    def __bool__(self) -> bool:
        return self.success

    def __repr__(self) -> str:
        suffix = f', witness={self.witness}' if self.witness is not None else ''
        return f'Report({self.name or "?"}: {self.verdict}{suffix})'

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'verdict': self.verdict,
            'success': self.success,
            'data': to_jsonable(self.data),
            'error': self.error,
            'witness': to_jsonable(self.witness),
            'details': to_jsonable(self.details),
            'certificate': to_jsonable(self.certificate),
            'timestamp': self.timestamp.isoformat()
        }


def _is_int(value: Any) -> bool:
    return hasattr(value, '__index__') and not isinstance(value, bool)


def to_jsonable(value: Any) -> Any:
    """Convert numpy values, tuples, sets, tables, homs and reports into JSON values"""
    if value is None or isinstance(value, (bool, str, float)):
        return value
    if _is_int(value):
        return int(value)
    if isinstance(value, Report):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(to_jsonable(v) for v in value)
    if hasattr(value, 'to_lists'):
        return value.to_lists()
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    if hasattr(value, 'as_array'):
        return value.as_array().tolist()
    if hasattr(value, 'tolist'):
        return value.tolist()
    if hasattr(value, 'name'):
        return str(value.name)
    return str(value)


class BaseService(ABC):
    """Base service class with error bookkeeping and prefixed caching"""

    def __init__(self, cache_manager=None):
        self.errors: List[Dict[str, Any]] = []
        self._cache_prefix = self.__class__.__name__
        self.cache_manager = cache_manager

    def add_error(self, error: str, error_type: str = 'general',
                  details: Optional[Dict] = None) -> None:
        """Add detailed error information"""
        error_info = {
            'message': error,
            'type': error_type,
            'timestamp': datetime.now().isoformat(),
            'traceback': traceback.format_exc(),
            'details': to_jsonable(details or {})
        }
        self.errors.append(error_info)
        logger.error(f"Service error: {json.dumps(error_info)}")

    def has_errors(self) -> bool:
        return bool(self.errors)

    def validate(self, data: Dict[str, Any]) -> Report[bool]:
        """Run the service-specific input validation"""
        try:
            self._validate(data)
            return Report(True, True, name='validate-input')
        except InputError as e:
            self.add_error(str(e), 'validation_error', {'fields': list(data.keys())})
            return Report(False, False, str(e), name='validate-input', details=e.details)

    @abstractmethod
    def _validate(self, data: Dict[str, Any]) -> None:
        pass

    def get_cached(self, key: str, creator=None) -> Any:
        """Get (or create) a cached value with service-specific prefix"""
        full_key = f"{self._cache_prefix}:{key}"
        if self.cache_manager is None:
            return creator() if creator is not None else None
        return self.cache_manager.get_or_create(full_key, creator)


class LoggingService:
    """Structured logging with context"""

    @classmethod
    def log(cls, level: str, message: str,
            extra: Optional[Dict[str, Any]] = None,
            exc_info: bool = False) -> None:
        try:
            log_data = {
                'message': message,
                'timestamp': datetime.now().isoformat(),
                'context': to_jsonable(extra or {}),
            }
            if exc_info:
                log_data['traceback'] = traceback.format_exc()

            getattr(logger, level.lower())(
                json.dumps(log_data),
                extra={'structured': True}
            )
        except Exception as e:
            logger.error(f"Logging failed: {str(e)}")

    @classmethod
    def log_debug(cls, message: str, **kwargs) -> None:
        cls.log('DEBUG', message, **kwargs)

    @classmethod
    def log_info(cls, message: str, **kwargs) -> None:
        cls.log('INFO', message, **kwargs)

