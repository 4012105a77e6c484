import re
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

FILTER_PATTERN = re.compile(r'^(?P<name>[a-z_]+)(?::(?P<arg>\d+))?(?:=(?P<value>true|false))?$')


class AlgebraClass(str, Enum):
    IDEMPOTENT_SEMIRING = 'idempotent-semiring'
    ONE_BOUNDED_IDEMPOTENT = '1-bounded-idempotent'
    INVOLUTIVE_SEMIRING = 'involutive-semiring'
    ONE_BOUNDED_INVOLUTIVE = '1-bounded-involutive'
    POINTED_RESIDUATED = 'pointed-residuated'

    @property
    def one_bounded(self) -> bool:
        return self in (AlgebraClass.ONE_BOUNDED_IDEMPOTENT, AlgebraClass.ONE_BOUNDED_INVOLUTIVE)

    @property
    def involutive(self) -> bool:
        return self in (AlgebraClass.INVOLUTIVE_SEMIRING, AlgebraClass.ONE_BOUNDED_INVOLUTIVE)


class SearchSpec(BaseModel):
    """What enumerate_algebras generates: a class, a size bound, predicate filters"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    max_size: int = Field(ge=1)
    algebra_class: AlgebraClass = Field(alias='class')
    filters: Tuple[str, ...] = ()
    limit: Optional[int] = Field(default=None, ge=0)
    nondistributive_only: bool = False

    @field_validator('filters', mode='before')
    @classmethod
    def _check_filters(cls, value) -> Tuple[str, ...]:
        if isinstance(value, str):
            value = [value]
        filters = tuple(str(f).strip() for f in value or ())
        for f in filters:
            if not FILTER_PATTERN.match(f):
                raise ValueError(f"malformed filter {f!r}; expected name[:n][=true|false]")
        return filters

    def parsed_filters(self) -> List[Tuple[str, bool]]:
        """(predicate name with argument, expected verdict) pairs"""
        parsed = []
        for f in self.filters:
            match = FILTER_PATTERN.match(f)
            name = match['name'] + (f":{match['arg']}" if match['arg'] else '')
            parsed.append((name, match['value'] != 'false'))
        return parsed

    def key(self) -> str:
        """Stable identity for checkpoints"""
        return (f"{self.algebra_class.value}|{self.max_size}|{','.join(self.filters)}"
                f"|{int(self.nondistributive_only)}")
