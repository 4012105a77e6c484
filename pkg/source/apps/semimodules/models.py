from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, List, Optional, Tuple

import numpy as np

from source.apps.core.exceptions import InputError
from source.apps.core.models import AlgebraTable, frozen_table
from source.apps.core.services import Report
from source.apps.core.tables import first_violation, least_element


@dataclass(frozen=True, eq=False)
class SemimoduleTable:
    """A finite join-semilattice with zero and an action of ``over``.

    ``action[a, x]`` holds a.x.
    """
    name: str
    over: AlgebraTable
    size: int
    join: np.ndarray
    zero: int
    action: np.ndarray
    display: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        m = self.size
        if not isinstance(m, (int, np.integer)) or m < 1:
            raise InputError(f"{self.name}: size must be a positive integer, got {m!r}")
        object.__setattr__(self, 'size', int(m))
        object.__setattr__(self, 'join', frozen_table(self.join, (m, m), m, 'join'))
        object.__setattr__(self, 'action', frozen_table(self.action, (self.over.size, m), m, 'action'))
        if not 0 <= int(self.zero) < m:
            raise InputError(f"{self.name}: zero {self.zero} is out of range 0..{m - 1}")
        object.__setattr__(self, 'zero', int(self.zero))
        if self.display is not None:
            if len(self.display) != m:
                raise InputError(f"{self.name}: display has {len(self.display)} names, expected {m}")
            object.__setattr__(self, 'display', tuple(str(d) for d in self.display))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SemimoduleTable):
            return NotImplemented
        return (self.size == other.size and self.zero == other.zero
                and self.over == other.over
                and np.array_equal(self.join, other.join)
                and np.array_equal(self.action, other.action))

    def __hash__(self) -> int:
        return hash((self.size, self.zero, self.join.tobytes(), self.action.tobytes()))

    def __repr__(self) -> str:
        return f"SemimoduleTable({self.name!r} over {self.over.name!r}, size={self.size})"

    def element_name(self, x: int) -> str:
        return self.display[x] if self.display is not None else str(x)

    @property
    def is_trivial(self) -> bool:
        return self.size == 1


@dataclass(frozen=True)
class IdealSet:
    """An ideal of a finite join-semilattice as a bit-set over its carrier"""
    size: int
    members: int
    of: Any = field(default=None, compare=False, repr=False)

    @classmethod
    def from_elements(cls, size: int, elements: Iterable[int], of: Any = None) -> 'IdealSet':
        members = 0
        for x in elements:
            members |= 1 << int(x)
        return cls(size, members, of)

    @classmethod
    def from_mask(cls, mask: np.ndarray, of: Any = None) -> 'IdealSet':
        return cls.from_elements(len(mask), np.flatnonzero(mask), of)

    def __contains__(self, x: int) -> bool:
        return bool(self.members >> int(x) & 1)

    def __len__(self) -> int:
        return bin(self.members).count('1')

    def elements(self) -> List[int]:
        return [x for x in range(self.size) if self.members >> x & 1]

    def mask(self) -> np.ndarray:
        return np.array([self.members >> x & 1 for x in range(self.size)], dtype=bool)


class HomKind(str, Enum):
    SEMILATTICE = 'semilattice'
    MODULE = 'module'


def zero_of(structure: Any) -> int:
    zero = getattr(structure, 'zero', None)
    if isinstance(structure, SemimoduleTable):
        return structure.zero
    bottom = least_element(structure)
    return bottom if bottom is not None else zero


@dataclass(frozen=True)
class HomMap:
    """A total map dom -> cod; kind says which preservation laws it claims"""
    dom: Any = field(compare=False, repr=False)
    cod: Any = field(compare=False, repr=False)
    map: Tuple[int, ...]
    kind: HomKind = HomKind.MODULE

    def __post_init__(self):
        values = tuple(int(v) for v in self.map)
        if len(values) != self.dom.size:
            raise InputError(f"map has {len(values)} entries, domain has {self.dom.size}")
        if any(not 0 <= v < self.cod.size for v in values):
            raise InputError(f"map values must lie in 0..{self.cod.size - 1}")
        object.__setattr__(self, 'map', values)

    def __call__(self, x: int) -> int:
        return self.map[x]

    def as_array(self) -> np.ndarray:
        return np.array(self.map, dtype=np.int64)

    def compose(self, inner: 'HomMap') -> 'HomMap':
        """self after inner"""
        kind = HomKind.MODULE if self.kind == inner.kind == HomKind.MODULE else HomKind.SEMILATTICE
        return HomMap(inner.dom, self.cod, tuple(self.map[v] for v in inner.map), kind)

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_bijective(self) -> bool:
        return self.is_injective() and self.dom.size == self.cod.size

    def inverse(self) -> 'HomMap':
        if not self.is_bijective():
            raise InputError("only bijections have inverses")
        values = [0] * self.cod.size
        for x, y in enumerate(self.map):
            values[y] = x
        return HomMap(self.cod, self.dom, tuple(values), self.kind)

    def is_identity(self) -> bool:
        return self.map == tuple(range(self.dom.size))

    def check(self) -> Report:
        """Verify the preservation laws the kind claims"""
        f = self.as_array()
        witness = first_violation(f[self.dom.join] != self.cod.join[f[:, None], f[None, :]])
        if witness is not None:
            return Report.failed_with('hom', f"join not preserved at {witness}", witness, details={'law': 'join'})
        if f[zero_of(self.dom)] != zero_of(self.cod):
            return Report.failed_with('hom', "zero not preserved", (zero_of(self.dom),), details={'law': 'zero'})
        if self.kind == HomKind.MODULE:
            witness = first_violation(f[self.dom.action] != self.cod.action[:, f])
            if witness is not None:
                return Report.failed_with('hom', f"action not preserved at {witness}", witness,
                                          details={'law': 'action'})
        return Report.passed('hom')


def identity_hom(structure: Any) -> HomMap:
    kind = HomKind.MODULE if isinstance(structure, SemimoduleTable) else HomKind.SEMILATTICE
    return HomMap(structure, structure, tuple(range(structure.size)), kind)
