from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from source.layers.utils.validation import (
    validate_index,
    validate_index_vector,
    validate_square_table,
)
from .exceptions import InputError

INDEX_DTYPE = np.int64


def frozen_table(values, shape: Tuple[int, ...], bound: int, label: str) -> np.ndarray:
    """Read-only integer table of the given shape with entries in 0..bound-1"""
    try:
        array = np.array(values, dtype=INDEX_DTYPE)
    except (TypeError, ValueError) as e:
        raise InputError(f"{label} is not a rectangular integer table", {'table': label}) from e
    if array.shape != shape:
        raise InputError(
            f"{label} has shape {array.shape}, expected {shape}",
            {'table': label, 'shape': list(array.shape)}
        )
    if array.size and (array.min() < 0 or array.max() >= bound):
        position = tuple(int(i) for i in np.argwhere((array < 0) | (array >= bound))[0])
        raise InputError(
            f"{label}{list(position)} = {int(array[position])} is out of range 0..{bound - 1}",
            {'table': label, 'position': list(position)}
        )
    array.setflags(write=False)
    return array


def _same(left: Optional[np.ndarray], right: Optional[np.ndarray]) -> bool:
    if left is None or right is None:
        return left is None and right is None
    return np.array_equal(left, right)


@dataclass(frozen=True, eq=False)
class AlgebraTable:
    """A finite semiring or pointed residuated join-semilattice given by tables.

    Elements are the indices 0..size-1. ``lres[x, z]`` holds x\\z and
    ``rres[z, y]`` holds z/y. Equality is literal table equality; the name
    and display names are cosmetic and ignored.
    """
    name: str
    size: int
    join: np.ndarray
    mult: np.ndarray
    one: int
    zero: Optional[int] = None
    lneg: Optional[np.ndarray] = None
    rneg: Optional[np.ndarray] = None
    display: Optional[Tuple[str, ...]] = None
    meet: Optional[np.ndarray] = None
    lres: Optional[np.ndarray] = None
    rres: Optional[np.ndarray] = None

    BINARY_TABLES = ('join', 'mult', 'meet', 'lres', 'rres')
    UNARY_TABLES = ('lneg', 'rneg')

    def __post_init__(self):
        n = self.size
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise InputError(f"size must be a positive integer, got {n!r}")
        object.__setattr__(self, 'size', int(n))
        for label in self.BINARY_TABLES:
            value = getattr(self, label)
            if value is not None:
                object.__setattr__(self, label, frozen_table(value, (n, n), n, label))
        for label in self.UNARY_TABLES:
            value = getattr(self, label)
            if value is not None:
                object.__setattr__(self, label, frozen_table(value, (n,), n, label))
        for label in ('one', 'zero'):
            value = getattr(self, label)
            if value is None:
                continue
            errors = validate_index(value, n, label)
            if errors:
                raise InputError(errors[0], {'errors': errors})
            object.__setattr__(self, label, int(value))
        if self.display is not None:
            if len(self.display) != n:
                raise InputError(f"display has {len(self.display)} names, expected {n}")
            object.__setattr__(self, 'display', tuple(str(d) for d in self.display))

    @classmethod
    def from_lists(cls, name: str, join: Sequence[Sequence[int]], mult: Sequence[Sequence[int]],
                   one: int, zero: Optional[int] = None,
                   lneg: Optional[Sequence[int]] = None, rneg: Optional[Sequence[int]] = None,
                   display: Optional[Sequence[str]] = None, **derived) -> 'AlgebraTable':
        """Build from nested lists, collecting every malformed entry before failing"""
        size = len(join)
        errors = validate_square_table(join, size, 'join') + validate_square_table(mult, size, 'mult')
        for label, vector in (('lneg', lneg), ('rneg', rneg)):
            if vector is not None:
                errors.extend(validate_index_vector(vector, size, label))
        for label, table in derived.items():
            if table is not None:
                errors.extend(validate_square_table(table, size, label))
        if errors:
            raise InputError(f"{name}: {errors[0]}", {'errors': errors})
        return cls(name=name, size=size, join=join, mult=mult, one=one, zero=zero,
                   lneg=lneg, rneg=rneg,
                   display=tuple(display) if display is not None else None, **derived)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraTable):
            return NotImplemented
        if (self.size, self.one, self.zero) != (other.size, other.one, other.zero):
            return False
        return all(_same(getattr(self, label), getattr(other, label))
                   for label in self.BINARY_TABLES + self.UNARY_TABLES)

    def __hash__(self) -> int:
        return hash((self.size, self.one, self.zero, self.join.tobytes(), self.mult.tobytes()))

    def __repr__(self) -> str:
        return f"AlgebraTable({self.name!r}, size={self.size})"

    @property
    def has_negations(self) -> bool:
        return self.lneg is not None and self.rneg is not None

    def element_name(self, x: int) -> str:
        return self.display[x] if self.display is not None else str(x)

    def index_of(self, label: str) -> int:
        """Resolve a display name or a decimal index"""
        if self.display is not None and label in self.display:
            return self.display.index(label)
        try:
            value = int(label)
        except ValueError:
            raise InputError(f"{self.name} has no element named {label!r}")
        if not 0 <= value < self.size:
            raise InputError(f"{self.name} has no element {value}")
        return value

    def with_(self, **changes) -> 'AlgebraTable':
        return replace(self, **changes)

    def irl_reduct(self) -> 'AlgebraTable':
        """Residuated presentation only: join, mult, one, zero"""
        return replace(self, lneg=None, rneg=None, meet=None, lres=None, rres=None)

    def invsr_reduct(self) -> 'AlgebraTable':
        """Semiring presentation only: join, mult, one, zero, negations"""
        return replace(self, meet=None, lres=None, rres=None)

    def permuted(self, perm: Sequence[int], name: Optional[str] = None) -> 'AlgebraTable':
        """Relabelled copy in which old element x becomes perm[x]"""
        perm = np.asarray(perm, dtype=INDEX_DTYPE)
        if sorted(perm.tolist()) != list(range(self.size)):
            raise InputError(f"not a permutation of 0..{self.size - 1}: {perm.tolist()}")
        inverse = np.argsort(perm)

        def binary(table):
            return None if table is None else perm[table[np.ix_(inverse, inverse)]]

        def unary(table):
            return None if table is None else perm[table[inverse]]

        return AlgebraTable(
            name=name or self.name,
            size=self.size,
            join=binary(self.join),
            mult=binary(self.mult),
            one=int(perm[self.one]),
            zero=None if self.zero is None else int(perm[self.zero]),
            lneg=unary(self.lneg),
            rneg=unary(self.rneg),
            display=None if self.display is None else tuple(self.display[i] for i in inverse),
            meet=binary(self.meet),
            lres=binary(self.lres),
            rres=binary(self.rres),
        )

    def to_lists(self) -> Dict:
        data = {'name': self.name, 'size': self.size, 'one': self.one, 'zero': self.zero,
                'display': list(self.display) if self.display is not None else None}
        for label in self.BINARY_TABLES + self.UNARY_TABLES:
            table = getattr(self, label)
            data[label] = table.tolist() if table is not None else None
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> 'AlgebraTable':
        """Inverse of to_lists (used for worker results and checkpoints)"""
        derived = {label: data.get(label) for label in ('meet', 'lres', 'rres') if data.get(label) is not None}
        return cls.from_lists(data['name'], data['join'], data['mult'], data['one'],
                              zero=data.get('zero'), lneg=data.get('lneg'), rneg=data.get('rneg'),
                              display=data.get('display'), **derived)


@dataclass(frozen=True)
class Poset:
    """Finite partial order as a read-only boolean matrix, leq[x, y] iff x <= y"""
    size: int
    leq: np.ndarray = field(compare=False)

    def __post_init__(self):
        leq = np.array(self.leq, dtype=bool)
        if leq.shape != (self.size, self.size):
            raise InputError(f"leq has shape {leq.shape}, expected {(self.size, self.size)}")
        leq.setflags(write=False)
        object.__setattr__(self, 'leq', leq)

    def lt(self, x: int, y: int) -> bool:
        return x != y and bool(self.leq[x, y])

    def below(self, x: int) -> List[int]:
        return [int(y) for y in np.flatnonzero(self.leq[:, x])]

    def above(self, x: int) -> List[int]:
        return [int(y) for y in np.flatnonzero(self.leq[x, :])]

    def is_partial_order(self) -> bool:
        leq = self.leq
        reflexive = bool(np.all(np.diag(leq)))
        antisymmetric = not np.any(leq & leq.T & ~np.eye(self.size, dtype=bool))
        composed = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
        transitive = not np.any(composed & ~leq)
        return reflexive and antisymmetric and transitive


@dataclass(frozen=True, order=True)
class CanonicalKey:
    """Byte encoding shared exactly by isomorphic algebras"""
    encoding: bytes

    def hex(self) -> str:
        return self.encoding.hex()

    def __repr__(self) -> str:
        return f"CanonicalKey({self.encoding[:12].hex()}...)"
