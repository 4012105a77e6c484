"""Plain-text block format for algebras and semimodules.

    algebra NAME            semimodule NAME over ALGNAME
    size N                  size M
    elements n0 n1 ...      join      (M rows)
    join      (N rows)      zero I
    mult      (N rows)      action    (|A| rows, row a column x = a.x)
    one I                   end
    zero I
    lneg i0 ... / rneg i0 ...
    meet / lres / rres      (optional, N rows each)
    end

Whitespace separates tokens and ``#`` starts a comment.
"""
import logging
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from source.apps.core.exceptions import InputError
from source.apps.core.models import AlgebraTable
from source.apps.semimodules.models import SemimoduleTable
from source.layers.utils.validation import validate_index, validate_index_vector

logger = logging.getLogger(__name__)

Structure = Union[AlgebraTable, SemimoduleTable]

ALGEBRA_KEYWORDS = ('size', 'elements', 'join', 'mult', 'one', 'zero', 'lneg', 'rneg', 'meet', 'lres', 'rres')
SEMIMODULE_KEYWORDS = ('size', 'elements', 'join', 'zero', 'action')
MATRIX_KEYWORDS = ('join', 'mult', 'meet', 'lres', 'rres', 'action')
VECTOR_KEYWORDS = ('lneg', 'rneg')
REQUIRED = {
    'algebra': ('size', 'join', 'mult', 'one'),
    'semimodule': ('size', 'join', 'zero', 'action'),
}


class _Cursor:
    """Non-empty lines with comments removed, each with its 1-based line number"""

    def __init__(self, text: str):
        self.lines: List[Tuple[int, List[str]]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            tokens = raw.split('#', 1)[0].split()
            if tokens:
                self.lines.append((number, tokens))
        self.position = 0

    def at_end(self) -> bool:
        return self.position >= len(self.lines)

    def peek(self) -> Tuple[int, List[str]]:
        return self.lines[self.position]

    def next(self) -> Tuple[int, List[str]]:
        line = self.lines[self.position]
        self.position += 1
        return line

    @property
    def last_line(self) -> int:
        return self.lines[-1][0] if self.lines else 0


def _error(line: int, message: str, **details) -> InputError:
    return InputError(f"line {line}: {message}", dict(details, line=line))


def _integers(line: int, tokens: Sequence[str], label: str) -> List[int]:
    values = []
    for t in tokens:
        try:
            values.append(int(t))
        except ValueError:
            raise _error(line, f"{label} expects integer indices, got {t!r}")
    return values


def _single(line: int, keyword: str, args: Sequence[str]) -> int:
    if len(args) != 1:
        raise _error(line, f"{keyword} takes exactly one value, got {len(args)}")
    return _integers(line, args, keyword)[0]


def _read_matrix(cursor: _Cursor, keyword: str, line: int, height: int, width: int,
                 value_range: int) -> List[List[int]]:
    rows = []
    for r in range(height):
        if cursor.at_end():
            raise _error(line, f"{keyword} has {r} rows, expected {height}")
        row_line, tokens = cursor.peek()
        if not tokens[0].lstrip('-').isdigit():
            raise _error(row_line, f"{keyword} has {r} rows, expected {height}")
        cursor.next()
        row = _integers(row_line, tokens, keyword)
        errors = validate_index_vector(row, value_range, f"{keyword} row {r}", expected_length=width)
        if errors:
            raise _error(row_line, errors[0])
        rows.append(row)
    return rows


def _header(line: int, tokens: List[str], algebras: Mapping[str, AlgebraTable]) -> Tuple[str, str, Optional[AlgebraTable]]:
    kind = tokens[0]
    if kind == 'algebra':
        if len(tokens) != 2:
            raise _error(line, "expected 'algebra NAME'")
        return kind, tokens[1], None
    if kind == 'semimodule':
        if len(tokens) != 4 or tokens[2] != 'over':
            raise _error(line, "expected 'semimodule NAME over ALGNAME'")
        over = algebras.get(tokens[3])
        if over is None:
            raise _error(line, f"semimodule {tokens[1]} is over unknown algebra {tokens[3]!r}",
                         known=sorted(algebras))
        return kind, tokens[1], over
    raise _error(line, f"unknown keyword {kind!r}; a block starts with 'algebra' or 'semimodule'")


def _read_block(cursor: _Cursor, kind: str, name: str, start: int,
                over: Optional[AlgebraTable]) -> Dict:
    allowed = ALGEBRA_KEYWORDS if kind == 'algebra' else SEMIMODULE_KEYWORDS
    fields: Dict = {}
    size = None
    while True:
        if cursor.at_end():
            raise _error(start, f"{kind} {name} is missing 'end'")
        line, tokens = cursor.next()
        keyword, args = tokens[0], tokens[1:]
        if keyword == 'end':
            if args:
                raise _error(line, "'end' takes no values")
            break
        if keyword not in allowed:
            raise _error(line, f"unknown keyword {keyword!r} in {kind} {name}")
        if keyword in fields:
            raise _error(line, f"{keyword} given twice")
        if keyword == 'size':
            size = _single(line, keyword, args)
            if size < 1:
                raise _error(line, f"size must be positive, got {size}")
            fields['size'] = size
            continue
        if size is None:
            raise _error(line, f"{keyword} before size")
        if keyword == 'elements':
            if len(args) != size:
                raise _error(line, f"elements lists {len(args)} names, expected {size}")
            fields['elements'] = list(args)
        elif keyword in MATRIX_KEYWORDS:
            if args:
                raise _error(line, f"{keyword} rows start on the next line")
            height = over.size if keyword == 'action' else size
            fields[keyword] = _read_matrix(cursor, keyword, line, height, size, size)
        elif keyword in VECTOR_KEYWORDS:
            vector = _integers(line, args, keyword)
            errors = validate_index_vector(vector, size, keyword)
            if errors:
                raise _error(line, errors[0])
            fields[keyword] = vector
        else:
            value = _single(line, keyword, args)
            errors = validate_index(value, size, keyword)
            if errors:
                raise _error(line, errors[0])
            fields[keyword] = value
    missing = [k for k in REQUIRED[kind] if k not in fields]
    if missing:
        raise _error(start, f"{kind} {name} is missing {missing[0]!r}", missing=missing)
    return fields


def _build(kind: str, name: str, start: int, fields: Dict, over: Optional[AlgebraTable]) -> Structure:
    try:
        if kind == 'algebra':
            derived = {k: fields[k] for k in ('meet', 'lres', 'rres') if k in fields}
            return AlgebraTable.from_lists(name, fields['join'], fields['mult'], fields['one'],
                                           zero=fields.get('zero'), lneg=fields.get('lneg'),
                                           rneg=fields.get('rneg'), display=fields.get('elements'), **derived)
        display = fields.get('elements')
        return SemimoduleTable(name=name, over=over, size=fields['size'], join=fields['join'],
                               zero=fields['zero'], action=fields['action'],
                               display=tuple(display) if display is not None else None)
    except InputError as e:
        raise _error(start, f"{kind} {name}: {e.message}", **e.details)


def parse(text: str, known: Optional[Iterable[AlgebraTable]] = None) -> List[Structure]:
    """Every block in text, in order; semimodules may refer to earlier algebras or to known ones"""
    cursor = _Cursor(text)
    algebras: Dict[str, AlgebraTable] = {a.name: a for a in known or ()}
    parsed: List[Structure] = []
    while not cursor.at_end():
        start, tokens = cursor.next()
        kind, name, over = _header(start, tokens, algebras)
        structure = _build(kind, name, start, _read_block(cursor, kind, name, start, over), over)
        if isinstance(structure, AlgebraTable):
            algebras[name] = structure
        parsed.append(structure)
    if not parsed:
        raise InputError("no algebra or semimodule found", {'line': cursor.last_line})
    logger.debug(f"parsed {len(parsed)} blocks")
    return parsed


def _matrix_lines(keyword: str, table) -> List[str]:
    width = max(len(str(int(table.max()))), 1) if table.size else 1
    return [keyword] + ['  ' + ' '.join(str(int(v)).rjust(width) for v in row) for row in table]


def _checked_names(structure: Structure) -> None:
    for label in [structure.name] + list(structure.display or ()):
        if not label or any(c.isspace() or c == '#' for c in label):
            raise InputError(f"{label!r} cannot be written as a single token", {'structure': structure.name})


def emit(structure: Structure) -> str:
    """One block; parse(emit(x)) reproduces the tables, constants and display names"""
    _checked_names(structure)
    if isinstance(structure, SemimoduleTable):
        lines = [f"semimodule {structure.name} over {structure.over.name}", f"size {structure.size}"]
        if structure.display is not None:
            lines.append('elements ' + ' '.join(structure.display))
        lines += _matrix_lines('join', structure.join)
        lines.append(f"zero {structure.zero}")
        lines += _matrix_lines('action', structure.action)
        return '\n'.join(lines + ['end']) + '\n'
    a = structure
    lines = [f"algebra {a.name}", f"size {a.size}"]
    if a.display is not None:
        lines.append('elements ' + ' '.join(a.display))
    lines += _matrix_lines('join', a.join)
    lines += _matrix_lines('mult', a.mult)
    lines.append(f"one {a.one}")
    if a.zero is not None:
        lines.append(f"zero {a.zero}")
    for label in ('lneg', 'rneg'):
        vector = getattr(a, label)
        if vector is not None:
            lines.append(f"{label} " + ' '.join(str(int(v)) for v in vector))
    for label in ('meet', 'lres', 'rres'):
        table = getattr(a, label)
        if table is not None:
            lines += _matrix_lines(label, table)
    return '\n'.join(lines + ['end']) + '\n'


def emit_document(structures: Sequence[Structure]) -> str:
    """Blocks separated by blank lines, each semimodule preceded by its algebra"""
    blocks: List[str] = []
    written: List[AlgebraTable] = []
    for s in structures:
        if isinstance(s, SemimoduleTable) and not any(w.name == s.over.name and w == s.over for w in written):
            blocks.append(emit(s.over))
            written.append(s.over)
        if isinstance(s, AlgebraTable):
            if any(w.name == s.name and w == s for w in written):
                continue
            written.append(s)
        blocks.append(emit(s))
    return '\n'.join(blocks)
