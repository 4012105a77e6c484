from typing import Any, List, Optional, Sequence


def validate_index(value: Any, size: int, label: str) -> List[str]:
    """Validate a single element index"""
    errors = []
    if not isinstance(value, (int,)) and not hasattr(value, '__index__'):
        errors.append(f"{label} must be an integer index, got {value!r}")
    elif not 0 <= int(value) < size:
        errors.append(f"{label} index {value} is out of range 0..{size - 1}")
    return errors


def validate_index_vector(values: Sequence[Any], size: int, label: str,
                          expected_length: Optional[int] = None) -> List[str]:
    """Validate a unary table (length and entry range)"""
    errors = []
    length = size if expected_length is None else expected_length
    if len(values) != length:
        errors.append(f"{label} has {len(values)} entries, expected {length}")
    for position, value in enumerate(values):
        errors.extend(validate_index(value, size, f"{label}[{position}]"))
    return errors


def validate_square_table(rows: Sequence[Sequence[Any]], size: int, label: str) -> List[str]:
    """Validate an n x n binary operation table"""
    return validate_rect_table(rows, size, size, size, label)


def validate_rect_table(rows: Sequence[Sequence[Any]], height: int, width: int,
                        value_range: int, label: str) -> List[str]:
    """Validate a height x width table whose entries index a carrier of value_range elements"""
    errors = []
    if len(rows) != height:
        errors.append(f"{label} has {len(rows)} rows, expected {height}")
    for r, row in enumerate(rows):
        if len(row) != width:
            errors.append(f"{label} row {r} has {len(row)} entries, expected {width}")
            continue
        for c, value in enumerate(row):
            errors.extend(validate_index(value, value_range, f"{label}[{r}][{c}]"))
    return errors
