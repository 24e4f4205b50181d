"""Plain-text matrix files.

One row per line, entries separated by whitespace.  An entry is ``a``,
``a+bi``, ``a-bi`` or ``bi`` where ``a`` and ``b`` are decimal or
scientific literals.  ``#`` starts a comment; blank lines are skipped.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import ParseError, RaggedRows

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_ENTRY = re.compile(
    rf"""
    (?P<re>[+-]?{_NUM})?            # real part
    (?:
        (?P<im>(?(re)[+-]|[+-]?){_NUM})i   # imaginary part, sign mandatory after a real part
    )?
    """,
    re.VERBOSE,
)
_TOKEN = re.compile(r"\S+")

DIGITS = 17


def parse_entry(token: str) -> complex:
    """Parse one scalar; raises ``ValueError`` on anything outside the grammar."""
    m = _ENTRY.fullmatch(token)
    if m is None or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"not a complex literal: {token!r}")
    re_part = float(m.group("re")) if m.group("re") else 0.0
    im_part = float(m.group("im")) if m.group("im") else 0.0
    return complex(re_part, im_part)


def parse_matrix(text: str) -> np.ndarray:
    """Parse matrix text into a 2-D complex128 array.

    Raises :class:`ParseError` (with 1-based line and column) for a bad
    entry or an empty document and :class:`RaggedRows` when rows differ
    in length.
    """
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        row = []
        for tok in _TOKEN.finditer(line):
            try:
                row.append(parse_entry(tok.group()))
            except ValueError:
                raise ParseError(f"bad entry {tok.group()!r}", lineno, tok.start() + 1) from None
        if not row:
            continue
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise RaggedRows(f"row has {len(row)} entries, expected {width}", lineno, 1)
        rows.append(row)
    if not rows:
        raise ParseError("no matrix rows found", 1, 1)
    return np.array(rows, dtype=np.complex128)


def format_entry(z: complex, digits: int = DIGITS) -> str:
    """``a``, ``a+bi`` or ``a-bi`` with ``digits`` significant digits per part."""
    z = complex(z)
    re_s = f"{z.real:.{digits}g}"
    if z.imag == 0.0:
        return re_s
    im_s = f"{z.imag:.{digits}g}"
    sign = "" if im_s.startswith("-") else "+"
    return f"{re_s}{sign}{im_s}i"


def emit_matrix(a, digits: int = DIGITS) -> str:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError("expected a 2-D array")
    return "".join(" ".join(format_entry(z, digits) for z in row) + "\n" for row in a)


def read_matrix(path) -> np.ndarray:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return parse_matrix(text)
    except ParseError as exc:
        exc.path = str(path)
        raise


def write_matrix(path, a, comment: str | None = None) -> None:
    head = "".join(f"# {c}\n" for c in comment.splitlines()) if comment else ""
    Path(path).write_text(head + emit_matrix(a), encoding="utf-8")
