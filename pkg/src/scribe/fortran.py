"""Line-level handling of Fortran source: forms, comments, continuations.

Everything downstream (indexer, drafter) works on *logical lines*: comment
and blank lines kept as-is, statements joined across continuations and
split on semicolons. Fixed form (.f/.F) is column-sensitive; free form
(.f90/.F90) uses trailing/leading ampersands. Comment or blank lines may
sit between continuation lines; they are emitted after the statement they
interrupt so source order is otherwise preserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

# Recognized source extensions and their layout.
FIXED_FORM_SUFFIXES = (".f", ".F")
FREE_FORM_SUFFIXES = (".f90", ".F90")
FORTRAN_SUFFIXES = FIXED_FORM_SUFFIXES + FREE_FORM_SUFFIXES

FIXED_COMMENT_CHARS = ("c", "C", "*", "!")

IDENTIFIER_RE = re.compile(r"[a-z][a-z0-9_]*", re.IGNORECASE)


@dataclass
class LogicalLine:
    """One logical unit of source after preprocessing.

    kind is "code", "comment", "preproc", or "blank". For code, text holds
    the continuation-joined, comment-stripped statement; for comments the
    text after the comment marker; for preproc the raw directive line.
    """

    number: int  # 1-based line number of the first physical line
    kind: str
    text: str


def is_fortran_file(path: Path | str) -> bool:
    """True when the path carries a recognized Fortran extension (case matters)."""
    return Path(path).suffix in FORTRAN_SUFFIXES


def is_fixed_form(path: Path | str) -> bool:
    return Path(path).suffix in FIXED_FORM_SUFFIXES


def strip_inline_comment(line: str) -> str:
    """Drop a trailing ! comment, respecting single- and double-quoted strings."""
    in_single = False
    in_double = False
    for i, ch in enumerate(line):
        if ch == "'" and not in_double:
            in_single = not in_single
        elif ch == '"' and not in_single:
            in_double = not in_double
        elif ch == "!" and not in_single and not in_double:
            return line[:i]
    return line


def mask_string_literals(text: str) -> str:
    """Blank out quoted content (keeping length) so keyword scans skip it."""
    out: list[str] = []
    in_single = False
    in_double = False
    for ch in text:
        if ch == "'" and not in_double:
            in_single = not in_single
            out.append(ch)
        elif ch == '"' and not in_single:
            in_double = not in_double
            out.append(ch)
        elif in_single or in_double:
            out.append(" ")
        else:
            out.append(ch)
    return "".join(out)


def split_statements(code: str) -> list[str]:
    """Split semicolon-separated statements, respecting quoted strings."""
    out: list[str] = []
    cur: list[str] = []
    in_single = False
    in_double = False
    for ch in code:
        if ch == "'" and not in_double:
            in_single = not in_single
        elif ch == '"' and not in_single:
            in_double = not in_double
        if ch == ";" and not in_single and not in_double:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s for s in (seg.strip() for seg in out) if s]


def _classify_nonfixed(line: str) -> tuple[str, str] | None:
    """Blank/comment/preproc classification shared by both forms."""
    stripped = line.strip()
    if not stripped:
        return ("blank", "")
    if stripped.startswith("!"):
        return ("comment", stripped[1:])
    if stripped.startswith("#"):
        return ("preproc", stripped)
    return None


def _classify_fixed(line: str) -> tuple[str, str] | None:
    if not line.strip():
        return ("blank", "")
    if line[0] in FIXED_COMMENT_CHARS:
        return ("comment", line[1:])
    return _classify_nonfixed(line)


def _is_fixed_continuation(line: str) -> bool:
    return len(line) >= 6 and line[5] not in (" ", "0")


def _fixed_code(line: str) -> str:
    return strip_inline_comment(line[6:] if len(line) > 6 else "")


def _fixed_form_lines(lines: list[str]) -> list[LogicalLine]:
    out: list[LogicalLine] = []
    i = 0
    while i < len(lines):
        line = lines[i].rstrip("\r\n")
        classified = _classify_fixed(line)
        if classified:
            out.append(LogicalLine(i + 1, *classified))
            i += 1
            continue
        start = i + 1
        segments = [_fixed_code(line)]
        held: list[LogicalLine] = []
        j = i + 1
        while j < len(lines):
            nxt = lines[j].rstrip("\r\n")
            interrupting = _classify_fixed(nxt)
            if interrupting:
                held.append(LogicalLine(j + 1, *interrupting))
                j += 1
                continue
            if _is_fixed_continuation(nxt):
                segments.append(_fixed_code(nxt))
                j += 1
                continue
            break
        joined = " ".join(seg.strip() for seg in segments if seg.strip())
        for stmt in split_statements(joined):
            out.append(LogicalLine(start, "code", stmt))
        out.extend(held)
        i = j
    return out


def _free_form_lines(lines: list[str]) -> list[LogicalLine]:
    out: list[LogicalLine] = []
    i = 0
    while i < len(lines):
        line = lines[i].rstrip("\r\n")
        classified = _classify_nonfixed(line)
        if classified:
            out.append(LogicalLine(i + 1, *classified))
            i += 1
            continue
        start = i + 1
        code = strip_inline_comment(line).strip()
        need_more = code.endswith("&")
        segments = [code[:-1].rstrip() if need_more else code]
        held: list[LogicalLine] = []
        j = i + 1
        while need_more and j < len(lines):
            nxt = lines[j].rstrip("\r\n")
            interrupting = _classify_nonfixed(nxt)
            if interrupting:
                held.append(LogicalLine(j + 1, *interrupting))
                j += 1
                continue
            code = strip_inline_comment(nxt).strip()
            if code.startswith("&"):
                code = code[1:].lstrip()
            need_more = code.endswith("&")
            if need_more:
                code = code[:-1].rstrip()
            if code:
                segments.append(code)
            j += 1
        joined = " ".join(seg for seg in segments if seg)
        for stmt in split_statements(joined):
            out.append(LogicalLine(start, "code", stmt))
        out.extend(held)
        i = j
    return out


def logical_lines(source_text: str, fixed_form: bool) -> list[LogicalLine]:
    """Preprocess raw source into logical lines for recognition."""
    lines = source_text.splitlines()
    if fixed_form:
        return _fixed_form_lines(lines)
    return _free_form_lines(lines)


def code_statements(source_text: str, fixed_form: bool) -> list[LogicalLine]:
    """Only the code-kind logical lines (what the construct recognizer consumes)."""
    return [ln for ln in logical_lines(source_text, fixed_form) if ln.kind == "code"]
