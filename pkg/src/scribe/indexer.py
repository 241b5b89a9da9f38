"""Fortran source-tree indexing: per-directory construct indexes plus the
project-wide inverse map from construct names to defining files.

The recognizer is deliberately line-oriented: it identifies module,
subroutine, and function declarations (top-level and contained) without
attempting semantic analysis. Names are normalized to lowercase because
Fortran identifiers are case-insensitive.
"""

from __future__ import annotations

import enum
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import Diagnostic
from .fortran import code_statements, is_fixed_form, is_fortran_file

INDEX_FILENAME = ".scribe-index.yaml"

# Procedure prefixes: pure/elemental/etc. and, for functions, a leading
# type-spec such as `real(dp)`, `double precision`, or `character*(*)`.
_PROC_ATTRS = r"(?:pure|elemental|impure|recursive|non_recursive|module)"
_TYPE_SPEC = (
    r"(?:(?:type|class)\s*\([^)]*\)"
    r"|double\s+precision|double\s+complex"
    r"|(?:integer|real|complex|logical|character)\s*(?:\*\s*(?:\d+|\(\s*\*\s*\))|\([^)]*\))?)"
)

SUBROUTINE_RE = re.compile(
    rf"^(?:{_PROC_ATTRS}\s+)*subroutine\s+([a-z][a-z0-9_]*)", re.IGNORECASE
)
FUNCTION_RE = re.compile(
    rf"^(?:{_PROC_ATTRS}\s+|{_TYPE_SPEC}\s+)*function\s+([a-z][a-z0-9_]*)",
    re.IGNORECASE,
)
MODULE_RE = re.compile(r"^module\s+([a-z][a-z0-9_]*)\s*$", re.IGNORECASE)
INTERFACE_RE = re.compile(r"^(?:abstract\s+)?interface\b", re.IGNORECASE)
END_INTERFACE_RE = re.compile(r"^end\s*interface\b", re.IGNORECASE)

# Names that follow `module` but do not open a module.
_NOT_MODULE_NAMES = {"procedure", "function", "subroutine"}


class ConstructKind(str, enum.Enum):
    MODULE = "module"
    SUBROUTINE = "subroutine"
    FUNCTION = "function"


@dataclass
class FileConstructs:
    """Constructs declared in one Fortran source file (names lowercase, sorted)."""

    filename: str
    modules: list[str] = field(default_factory=list)
    subroutines: list[str] = field(default_factory=list)
    functions: list[str] = field(default_factory=list)

    def names(self, kind: ConstructKind) -> list[str]:
        return {
            ConstructKind.MODULE: self.modules,
            ConstructKind.SUBROUTINE: self.subroutines,
            ConstructKind.FUNCTION: self.functions,
        }[kind]

    def to_mapping(self) -> dict:
        return {
            "modules": list(self.modules),
            "subroutines": list(self.subroutines),
            "functions": list(self.functions),
        }

    @classmethod
    def from_mapping(cls, filename: str, data: dict) -> "FileConstructs":
        return cls(
            filename=filename,
            modules=list(data.get("modules") or []),
            subroutines=list(data.get("subroutines") or []),
            functions=list(data.get("functions") or []),
        )


@dataclass
class DirectoryIndex:
    """Index of the Fortran files directly inside one directory."""

    root: str
    directory: str  # relative to root, "." for the root itself
    files: dict[str, FileConstructs] = field(default_factory=dict)

    def to_mapping(self) -> dict:
        return {
            "root": self.root,
            "directory": self.directory,
            "files": {name: fc.to_mapping() for name, fc in sorted(self.files.items())},
        }

    @classmethod
    def from_mapping(cls, data: dict) -> "DirectoryIndex":
        files = {
            name: FileConstructs.from_mapping(name, entry)
            for name, entry in (data.get("files") or {}).items()
        }
        return cls(root=data["root"], directory=data["directory"], files=files)


@dataclass
class ConstructMap:
    """Inverse dictionary: (kind, name) -> locations where the construct is defined.

    Duplicate definitions are preserved as multi-entries; they surface as
    diagnostics rather than being collapsed silently.
    """

    entries: dict[tuple[ConstructKind, str], list[tuple[str, str]]] = field(
        default_factory=dict
    )

    def lookup(self, kind: ConstructKind, name: str) -> list[tuple[str, str]]:
        """All (directory, filename) pairs defining name; [] when undefined."""
        return list(self.entries.get((ConstructKind(kind), name.lower()), []))

    def resolve(self, kind: ConstructKind, name: str) -> str | None:
        """Root-relative path of the first definition, or None when unresolved."""
        locations = self.lookup(kind, name)
        if not locations:
            return None
        return location_path(*locations[0])

    def constructs_for(self, directory: str, filename: str) -> dict[str, list[str]]:
        """Constructs the map attributes to one file, grouped by kind."""
        found: dict[str, list[str]] = {"modules": [], "subroutines": [], "functions": []}
        plural = {
            ConstructKind.MODULE: "modules",
            ConstructKind.SUBROUTINE: "subroutines",
            ConstructKind.FUNCTION: "functions",
        }
        for (kind, name), locations in self.entries.items():
            if (directory, filename) in locations:
                found[plural[kind]].append(name)
        for names in found.values():
            names.sort()
        return found

    def duplicates(self) -> list[Diagnostic]:
        """One warning per construct defined in more than one file."""
        out: list[Diagnostic] = []
        for (kind, name), locations in sorted(self.entries.items()):
            if len(locations) > 1:
                places = ", ".join(location_path(d, f) for d, f in locations)
                out.append(
                    Diagnostic(
                        severity="warning",
                        path=places.split(", ")[0],
                        line=None,
                        message=f"duplicate definition of {kind.value} '{name}' in {places}",
                    )
                )
        return out


def location_path(directory: str, filename: str) -> str:
    """Join an index location into a root-relative POSIX path."""
    if directory in (".", ""):
        return filename
    return f"{directory}/{filename}"


def scan_file(
    filename: str, source_text: str, diagnostics: list[Diagnostic] | None = None
) -> FileConstructs:
    """Collect module/subroutine/function declarations from one source file.

    Interface blocks contribute declarations, not definitions, so their
    contents are skipped. Statement functions never match the `function`
    keyword grammar and are therefore not indexed.
    """
    fc = FileConstructs(filename=filename)
    seen: dict[ConstructKind, set[str]] = {k: set() for k in ConstructKind}
    interface_depth = 0
    try:
        statements = code_statements(source_text, is_fixed_form(filename))
    except Exception as exc:  # pragma: no cover - recognizer never raises by design
        if diagnostics is not None:
            diagnostics.append(
                Diagnostic("error", filename, None, f"parse failure: {exc}")
            )
        return fc

    for ln in statements:
        stmt = ln.text
        if END_INTERFACE_RE.match(stmt):
            interface_depth = max(0, interface_depth - 1)
            continue
        if INTERFACE_RE.match(stmt):
            interface_depth += 1
            continue
        if interface_depth > 0:
            continue
        low = stmt.lower()
        if low.startswith("end"):
            continue
        m = SUBROUTINE_RE.match(stmt)
        if m:
            seen[ConstructKind.SUBROUTINE].add(m.group(1).lower())
            continue
        m = FUNCTION_RE.match(stmt)
        if m:
            seen[ConstructKind.FUNCTION].add(m.group(1).lower())
            continue
        m = MODULE_RE.match(stmt)
        if m and m.group(1).lower() not in _NOT_MODULE_NAMES:
            seen[ConstructKind.MODULE].add(m.group(1).lower())

    fc.modules = sorted(seen[ConstructKind.MODULE])
    fc.subroutines = sorted(seen[ConstructKind.SUBROUTINE])
    fc.functions = sorted(seen[ConstructKind.FUNCTION])
    return fc


def read_source(path: Path, diagnostics: list[Diagnostic] | None = None) -> str | None:
    """Read 8-bit-clean source text; None (plus a diagnostic) when unreadable."""
    try:
        data = path.read_bytes()
    except OSError as exc:
        if diagnostics is not None:
            diagnostics.append(Diagnostic("error", str(path), None, f"read failed: {exc}"))
        return None
    if b"\x00" in data:
        if diagnostics is not None:
            line = data[: data.index(b"\x00")].count(b"\n") + 1
            diagnostics.append(
                Diagnostic("error", str(path), line, "binary content (NUL byte); not Fortran text")
            )
        return None
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        return data.decode("latin-1")


def index_directory(
    dir_path: Path, root: Path, diagnostics: list[Diagnostic] | None = None
) -> DirectoryIndex:
    """Index the Fortran files directly inside dir_path (non-recursive)."""
    rel = Path(os.path.relpath(dir_path, root)).as_posix()
    index = DirectoryIndex(root=str(root), directory=rel)
    for entry in sorted(dir_path.iterdir()):
        if not entry.is_file() or not is_fortran_file(entry):
            continue
        text = read_source(entry, diagnostics)
        if text is None:
            continue
        index.files[entry.name] = scan_file(entry.name, text, diagnostics)
    return index


def write_index(index: DirectoryIndex, dir_path: Path) -> Path:
    """Write the per-directory YAML index; byte-stable for unchanged input."""
    target = dir_path / INDEX_FILENAME
    text = yaml.safe_dump(
        index.to_mapping(), sort_keys=False, default_flow_style=False, allow_unicode=True
    )
    target.write_text(text, encoding="utf-8")
    return target


def load_index(path: Path) -> DirectoryIndex:
    """Read one YAML index file back into a DirectoryIndex."""
    data = yaml.safe_load(path.read_text(encoding="utf-8"))
    return DirectoryIndex.from_mapping(data)


def build_construct_map(indexes: list[DirectoryIndex]) -> ConstructMap:
    """Invert directory indexes into a (kind, name) -> files dictionary."""
    cmap = ConstructMap()
    for index in indexes:
        for filename, fc in sorted(index.files.items()):
            for kind in ConstructKind:
                for name in fc.names(kind):
                    cmap.entries.setdefault((kind, name), []).append(
                        (index.directory, filename)
                    )
    for locations in cmap.entries.values():
        locations.sort()
    return cmap


def index_tree(
    root: Path, diagnostics: list[Diagnostic] | None = None
) -> tuple[list[DirectoryIndex], ConstructMap]:
    """Walk the tree, write one YAML index per directory holding Fortran sources.

    Returns all written indexes plus the aggregate inverse map. Directories
    without Fortran files directly inside them get no index file.
    """
    indexes: list[DirectoryIndex] = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        if not any(is_fortran_file(name) for name in filenames):
            continue
        index = index_directory(Path(dirpath), root, diagnostics)
        write_index(index, Path(dirpath))
        indexes.append(index)
    indexes.sort(key=lambda ix: ix.directory)
    return indexes, build_construct_map(indexes)


def load_tree_indexes(root: Path) -> list[DirectoryIndex]:
    """Load every previously written index file under root."""
    indexes = []
    for path in sorted(root.rglob(INDEX_FILENAME)):
        indexes.append(load_index(path))
    indexes.sort(key=lambda ix: ix.directory)
    return indexes
