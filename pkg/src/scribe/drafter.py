"""Rule-based C++ draft generation for one Fortran file.

The draft is a *preliminary* translation: declaration lines are rewritten
through an ordered type-rule table (arrays become FArray views over a
local buffer), every other statement is copied behind a `// fortran:`
marker, and structured `// scribe:` comments annotate external modules,
subroutines, and functions resolved through the project index. The draft
is not meant to compile; it anchors the model so it neither invents types
nor re-declares constructs that already exist elsewhere in the project.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import Diagnostic
from .fortran import LogicalLine, is_fixed_form, logical_lines, mask_string_literals
from .indexer import (
    FUNCTION_RE,
    SUBROUTINE_RE,
    ConstructKind,
    ConstructMap,
)

DRAFT_SUFFIX = ".scribe"
STATEMENT_MARKER = "// fortran: "
ANNOTATION_PREFIX = "// scribe: "

ANNOTATION_KINDS = (
    "external-function",
    "external-subroutine",
    "external-module",
    "statement-function-candidate",
    "unconverted-declaration",
)

USE_RE = re.compile(
    r"^use\b(?:\s*,\s*(?:non_intrinsic|intrinsic)\s*)?(?:\s*::\s*|\s+)([a-z][a-z0-9_]*)",
    re.IGNORECASE,
)
CALL_RE = re.compile(r"\bcall\s+([a-z][a-z0-9_]*)", re.IGNORECASE)
EXTERNAL_RE = re.compile(r"^external(?:\s*::\s*|\s+)(.+)$", re.IGNORECASE)
DIMENSION_RE = re.compile(r"^dimension(?:\s*::\s*|\s+)(.+)$", re.IGNORECASE)
NAME_RE = re.compile(r"^([a-z][a-z0-9_]*)", re.IGNORECASE)

# Type-spec that opens a declaration statement. Order matters: the two
# `double ...` spellings must win before bare `real`/`complex`.
_TYPE_SPEC = (
    r"double\s*precision|double\s*complex"
    r"|(?:integer|real|complex|logical|character)\s*(?:\*\s*(?:\d+|\(\s*\*\s*\))|\([^)]*\))?"
    r"|(?:type|class)\s*\([^)]*\)"
)
DECL_RE = re.compile(rf"^({_TYPE_SPEC})\s*(.*)$", re.IGNORECASE)

MAX_ARRAY_RANK = 4  # FArray1D..FArray4D


@dataclass
class TypeRule:
    """First-match rule mapping a Fortran type-spec to a C++ element type."""

    pattern: re.Pattern
    cpp_type: str


@dataclass
class TypeMapping:
    rules: list[TypeRule]

    def cpp_type_for(self, type_spec: str) -> str | None:
        for rule in self.rules:
            if rule.pattern.fullmatch(type_spec.strip()):
                return rule.cpp_type
        return None


def default_type_mapping() -> TypeMapping:
    """Conventional kind meanings: 8-byte reals, default integers, bool logicals."""
    def rule(pattern: str, cpp_type: str) -> TypeRule:
        return TypeRule(re.compile(pattern, re.IGNORECASE), cpp_type)

    return TypeMapping(
        rules=[
            rule(r"double\s*precision", "double"),
            rule(r"double\s*complex", "std::complex<double>"),
            rule(r"real\s*(?:\*\s*\d+|\([^)]*\))?", "double"),
            rule(r"complex\s*(?:\*\s*\d+|\([^)]*\))?", "std::complex<double>"),
            rule(r"integer\s*(?:\*\s*\d+|\([^)]*\))?", "int"),
            rule(r"logical\s*(?:\*\s*\d+|\([^)]*\))?", "bool"),
            rule(r"character\s*(?:\*\s*(?:\d+|\(\s*\*\s*\))|\([^)]*\))?", "std::string"),
        ]
    )


@dataclass
class DraftAnnotation:
    """Structured fact the draft states for the model, one comment line each."""

    kind: str  # one of ANNOTATION_KINDS
    name: str
    resolved_file: str | None
    line: int

    def comment(self) -> str:
        if self.resolved_file:
            text = f"{ANNOTATION_PREFIX}{self.kind} {self.name} defined in {self.resolved_file}"
        else:
            text = f"{ANNOTATION_PREFIX}{self.kind} {self.name} <unresolved>"
        if self.kind == "statement-function-candidate":
            text += "; convert to a local callable"
        return text


@dataclass
class DraftArtifact:
    source_file: Path
    draft_text: str
    annotations: list[DraftAnnotation] = field(default_factory=list)


@dataclass
class _Entity:
    """One declared entity: name plus optional array extents and initializer."""

    name: str
    extents: list[str] = field(default_factory=list)
    init: str | None = None
    parseable: bool = True


def _split_top_level(text: str) -> list[str]:
    """Split on commas outside parentheses."""
    parts: list[str] = []
    depth = 0
    cur: list[str] = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _parse_entity(text: str) -> _Entity | None:
    m = NAME_RE.match(text)
    if not m:
        return None
    name = m.group(1).lower()
    rest = text[m.end():].lstrip()
    extents: list[str] = []
    if rest.startswith("("):
        depth = 0
        for i, ch in enumerate(rest):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    extents = _split_top_level(rest[1:i])
                    rest = rest[i + 1:].lstrip()
                    break
        else:
            return _Entity(name=name, parseable=False)
    if rest.startswith("*"):  # old-style character length: name*8
        m_len = re.match(r"\*\s*(?:\d+|\(\s*\*\s*\))", rest)
        if not m_len:
            return _Entity(name=name, extents=extents, parseable=False)
        rest = rest[m_len.end():].lstrip()
    init = None
    if rest.startswith("=>"):
        init = rest[2:].strip()
        rest = ""
    elif rest.startswith("="):
        init = rest[1:].strip()
        rest = ""
    if rest.strip():
        return _Entity(name=name, extents=extents, parseable=False)
    return _Entity(name=name, extents=extents, init=init)


@dataclass
class _Declaration:
    type_spec: str
    attrs: list[str]
    entities: list[_Entity]

    @property
    def is_parameter(self) -> bool:
        return any(a.lower().startswith("parameter") for a in self.attrs)

    def dimension_extents(self) -> list[str]:
        for attr in self.attrs:
            m = re.match(r"dimension\s*\((.*)\)\s*$", attr, re.IGNORECASE)
            if m:
                return _split_top_level(m.group(1))
        return []


def parse_declaration(stmt: str) -> _Declaration | None:
    """Parse a typed declaration statement; None when stmt is not one."""
    m = DECL_RE.match(stmt)
    if not m:
        return None
    type_spec, rest = m.group(1), m.group(2).strip()
    attrs: list[str] = []
    if "::" in rest:
        head, entities_text = rest.split("::", 1)
        head = head.strip()
        if head.startswith(","):
            attrs = _split_top_level(head[1:])
        elif head:
            return None  # junk between type and :: — not a declaration
    else:
        if rest.startswith(","):
            return None  # attribute list without :: is not valid
        entities_text = rest
    if not entities_text.strip():
        return None
    entities = []
    for part in _split_top_level(entities_text):
        entity = _parse_entity(part)
        if entity is None:
            return None
        entities.append(entity)
    if not entities:
        return None
    return _Declaration(type_spec=type_spec, attrs=attrs, entities=entities)


def _concrete(extents: list[str]) -> bool:
    """Extents the FArray template can use: plain expressions, no ':' or '*'."""
    if not extents or len(extents) > MAX_ARRAY_RANK:
        return False
    return all(e and ":" not in e and "*" not in e for e in extents)


def _is_construct_opener(stmt: str) -> bool:
    return bool(SUBROUTINE_RE.match(stmt) or FUNCTION_RE.match(stmt))


def _collect_declared(lines: list[LogicalLine]):
    """Names declared in the file, split by how they were declared."""
    scalars: dict[str, int] = {}
    arrays: set[str] = set()
    externals: dict[str, int] = {}
    for ln in lines:
        if ln.kind != "code" or _is_construct_opener(ln.text):
            continue
        m = EXTERNAL_RE.match(ln.text)
        if m:
            for part in _split_top_level(m.group(1)):
                name_m = NAME_RE.match(part)
                if name_m:
                    externals.setdefault(name_m.group(1).lower(), ln.number)
            continue
        m = DIMENSION_RE.match(ln.text)
        if m:
            for part in _split_top_level(m.group(1)):
                entity = _parse_entity(part)
                if entity is not None:
                    arrays.add(entity.name)
            continue
        decl = parse_declaration(ln.text)
        if decl is None:
            continue
        dim_extents = decl.dimension_extents()
        for entity in decl.entities:
            if entity.extents or dim_extents:
                arrays.add(entity.name)
            else:
                scalars.setdefault(entity.name, ln.number)
    return scalars, arrays, externals


def _names_applied_to_arguments(lines: list[LogicalLine]) -> set[str]:
    """Identifiers used as name(...) in non-declaration, non-opener statements."""
    used: set[str] = set()
    for ln in lines:
        if ln.kind != "code":
            continue
        stmt = ln.text
        if _is_construct_opener(stmt):
            continue
        if parse_declaration(stmt) or EXTERNAL_RE.match(stmt) or DIMENSION_RE.match(stmt):
            continue
        masked = mask_string_literals(stmt)
        masked = CALL_RE.sub("", masked)  # call targets are subroutines, not functions
        for m in re.finditer(r"\b([a-z][a-z0-9_]*)\s*\(", masked, re.IGNORECASE):
            used.add(m.group(1).lower())
    return used


def detect_statement_functions(
    source_text: str, cmap: ConstructMap, fixed_form: bool = False
) -> list[DraftAnnotation]:
    """Flag scalar-declared identifiers that are applied to argument lists.

    Index-resolved names become external-function annotations pointing at
    their defining file; the rest are statement-function candidates that
    the model should turn into local callables. Names declared `external`
    are annotated as external functions whether or not the index knows them.
    """
    lines = logical_lines(source_text, fixed_form)
    scalars, arrays, externals = _collect_declared(lines)
    used = _names_applied_to_arguments(lines)

    annotations: list[DraftAnnotation] = []
    emitted: set[str] = set()
    for name, line in sorted(externals.items(), key=lambda kv: (kv[1], kv[0])):
        annotations.append(
            DraftAnnotation(
                kind="external-function",
                name=name,
                resolved_file=cmap.resolve(ConstructKind.FUNCTION, name),
                line=line,
            )
        )
        emitted.add(name)
    for name, line in sorted(scalars.items(), key=lambda kv: (kv[1], kv[0])):
        if name in emitted or name in arrays or name not in used:
            continue
        resolved = cmap.resolve(ConstructKind.FUNCTION, name)
        kind = "external-function" if resolved else "statement-function-candidate"
        annotations.append(
            DraftAnnotation(kind=kind, name=name, resolved_file=resolved, line=line)
        )
    annotations.sort(key=lambda a: (a.line, a.name))
    return annotations


def annotate_external_uses(
    source_text: str, cmap: ConstructMap, fixed_form: bool = False
) -> list[DraftAnnotation]:
    """One annotation per distinct used module and called subroutine."""
    annotations: list[DraftAnnotation] = []
    seen_modules: set[str] = set()
    seen_calls: set[str] = set()
    for ln in logical_lines(source_text, fixed_form):
        if ln.kind != "code":
            continue
        m = USE_RE.match(ln.text)
        if m:
            name = m.group(1).lower()
            if name not in seen_modules:
                seen_modules.add(name)
                annotations.append(
                    DraftAnnotation(
                        kind="external-module",
                        name=name,
                        resolved_file=cmap.resolve(ConstructKind.MODULE, name),
                        line=ln.number,
                    )
                )
            continue
        for call in CALL_RE.finditer(mask_string_literals(ln.text)):
            name = call.group(1).lower()
            if name in seen_calls:
                continue
            seen_calls.add(name)
            annotations.append(
                DraftAnnotation(
                    kind="external-subroutine",
                    name=name,
                    resolved_file=cmap.resolve(ConstructKind.SUBROUTINE, name),
                    line=ln.number,
                )
            )
    return annotations


def _render_scalar(cpp_type: str, entity: _Entity, const: bool) -> str:
    prefix = "const " if const else ""
    if entity.init is not None:
        return f"{prefix}{cpp_type} {entity.name} = {entity.init};"
    return f"{prefix}{cpp_type} {entity.name};"


def _render_array(cpp_type: str, entity: _Entity, extents: list[str]) -> list[str]:
    sizes = " * ".join(extents)
    args = ", ".join(extents)
    rank = len(extents)
    return [
        f"std::vector<{cpp_type}> {entity.name}_data({sizes});",
        f"FArray{rank}D<{cpp_type}> {entity.name}({entity.name}_data.data(), {args});",
    ]


class _DraftRenderer:
    """Renders logical lines into draft lines, tracking annotations and includes."""

    def __init__(self, mapping: TypeMapping, cmap: ConstructMap,
                 replacements: dict[str, DraftAnnotation],
                 use_call_annotations: dict[tuple[str, str], DraftAnnotation]):
        self.mapping = mapping
        self.cmap = cmap
        self.replacements = replacements
        self.use_call = use_call_annotations
        self.replaced_done: set[str] = set()
        self.use_call_done: set[tuple[str, str]] = set()
        self.extra_annotations: list[DraftAnnotation] = []
        self.needs_complex = False
        self.needs_string = False
        self.needs_farray = False
        self.lines: list[str] = []

    def marker(self, text: str) -> None:
        self.lines.append(f"{STATEMENT_MARKER}{text}")

    def unconverted(self, name: str, line_no: int) -> None:
        ann = DraftAnnotation("unconverted-declaration", name, None, line_no)
        self.extra_annotations.append(ann)
        self.lines.append(ann.comment())

    def render(self, lines: list[LogicalLine]) -> None:
        for ln in lines:
            if ln.kind == "blank":
                self.lines.append("")
            elif ln.kind == "comment":
                self.lines.append(f"//{ln.text}")
            elif ln.kind == "preproc":
                self.marker(ln.text)
            else:
                self.render_code(ln)

    def render_code(self, ln: LogicalLine) -> None:
        stmt = ln.text
        m = EXTERNAL_RE.match(stmt)
        if m:
            self.render_external(m.group(1), ln)
            return
        m = DIMENSION_RE.match(stmt)
        if m:
            parts = _split_top_level(m.group(1))
            entity = _parse_entity(parts[0]) if parts else None
            self.unconverted(entity.name if entity else "dimension", ln.number)
            self.marker(stmt)
            return
        m = USE_RE.match(stmt)
        if m:
            self.emit_use_call("external-module", m.group(1).lower())
            self.marker(stmt)
            return
        if not _is_construct_opener(stmt):
            decl = parse_declaration(stmt)
            if decl is not None:
                self.render_declaration(decl, stmt, ln.number)
                return
        for call in CALL_RE.finditer(mask_string_literals(stmt)):
            self.emit_use_call("external-subroutine", call.group(1).lower())
        self.marker(stmt)

    def emit_use_call(self, kind: str, name: str) -> None:
        key = (kind, name)
        ann = self.use_call.get(key)
        if ann is not None and key not in self.use_call_done:
            self.use_call_done.add(key)
            self.lines.append(ann.comment())

    def render_external(self, names_text: str, ln: LogicalLine) -> None:
        for part in _split_top_level(names_text):
            name_m = NAME_RE.match(part)
            if not name_m:
                continue
            name = name_m.group(1).lower()
            ann = self.replacements.get(name)
            if ann is not None and name not in self.replaced_done:
                self.replaced_done.add(name)
                self.lines.append(ann.comment())

    def render_declaration(self, decl: _Declaration, stmt: str, line_no: int) -> None:
        cpp_type = self.mapping.cpp_type_for(decl.type_spec)
        if cpp_type is None:
            first = decl.entities[0].name if decl.entities else "declaration"
            self.unconverted(first, line_no)
            self.marker(stmt)
            return
        dim_extents = decl.dimension_extents()
        const = decl.is_parameter
        unconvertible: list[_Entity] = []
        body: list[str] = []
        for entity in decl.entities:
            name = entity.name
            ann = self.replacements.get(name)
            if ann is not None:
                if name not in self.replaced_done:
                    self.replaced_done.add(name)
                    body.append(ann.comment())
                continue
            extents = entity.extents or dim_extents
            if not entity.parseable:
                unconvertible.append(entity)
            elif not extents:
                body.append(_render_scalar(cpp_type, entity, const))
                self.note_type(cpp_type)
            elif entity.init is not None:
                unconvertible.append(entity)  # array constructors need real translation
            elif _concrete(extents):
                body.extend(_render_array(cpp_type, entity, extents))
                self.note_type(cpp_type)
                self.needs_farray = True
            else:
                unconvertible.append(entity)
        for entity in unconvertible:
            self.unconverted(entity.name, line_no)
        self.lines.extend(body)
        if unconvertible:
            self.marker(stmt)

    def note_type(self, cpp_type: str) -> None:
        if cpp_type == "std::complex<double>":
            self.needs_complex = True
        elif cpp_type == "std::string":
            self.needs_string = True


def _include_block(renderer: _DraftRenderer) -> list[str]:
    includes = ["#include <cmath>"]
    if renderer.needs_complex:
        includes.append("#include <complex>")
    if renderer.needs_string:
        includes.append("#include <string>")
    if renderer.needs_farray:
        includes.append("#include <vector>")
        includes.append("")
        includes.append('#include "FArray.hpp"')
    return includes


def convert_declarations(source_text: str, mapping: TypeMapping,
                         fixed_form: bool = False) -> list[str]:
    """Naive per-line conversion with no index context (no annotations)."""
    renderer = _DraftRenderer(mapping, ConstructMap(), {}, {})
    renderer.render(logical_lines(source_text, fixed_form))
    return renderer.lines


def render_draft(
    filename: str,
    source_text: str,
    cmap: ConstructMap,
    mapping: TypeMapping | None = None,
) -> tuple[str, list[DraftAnnotation]]:
    """Compose declaration conversion with both annotation passes."""
    mapping = mapping or default_type_mapping()
    fixed = is_fixed_form(filename)
    func_annotations = detect_statement_functions(source_text, cmap, fixed)
    use_annotations = annotate_external_uses(source_text, cmap, fixed)
    replacements = {a.name: a for a in func_annotations}
    use_call = {(a.kind, a.name): a for a in use_annotations}

    renderer = _DraftRenderer(mapping, cmap, replacements, use_call)
    renderer.render(logical_lines(source_text, fixed))

    header = [f"// scribe draft: {Path(filename).name}", ""]
    parts = header + _include_block(renderer) + [""] + renderer.lines
    text = "\n".join(parts).rstrip("\n") + "\n"
    annotations = sorted(
        func_annotations + use_annotations + renderer.extra_annotations,
        key=lambda a: (a.line, a.kind, a.name),
    )
    return text, annotations


def draft_path(source: Path) -> Path:
    return source.with_name(source.stem + DRAFT_SUFFIX)


def generate_draft(
    file: Path,
    cmap: ConstructMap,
    mapping: TypeMapping | None = None,
    diagnostics: list[Diagnostic] | None = None,
) -> DraftArtifact:
    """Draft one file and write `<stem>.scribe` beside the source."""
    source_text = file.read_text(encoding="utf-8", errors="replace")
    text, annotations = render_draft(file.name, source_text, cmap, mapping)
    artifact = DraftArtifact(source_file=file, draft_text=text, annotations=annotations)
    target = draft_path(file)
    try:
        target.write_text(text, encoding="utf-8")
    except OSError as exc:
        if diagnostics is not None:
            diagnostics.append(Diagnostic("error", str(target), None, f"write failed: {exc}"))
        raise
    return artifact
