"""Chat templates and prompt assembly.

Templates are TOML files with an ordered `[[messages]]` array of tables,
each carrying `role` and `content`. Assembly never mutates the template:
it appends exactly one user message holding the tagged payloads. The tag
protocol has no escape mechanism, so assembly refuses payloads containing
a closing tag literal.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .drafter import annotate_external_uses, detect_statement_functions
from .errors import PayloadCollisionError, TemplateError
from .fortran import is_fixed_form
from .indexer import ConstructMap

ROLES = ("system", "user", "assistant")

SOURCE_TAG = "source"
DRAFT_TAG = "draft"
CSOURCE_TAG = "csource"
FSOURCE_TAG = "fsource"

TRANSLATE_INSTRUCTION = (
    "Translate the Fortran source above into C++, using the draft as the "
    "starting point and honoring its scribe annotations. Return the complete "
    "C++ source enclosed in <csource>...</csource> and the matching Fortran-C "
    "interface enclosed in <fsource>...</fsource>."
)

INSPECT_SYSTEM_MESSAGE = (
    "You are assisting a developer who is studying legacy Fortran source "
    "code. Answer the query using only the provided files and the index "
    "context. Do not invent modules, subroutines, or functions that are not "
    "listed, and do not generate code unless the query asks for it."
)


@dataclass
class ChatMessage:
    role: str
    content: str


@dataclass
class ChatTemplate:
    name: str
    messages: list[ChatMessage]


@dataclass
class AssembledPrompt:
    """A template plus one appended user message carrying tagged payloads."""

    messages: list[ChatMessage]
    source_file: Path

    def last_content(self) -> str:
        return self.messages[-1].content


def wrap_payload(tag: str, payload: str) -> str:
    """Wrap payload in <tag>...</tag>, refusing un-extractable content."""
    closing = f"</{tag}>"
    if closing in payload:
        raise PayloadCollisionError(
            f"payload contains the literal '{closing}'; the tag protocol "
            "cannot escape it"
        )
    return f"<{tag}>{payload}{closing}"


def extract_payload(tag: str, text: str) -> str | None:
    """Content of the first <tag>...</tag> block, byte-exact; None if absent."""
    open_tag, close_tag = f"<{tag}>", f"</{tag}>"
    start = text.find(open_tag)
    if start < 0:
        return None
    start += len(open_tag)
    end = text.find(close_tag, start)
    if end < 0:
        return None
    return text[start:end]


def load_template(path: Path) -> ChatTemplate:
    """Load and validate a TOML chat template."""
    try:
        data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise TemplateError(f"template file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise TemplateError(f"malformed TOML in {path}: {exc}")

    raw_messages = data.get("messages")
    if not isinstance(raw_messages, list) or not raw_messages:
        raise TemplateError(f"{path}: expected a non-empty [[messages]] array")
    messages: list[ChatMessage] = []
    for i, entry in enumerate(raw_messages):
        key = f"messages[{i}]"
        if not isinstance(entry, dict):
            raise TemplateError(f"{path}: {key} is not a table")
        role = entry.get("role")
        content = entry.get("content")
        if role not in ROLES:
            raise TemplateError(f"{path}: {key}.role must be one of {ROLES}, got {role!r}")
        if not isinstance(content, str) or not content:
            raise TemplateError(f"{path}: {key}.content must be a non-empty string")
        messages.append(ChatMessage(role=role, content=content))
    if messages[0].role != "system":
        raise TemplateError(f"{path}: messages[0].role must be 'system'")
    return ChatTemplate(name=Path(path).stem, messages=messages)


def assemble_translate_prompt(
    template: ChatTemplate, source_text: str, draft_text: str, source_file: Path
) -> AssembledPrompt:
    """Template messages plus one user message: source, draft, instructions."""
    payload = "\n\n".join(
        [
            wrap_payload(SOURCE_TAG, source_text),
            wrap_payload(DRAFT_TAG, draft_text),
            TRANSLATE_INSTRUCTION,
        ]
    )
    messages = list(template.messages) + [ChatMessage(role="user", content=payload)]
    return AssembledPrompt(messages=messages, source_file=Path(source_file))


def _resolved_references(label: str, text: str, cmap: ConstructMap) -> list[str]:
    """Index-resolved externals the file refers to, as 'kind name (path)'."""
    fixed = is_fixed_form(label)
    kind_word = {
        "external-function": "function",
        "external-module": "module",
        "external-subroutine": "subroutine",
    }
    refs: dict[tuple[str, str], str] = {}
    annotations = detect_statement_functions(text, cmap, fixed) + annotate_external_uses(
        text, cmap, fixed
    )
    for ann in annotations:
        word = kind_word.get(ann.kind)
        if word and ann.resolved_file:
            refs[(word, ann.name)] = ann.resolved_file
    return [f"{word} {name} ({path})" for (word, name), path in sorted(refs.items())]


def format_index_context(files: list[tuple[str, str]], cmap: ConstructMap) -> str:
    """Human-readable index facts for the given files.

    Lists each file's own constructs plus the externals it uses that the
    index resolves. Nothing here is invented: every name carries the file
    the index attributes it to, and unindexed files are marked rather than
    omitted.
    """
    lines = ["Index context:"]
    for label, text in files:
        posix = label.replace("\\", "/")
        directory, _, filename = posix.rpartition("/")
        directory = directory or "."
        found = cmap.constructs_for(directory, filename)
        if any(found.values()):
            parts = [
                f"{kind}: {', '.join(names)}"
                for kind, names in found.items()
                if names
            ]
            lines.append(f"- {posix}: " + "; ".join(parts))
        else:
            lines.append(f"- {posix}: not indexed")
        refs = _resolved_references(posix, text, cmap)
        if refs:
            lines.append("  uses: " + "; ".join(refs))
    return "\n".join(lines)


def assemble_inspect_prompt(
    query: str, files: list[tuple[str, str]], cmap: ConstructMap
) -> AssembledPrompt:
    """Inspection prompt: each file in <source> tags, index context, query."""
    if not files:
        raise ValueError("inspect needs at least one file")
    blocks = []
    for label, text in files:
        blocks.append(f"File: {label}\n{wrap_payload(SOURCE_TAG, text)}")
    payload = "\n\n".join(blocks + [format_index_context(files, cmap), f"Query: {query}"])
    messages = [
        ChatMessage(role="system", content=INSPECT_SYSTEM_MESSAGE),
        ChatMessage(role="user", content=payload),
    ]
    return AssembledPrompt(messages=messages, source_file=Path(files[0][0]))


def prompt_to_payload(prompt: AssembledPrompt) -> dict:
    return {
        "messages": [
            {"role": m.role, "content": m.content} for m in prompt.messages
        ]
    }


def export_json(prompt: AssembledPrompt, path: Path) -> Path:
    """Write the prompt as JSON suitable for pasting into a chat interface."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(prompt_to_payload(prompt), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    return path


def load_exported_json(path: Path) -> list[ChatMessage]:
    """Re-read an exported prompt; inverse of export_json."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [ChatMessage(role=m["role"], content=m["content"]) for m in data["messages"]]
