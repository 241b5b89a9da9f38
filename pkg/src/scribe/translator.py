"""Per-file translation pipeline: draft, prompt, complete, extract, write.

The model is instructed to return C++ inside <csource> tags and the
Fortran-C interface inside <fsource> tags. Extraction takes the first
block of each kind; a missing fsource is a warning (a known small-model
failure mode), a missing csource is an error that keeps the raw response
for manual salvage. Output writing is atomic: either every file for a
stem lands, or none do.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .drafter import TypeMapping, generate_draft
from .errors import BackendError, ExtractionError, OutputExistsError
from .gateway import BackendConfig, CompletionResponse, complete, complete_batch
from .indexer import ConstructMap
from .prompts import AssembledPrompt, ChatTemplate, assemble_translate_prompt

WARN_MISSING_FSOURCE = "missing-fsource: response carried no <fsource> block"
WARN_MULTIPLE_CSOURCE = "multiple-csource-blocks: kept the first"
WARN_MULTIPLE_FSOURCE = "multiple-fsource-blocks: kept the first"

_CSOURCE_RE = re.compile(r"<csource>(.*?)</csource>", re.DOTALL)
_FSOURCE_RE = re.compile(r"<fsource>(.*?)</fsource>", re.DOTALL)


@dataclass
class TranslationResult:
    source_file: Path
    csource: str
    fsource: str
    warnings: list[str] = field(default_factory=list)
    backend_meta: CompletionResponse | None = None
    written: list[Path] = field(default_factory=list)

    @property
    def stem(self) -> str:
        return Path(self.source_file).stem

    def report_entry(self) -> dict:
        finish = self.backend_meta.finish_reason if self.backend_meta else "manual"
        return {"stem": self.stem, "warnings": list(self.warnings), "finish_reason": finish}


def extract_tagged(response_text: str) -> tuple[str, str, list[str]]:
    """Pull the first <csource> and <fsource> blocks out of a model response."""
    warnings: list[str] = []
    csource_blocks = _CSOURCE_RE.findall(response_text)
    if not csource_blocks:
        raise ExtractionError(
            "response carried no <csource> block; raw text kept for manual salvage",
            raw_response=response_text,
        )
    if len(csource_blocks) > 1:
        warnings.append(WARN_MULTIPLE_CSOURCE)
    fsource_blocks = _FSOURCE_RE.findall(response_text)
    if not fsource_blocks:
        warnings.append(WARN_MISSING_FSOURCE)
        fsource = ""
    else:
        if len(fsource_blocks) > 1:
            warnings.append(WARN_MULTIPLE_FSOURCE)
        fsource = fsource_blocks[0]
    return csource_blocks[0], fsource, warnings


def output_paths(stem: str, out_dir: Path) -> tuple[Path, Path]:
    return out_dir / f"{stem}.cpp", out_dir / f"{stem}_fi.f90"


def write_outputs(
    stem: str, result: TranslationResult, out_dir: Path, force: bool = False
) -> list[Path]:
    """Write <stem>.cpp (always) and <stem>_fi.f90 (when fsource is non-empty).

    Existing files are never overwritten unless force is set; both targets
    are staged and renamed together so a failure leaves nothing partial.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cpp_path, fi_path = output_paths(stem, out_dir)
    targets: list[tuple[Path, str]] = [(cpp_path, result.csource)]
    if result.fsource:
        targets.append((fi_path, result.fsource))

    if not force:
        for target, _text in targets:
            if target.exists():
                raise OutputExistsError(
                    f"{target} already exists; re-run with --force to overwrite"
                )
    staged: list[tuple[Path, Path]] = []
    try:
        for target, text in targets:
            tmp = target.with_name(target.name + ".scribe-tmp")
            tmp.write_text(text, encoding="utf-8")
            staged.append((tmp, target))
        for tmp, target in staged:
            tmp.replace(target)
    except OSError:
        for tmp, _target in staged:
            tmp.unlink(missing_ok=True)
        raise
    written = [target for _tmp, target in staged]
    result.written = written
    return written


def build_prompt(
    file: Path,
    template: ChatTemplate,
    cmap: ConstructMap,
    mapping: TypeMapping | None = None,
) -> AssembledPrompt:
    """Draft the file (writing <stem>.scribe) and assemble its prompt."""
    source_text = file.read_text(encoding="utf-8", errors="replace")
    artifact = generate_draft(file, cmap, mapping)
    return assemble_translate_prompt(template, source_text, artifact.draft_text, file)


def _finish(
    file: Path,
    response: CompletionResponse,
    out_dir: Path,
    force: bool,
) -> TranslationResult:
    if response.backend == "export":
        return TranslationResult(
            source_file=file,
            csource="",
            fsource="",
            warnings=[response.text],
            backend_meta=response,
        )
    csource, fsource, warnings = extract_tagged(response.text)
    result = TranslationResult(
        source_file=file,
        csource=csource,
        fsource=fsource,
        warnings=warnings,
        backend_meta=response,
    )
    write_outputs(result.stem, result, out_dir, force=force)
    return result


def translate_file(
    file: Path,
    template: ChatTemplate,
    cfg: BackendConfig,
    cmap: ConstructMap,
    mapping: TypeMapping | None = None,
    out_dir: Path | None = None,
    force: bool = False,
) -> TranslationResult:
    """Run the whole pipeline for one file. With the mock backend this is a
    pure function of (file bytes, template, cmap)."""
    out_dir = Path(out_dir) if out_dir is not None else file.parent
    prompt = build_prompt(file, template, cmap, mapping)
    response = complete(prompt, cfg)
    return _finish(file, response, out_dir, force)


def translate_files(
    files: list[Path],
    template: ChatTemplate,
    cfg: BackendConfig,
    cmap: ConstructMap,
    mapping: TypeMapping | None = None,
    out_dir_for: Callable[[Path], Path] | None = None,
    force: bool = False,
) -> list[tuple[Path, TranslationResult | Exception]]:
    """Batch translation: prompts complete with bounded concurrency, outputs
    are written sequentially in input order. Per-file failures are isolated."""
    out_dir_for = out_dir_for or (lambda f: f.parent)
    prompts: list[AssembledPrompt | Exception] = []
    for file in files:
        try:
            prompts.append(build_prompt(file, template, cmap, mapping))
        except Exception as exc:
            prompts.append(exc)

    good = [p for p in prompts if isinstance(p, AssembledPrompt)]
    responses = iter(complete_batch(good, cfg) if good else [])

    results: list[tuple[Path, TranslationResult | Exception]] = []
    for file, prompt in zip(files, prompts):
        if isinstance(prompt, Exception):
            results.append((file, prompt))
            continue
        response = next(responses)
        if response.finish_reason == "error":
            results.append((file, BackendError(response.error or "backend error")))
            continue
        try:
            results.append((file, _finish(file, response, Path(out_dir_for(file)), force)))
        except Exception as exc:
            results.append((file, exc))
    return results


def resume(
    stem: str, pasted_response_path: Path, out_dir: Path, force: bool = False
) -> TranslationResult:
    """Finish a manual (export-mode) translation from a pasted model reply."""
    text = Path(pasted_response_path).read_text(encoding="utf-8", errors="replace")
    csource, fsource, warnings = extract_tagged(text)
    result = TranslationResult(
        source_file=Path(pasted_response_path),
        csource=csource,
        fsource=fsource,
        warnings=warnings,
    )
    write_outputs(stem, result, Path(out_dir), force=force)
    return result


def write_report(
    results: list[tuple[Path, TranslationResult | Exception]], path: Path
) -> None:
    """Machine-readable report: one JSON object per processed file."""
    with open(path, "w", encoding="utf-8") as fh:
        for file, outcome in results:
            if isinstance(outcome, TranslationResult):
                entry = outcome.report_entry()
            else:
                entry = {
                    "stem": Path(file).stem,
                    "warnings": [f"error: {outcome}"],
                    "finish_reason": "error",
                }
            fh.write(json.dumps(entry) + "\n")
