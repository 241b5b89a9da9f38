"""Command-line surface: index, inspect, draft, translate, resume.

Exit codes: 0 full success, 1 when any per-file step failed, 2 for
configuration problems (bad flags, missing template, unindexed tree).
Progress and warnings go to standard error; results go to standard
output or files.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from . import __version__
from .config import (
    apply_backend_overrides,
    load_backend_config,
    load_translate_defaults,
)
from .drafter import generate_draft
from .errors import ConfigError, Diagnostic, ExtractionError, ScribeError
from .fortran import is_fortran_file
from .gateway import BackendConfig
from .indexer import (
    ConstructMap,
    build_construct_map,
    index_tree,
    load_tree_indexes,
)
from .inspector import InspectionRequest, inspect
from .prompts import load_template
from .translator import TranslationResult, resume as resume_outputs, translate_files, write_report

BACKEND_CHOICES = click.Choice(["remote", "local", "export", "mock"])


def _echo_diagnostics(diagnostics: list[Diagnostic]) -> None:
    for diag in diagnostics:
        click.echo(str(diag), err=True)


def _config_fail(message: str) -> "SystemExit":
    click.echo(f"error: {message}", err=True)
    return SystemExit(2)


def _load_cmap(root: Path) -> ConstructMap:
    indexes = load_tree_indexes(root)
    if not indexes:
        raise _config_fail(
            f"no index found under {root}; run `scribe index {root}` first"
        )
    return build_construct_map(indexes)


def _indexed_files(root: Path) -> list[Path]:
    files = []
    for index in load_tree_indexes(root):
        base = root if index.directory == "." else root / index.directory
        for filename in sorted(index.files):
            files.append(base / filename)
    return files


def _backend_from_flags(root: Path, backend: str | None, model: str | None,
                        export_dir: str | None) -> BackendConfig:
    cfg = load_backend_config(root)
    return apply_backend_overrides(cfg, kind=backend, model=model, export_path=export_dir)


@click.group()
@click.version_option(version=__version__, prog_name="scribe")
def cli() -> None:
    """Assisted translation of legacy Fortran trees to C++."""


@cli.command("index")
@click.argument("root", type=click.Path(exists=True, file_okay=False, path_type=Path),
                default=".")
def cmd_index(root: Path) -> None:
    """Write a construct index file into every directory holding Fortran sources."""
    diagnostics: list[Diagnostic] = []
    indexes, cmap = index_tree(root, diagnostics)
    _echo_diagnostics(diagnostics)
    _echo_diagnostics(cmap.duplicates())
    total_files = sum(len(ix.files) for ix in indexes)
    click.echo(f"indexed {len(indexes)} directories, {total_files} files", err=True)
    if any(d.severity == "error" for d in diagnostics):
        raise SystemExit(1)


@cli.command("draft")
@click.argument("files", nargs=-1, type=click.Path(exists=True, dir_okay=False,
                                                   path_type=Path))
@click.option("--root", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=".", show_default=True, help="Project root holding the index.")
def cmd_draft(files: tuple[Path, ...], root: Path) -> None:
    """Generate annotated .scribe drafts (all indexed files when none are named)."""
    cmap = _load_cmap(root)
    targets = list(files) if files else _indexed_files(root)
    failures = 0
    for file in targets:
        if not is_fortran_file(file):
            click.echo(f"skipping {file}: not a recognized Fortran extension", err=True)
            continue
        try:
            artifact = generate_draft(file, cmap)
        except (OSError, ScribeError) as exc:
            click.echo(f"draft failed for {file}: {exc}", err=True)
            failures += 1
            continue
        click.echo(f"drafted {file} ({len(artifact.annotations)} annotations)", err=True)
    if failures:
        raise SystemExit(1)


@cli.command("inspect")
@click.argument("files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--query", "-q", required=True, help="Question to ask about the files.")
@click.option("--root", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=".", show_default=True)
@click.option("--backend", type=BACKEND_CHOICES, default=None,
              help="Override the configured backend.")
@click.option("--model", default=None, help="Override the configured model name.")
@click.option("--export", "export_path",
              type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the assembled prompt JSON here instead of querying.")
def cmd_inspect(files: tuple[Path, ...], query: str, root: Path,
                backend: str | None, model: str | None,
                export_path: Path | None) -> None:
    """Ask a question about source files, with construct context from the index."""
    cmap = _load_cmap(root)
    try:
        cfg = _backend_from_flags(root, backend, model, None)
        req = InspectionRequest(files=list(files), query=query, cfg=cfg)
        answer = inspect(req, cmap, root, export_to=export_path)
    except ConfigError as exc:
        raise _config_fail(str(exc))
    except (ScribeError, ValueError) as exc:
        click.echo(f"inspect failed: {exc}", err=True)
        raise SystemExit(1)
    click.echo(answer)


@cli.command("translate")
@click.argument("files", nargs=-1, type=click.Path(exists=True, dir_okay=False,
                                                   path_type=Path))
@click.option("--root", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=".", show_default=True)
@click.option("--template", "template_path",
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="Chat template TOML (seed prompt).")
@click.option("--backend", type=BACKEND_CHOICES, default=None)
@click.option("--model", default=None)
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path),
              default=None, help="Mirror output tree root (default: beside sources).")
@click.option("--force", is_flag=True, help="Overwrite existing output files.")
@click.option("--report", "report_path",
              type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write a JSON-lines report (stem, warnings, finish_reason).")
@click.option("--export-dir", type=click.Path(file_okay=False), default=None,
              help="Directory for exported prompts (export backend).")
def cmd_translate(files: tuple[Path, ...], root: Path, template_path: Path | None,
                  backend: str | None, model: str | None, out_dir: Path | None,
                  force: bool, report_path: Path | None,
                  export_dir: str | None) -> None:
    """Translate Fortran files to C++ plus Fortran-C interfaces via the backend."""
    defaults = load_translate_defaults(root)
    template_path = template_path or defaults.get("template")
    out_dir = out_dir if out_dir is not None else defaults.get("out_dir")
    if template_path is None:
        raise click.UsageError(
            "translate requires --template (or [translate].template in scribe.toml)"
        )
    cmap = _load_cmap(root)
    try:
        template = load_template(template_path)
        cfg = _backend_from_flags(root, backend, model, export_dir)
        cfg.validate()
    except ScribeError as exc:
        raise _config_fail(str(exc))

    targets = list(files) if files else _indexed_files(root)
    if not targets:
        click.echo("nothing to translate", err=True)
        return

    def out_dir_for(file: Path) -> Path:
        if out_dir is None:
            return file.parent
        rel = Path(os.path.relpath(file.parent, root))
        return out_dir if rel == Path(".") else out_dir / rel

    results = translate_files(
        targets, template, cfg, cmap, out_dir_for=out_dir_for, force=force
    )
    failures = 0
    for file, outcome in results:
        if isinstance(outcome, TranslationResult):
            for warning in outcome.warnings:
                click.echo(f"{file}: {warning}", err=True)
            if outcome.written:
                click.echo(f"translated {file} -> "
                           + ", ".join(str(p) for p in outcome.written), err=True)
        else:
            failures += 1
            if isinstance(outcome, ExtractionError) and outcome.raw_response:
                salvage = out_dir_for(file) / f"{file.stem}.response.txt"
                salvage.parent.mkdir(parents=True, exist_ok=True)
                salvage.write_text(outcome.raw_response, encoding="utf-8")
                click.echo(
                    f"translate failed for {file}: {outcome} (raw response saved "
                    f"to {salvage})", err=True)
            else:
                click.echo(f"translate failed for {file}: {outcome}", err=True)
    if report_path is not None:
        write_report(results, report_path)
    if failures:
        raise SystemExit(1)


@cli.command("resume")
@click.argument("stem")
@click.argument("response_path", type=click.Path(exists=True, dir_okay=False,
                                                 path_type=Path))
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path),
              default=".", show_default=True)
@click.option("--force", is_flag=True)
def cmd_resume(stem: str, response_path: Path, out_dir: Path, force: bool) -> None:
    """Extract and write outputs from a manually pasted model response."""
    try:
        result = resume_outputs(stem, response_path, out_dir, force=force)
    except ExtractionError as exc:
        click.echo(f"resume failed: {exc}", err=True)
        raise SystemExit(1)
    except ScribeError as exc:
        click.echo(f"resume failed: {exc}", err=True)
        raise SystemExit(1)
    for warning in result.warnings:
        click.echo(f"{response_path}: {warning}", err=True)
    click.echo("wrote " + ", ".join(str(p) for p in result.written), err=True)


def main() -> None:
    try:
        cli(standalone_mode=True)
    except ScribeError as exc:  # pragma: no cover - last-resort guard
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
