from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixtures import build_tree, write_template  # noqa: E402

from scribe.indexer import index_tree  # noqa: E402


@pytest.fixture
def fixture_tree(tmp_path):
    """The synthetic Fortran project, not yet indexed."""
    return build_tree(tmp_path / "proj")


@pytest.fixture
def indexed_tree(fixture_tree):
    """(root, indexes, cmap) with index files written."""
    indexes, cmap = index_tree(fixture_tree)
    return fixture_tree, indexes, cmap


@pytest.fixture
def template_file(tmp_path):
    return write_template(tmp_path / "seed_prompt.toml")
