"""scribe: index legacy Fortran trees, draft C++ skeletons, and drive LLM translation."""

__version__ = "0.1.0"
