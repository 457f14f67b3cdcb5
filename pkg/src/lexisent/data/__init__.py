"""Bundled lexicon, word lists and small sample corpora."""

from importlib import resources
from pathlib import Path


def data_path(name: str) -> Path:
    """Filesystem path of a bundled data file."""
    path = Path(str(resources.files(__name__).joinpath(name)))
    if not path.is_file():
        raise FileNotFoundError(f"no bundled data file {name!r}")
    return path
