"""Single source of truth for the tool version stamped into every report."""

from functools import lru_cache
from pathlib import Path

VERSION_FILE = Path(__file__).parent.parent / "VERSION"
TOOL_NAME = "dendrify"


@lru_cache(maxsize=1)
def get_version() -> str:
    """Read version from the VERSION file, falling back to 'unknown'."""
    try:
        return VERSION_FILE.read_text().strip()
    except (FileNotFoundError, PermissionError):
        return "unknown"


def tool_stamp() -> str:
    return f"{TOOL_NAME} {get_version()}"
