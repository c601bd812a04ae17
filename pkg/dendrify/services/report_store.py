"""
Report Store — writes SVG and report files.

Atomic writes (write to .tmp, then os.replace) so a failed command never
leaves a partial output file behind.
"""

import logging
import os
from pathlib import Path
from typing import Union

logger = logging.getLogger(__name__)


def write_atomic(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(text, encoding="utf-8")
        os.replace(str(tmp), str(path))
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    logger.info("Wrote %s (%d bytes)", path, len(text.encode("utf-8")))
    return path
