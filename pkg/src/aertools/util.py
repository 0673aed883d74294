import contextlib
import hashlib
import os
import tempfile
from pathlib import Path
from typing import IO, Iterator, Union


def get_md5sum(path: Path, buffer: int = 128 * 1024) -> str:
    """Generate the md5 hash for a file in chunks, providing a low memory footprint"""
    md5 = hashlib.md5()
    with open(path, "rb", buffering=0) as f:
        while True:
            data = f.read(buffer)
            if not data:
                break
            md5.update(data)
    return md5.hexdigest()


def get_text_md5(text: str) -> str:
    return hashlib.md5(text.encode("utf-8")).hexdigest()


@contextlib.contextmanager
def atomic_write(
    path: Union[str, Path], mode: str = "w", newline: str = None
) -> Iterator[IO]:
    """Write to a temporary sibling of `path` and rename it into place on success.

    Readers never observe a partially written file; on error the temporary file is
    removed and `path` is left untouched.
    """
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        kwargs = {} if "b" in mode else {"encoding": "utf-8", "newline": newline}
        with os.fdopen(fd, mode, **kwargs) as f:
            yield f
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise
