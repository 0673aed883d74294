"""Process exit codes shared by the exception hierarchy and the command line."""
from typing import NamedTuple


class ExitCode(NamedTuple):
    code: int
    name: str

    def __str__(self):
        return f"{self.code} ({self.name})"


class ExitCodes:
    SUCCESS = ExitCode(0, "success")
    CONFIG_ERROR = ExitCode(1, "configuration error")
    DATA_ERROR = ExitCode(2, "data error")
    INTERNAL_ERROR = ExitCode(3, "internal error")

    def __new__(cls, *args, **kwargs):
        raise RuntimeError(f"{cls} should not be instantiated")

    @classmethod
    def all(cls):
        return tuple(v for v in vars(cls).values() if isinstance(v, ExitCode))
