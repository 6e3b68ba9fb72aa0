from typing import Any

from ..errors import ParseError, PreconditionError


class InvalidConfigValueError(PreconditionError):
    def __init__(self, key: str, expected: str, value: Any):
        super().__init__(key, expected, value)
        self.key = key
        self.expected = expected
        self.value = value

    def __str__(self) -> str:
        return (
            f"config key {self.key}: expected {self.expected}, "
            f"got {self.value!r}"
        )


class ConfigFileError(ParseError):
    pass
