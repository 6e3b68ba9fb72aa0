import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .errors import ConfigFileError, InvalidConfigValueError

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).parent.parent / "config.json"


def _positive_float(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and value > 0


def _positive_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value > 0


def _nonnegative_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def _unit_interval(value: Any) -> bool:
    return _positive_float(value) and value < 1


# key -> (check, description of the expected value)
VALIDATORS: Dict[str, Any] = {
    "santalo.tol": (_positive_float, "a positive number"),
    "santalo.max_iterations": (_positive_int, "a positive integer"),
    "santalo.backtrack": (_unit_interval, "a number in (0, 1)"),
    "santalo.armijo": (_unit_interval, "a number in (0, 1)"),
    "smoothness.max_retries": (_nonnegative_int, "a non-negative integer"),
    "smoothness.shear_bound": (_positive_int, "a positive integer"),
    "verify.random_samples": (_positive_int, "a positive integer"),
    "verify.random_polytopes": (_nonnegative_int, "a non-negative integer"),
    "verify.random_fans": (_nonnegative_int, "a non-negative integer"),
    "verify.seed": (_nonnegative_int, "a non-negative integer"),
    "output.format": (lambda v: v in ("text", "structured"), '"text" or "structured"'),
}


class ConfigManager:
    def __init__(self, user_path: Union[str, Path, None] = None) -> None:
        self._config: Dict
        self.user_path = Path(user_path) if user_path else None
        self.load()

    def load(self) -> None:
        "Loads the shipped defaults, then the user file on top"
        with open(DEFAULTS_PATH, "r") as f:
            self._config = json.load(f)
        if self.user_path is None:
            return
        try:
            with open(self.user_path, "r") as f:
                overrides = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigFileError(str(e), str(self.user_path))
        if not isinstance(overrides, dict):
            raise ConfigFileError("top level must be an object", str(self.user_path))
        _merge(self._config, overrides)
        for key in VALIDATORS:
            self.validate(key, self.get(key))
        logger.debug("loaded config overrides from %s", self.user_path)

    def get_from_dict(self, dict_obj: dict, key: str) -> Any:
        "Raises KeyError if config doesn't exist"
        levels = key.split(".")
        return_val = dict_obj
        for level in levels:
            return_val = return_val[level]
        return return_val

    def get(self, key: str, default: Any = None) -> Any:
        "Returns default or None if config doesn't exist"
        try:
            return self.get_from_dict(self._config, key)
        except (KeyError, TypeError):
            return default

    def validate(self, key: str, value: Any) -> None:
        if key not in VALIDATORS:
            return
        check, expected = VALIDATORS[key]
        if not check(value):
            raise InvalidConfigValueError(key, expected, value)

    def set(self, key: str, value: Any) -> None:
        self.validate(key, value)
        levels = key.split(".")
        conf_obj = self._config
        for level in levels[:-1]:
            conf_obj = conf_obj.setdefault(level, {})
        conf_obj[levels[-1]] = value

    def __getitem__(self, key: str) -> Any:
        return self.get(key)

    def __setitem__(self, key: str, value: Any) -> None:
        self.set(key, value)

    def __contains__(self, key: str) -> bool:
        try:
            self.get_from_dict(self._config, key)
            return True
        except (KeyError, TypeError):
            return False


def _merge(base: Dict, overrides: Dict) -> None:
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = value


def resolve(conf: Optional[ConfigManager]) -> ConfigManager:
    return conf if conf is not None else ConfigManager()
