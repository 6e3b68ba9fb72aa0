from .errors import ConfigFileError, InvalidConfigValueError  # noqa
from .manager import ConfigManager  # noqa
