"""
Parser for experiment config files.

The format is one ``key = value`` per line. Blank lines and ``#`` comments
are ignored. Values are coerced in this order: bool (true/false/yes/no),
int, float, ``[a, b]`` bracketed list, comma-separated list, plain string.
List items are coerced the same way.
"""

import logging
import re
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from ..errors import ConfigError

logger = logging.getLogger(__name__)

_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_TRUE = {"true", "yes", "on"}
_FALSE = {"false", "no", "off"}
_NONE = {"none", "null", ""}


class ConfigParser:
    """Parse key-value experiment configs."""

    def __init__(self, allowed_keys: Optional[Iterable[str]] = None):
        """
        Args:
            allowed_keys: if given, any other key raises ConfigError
        """
        self.allowed_keys = set(allowed_keys) if allowed_keys is not None else None

    def parse_file(self, path: Union[str, Path]) -> Dict[str, Any]:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            content = f.read()
        logger.info(f"Reading config {path}")
        return self.parse_text(content, source=str(path))

    def parse_text(self, content: str, source: str = "<text>") -> Dict[str, Any]:
        """
        Parse config text into a dict of coerced values.

        Raises:
            ConfigError: on a line without '=', a malformed or repeated key,
                or a key outside ``allowed_keys``
        """
        values: Dict[str, Any] = {}
        for lineno, raw in enumerate(content.splitlines(), 1):
            line = self._strip_comment(raw).strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if not _KEY_RE.match(key):
                raise ConfigError(f"{source}:{lineno}: invalid key {key!r}")
            if self.allowed_keys is not None and key not in self.allowed_keys:
                raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
            if key in values:
                raise ConfigError(f"{source}:{lineno}: key {key!r} given twice")
            values[key] = self.coerce(value.strip())
        logger.debug(f"Parsed {len(values)} setting(s) from {source}")
        return values

    @staticmethod
    def _strip_comment(line: str) -> str:
        return line.split("#", 1)[0]

    def coerce(self, text: str) -> Any:
        if text.startswith("[") and text.endswith("]"):
            return self._parse_list(text[1:-1])
        if "," in text:
            return self._parse_list(text)
        return self._scalar(text)

    def _parse_list(self, text: str) -> List[Any]:
        return [self._scalar(item.strip()) for item in text.split(",") if item.strip()]

    @staticmethod
    def _scalar(text: str) -> Any:
        lower = text.lower()
        if lower in _TRUE:
            return True
        if lower in _FALSE:
            return False
        if lower in _NONE:
            return None
        try:
            return int(text)
        except ValueError:
            pass
        try:
            return float(text)
        except ValueError:
            return text


def parse_config_file(path: Union[str, Path], allowed_keys: Optional[Iterable[str]] = None) -> Dict[str, Any]:
    """Convenience wrapper around ConfigParser.parse_file."""
    return ConfigParser(allowed_keys).parse_file(path)
