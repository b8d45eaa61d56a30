"""Flat key-value experiment configs with typed sections.

The on-disk format is INI: a [run] section fixes the experiment kind, seed
and output, and one section per kind carries its parameters.  Everything a
run needs flows from the file (plus CLI overrides); schema errors name the
offending field path.
"""

from __future__ import annotations

import configparser
from fractions import Fraction
from typing import Dict, List, Optional

from .numbers import exact_fraction


class ConfigError(ValueError):
    """Invalid configuration; ``field`` is the '[section] key' path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class Config:
    def __init__(self, parser: configparser.ConfigParser):
        self._parser = parser

    @classmethod
    def from_text(cls, text: str) -> "Config":
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str  # keys are case-sensitive
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError("(file)", f"not parseable as INI: {exc}") from exc
        return cls(parser)

    @classmethod
    def from_path(cls, path: str) -> "Config":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def flat(self) -> Dict[str, str]:
        out = {}
        for section in self._parser.sections():
            for key, value in self._parser.items(section):
                out[f"{section}.{key}"] = value
        return out

    def has(self, section: str, key: str) -> bool:
        return self._parser.has_option(section, key)

    def sections(self) -> List[str]:
        return list(self._parser.sections())

    def _raw(self, section: str, key: str) -> str:
        if not self._parser.has_section(section):
            raise ConfigError(f"[{section}]", "missing section")
        if not self._parser.has_option(section, key):
            raise ConfigError(f"[{section}] {key}", "missing key")
        return self._parser.get(section, key)

    def get_str(self, section: str, key: str,
                default: Optional[str] = None) -> str:
        if default is not None and not self.has(section, key):
            return default
        return self._raw(section, key)

    def get_int(self, section: str, key: str,
                default: Optional[int] = None) -> int:
        if default is not None and not self.has(section, key):
            return default
        raw = self._raw(section, key)
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key}", f"expected integer, got {raw!r}")

    def get_float(self, section: str, key: str,
                  default: Optional[float] = None) -> float:
        if default is not None and not self.has(section, key):
            return default
        raw = self._raw(section, key)
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key}", f"expected number, got {raw!r}")

    def get_fraction(self, section: str, key: str,
                     default: Optional[Fraction] = None) -> Fraction:
        if default is not None and not self.has(section, key):
            return default
        raw = self._raw(section, key)
        try:
            return exact_fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"[{section}] {key}",
                              f"expected rational ('2/7' or '0.3'), got {raw!r}")

    def get_bool(self, section: str, key: str, default: bool = False) -> bool:
        if not self.has(section, key):
            return default
        raw = self._raw(section, key).strip().lower()
        if raw in ("1", "true", "yes", "on"):
            return True
        if raw in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"[{section}] {key}", f"expected boolean, got {raw!r}")

    def get_int_list(self, section: str, key: str) -> List[int]:
        raw = self._raw(section, key)
        try:
            return [int(p) for p in raw.replace(",", " ").split()]
        except ValueError:
            raise ConfigError(f"[{section}] {key}",
                              f"expected integer list, got {raw!r}")


def parse_vertex_list(raw: str, field: str) -> List[int]:
    """Parse '0-4,7,9-11' style vertex lists."""
    out: List[int] = []
    for chunk in raw.replace(" ", "").split(","):
        if not chunk:
            continue
        if "-" in chunk:
            lo, _, hi = chunk.partition("-")
            try:
                a, b = int(lo), int(hi)
            except ValueError:
                raise ConfigError(field, f"bad range {chunk!r}")
            if b < a:
                raise ConfigError(field, f"descending range {chunk!r}")
            out.extend(range(a, b + 1))
        else:
            try:
                out.append(int(chunk))
            except ValueError:
                raise ConfigError(field, f"bad vertex id {chunk!r}")
    return out
