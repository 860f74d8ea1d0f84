"""Channel-file parsing and result serialization used by the CLI.

A channel file is a JSON document with keys ``h11, h12, h21, h22``
(each either ``{"mag": m, "phase_rad": p}``, a ``[re, im]`` pair, or a
plain real number) and positive ``noise1, noise2``.  An example channel
ships with the package as ``data/sec6.json``.
"""

from __future__ import annotations

import cmath
import json
from importlib import resources
from pathlib import Path

from .model import ChannelRealization

__all__ = [
    "ChannelFileError",
    "parse_channel",
    "load_channel",
    "example_channel_path",
    "example_channel",
    "format_float",
]


class ChannelFileError(ValueError):
    """Raised when a channel file cannot be parsed into a valid channel."""


def _coefficient(value, key: str) -> complex:
    if isinstance(value, dict):
        try:
            return cmath.rect(float(value["mag"]), float(value["phase_rad"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ChannelFileError(
                f"{key}: expected keys 'mag' and 'phase_rad', got {value!r}"
            ) from exc
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ChannelFileError(f"{key}: expected a [re, im] pair, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    raise ChannelFileError(f"{key}: unsupported coefficient format {value!r}")


def parse_channel(doc: dict) -> ChannelRealization:
    if not isinstance(doc, dict):
        raise ChannelFileError("channel document must be a JSON object")
    try:
        coeffs = {k: _coefficient(doc[k], k) for k in ("h11", "h12", "h21", "h22")}
        noise1 = float(doc["noise1"])
        noise2 = float(doc["noise2"])
    except KeyError as exc:
        raise ChannelFileError(f"missing channel key {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise ChannelFileError(f"bad channel value: {exc}") from exc
    try:
        return ChannelRealization(noise1=noise1, noise2=noise2, **coeffs)
    except ValueError as exc:
        raise ChannelFileError(str(exc)) from exc


def load_channel(path) -> ChannelRealization:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ChannelFileError(f"cannot read channel file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ChannelFileError(f"channel file {path} is not valid JSON: {exc}") from exc
    return parse_channel(doc)


def example_channel_path() -> Path:
    """Location of the bundled example channel file."""
    return Path(str(resources.files("tinregions").joinpath("data/sec6.json")))


def example_channel() -> ChannelRealization:
    return load_channel(example_channel_path())


def format_float(x: float) -> str:
    """Serialize with enough significant digits to round-trip region files."""
    return format(float(x), ".15g")
