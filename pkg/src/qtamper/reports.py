"""Canonical report serialization and run manifests.

Reports are JSON rendered by a fixed-format emitter: keys sorted,
no locale- or version-dependent float text (every float is written with
17 significant digits), rationals as "numerator/denominator" strings.
Two runs that compute the same values therefore produce byte-identical
files, which is what the reproducibility contract demands.  Wall-clock
timing is deliberately *not* embedded in reports (it would break
byte-identity); the CLI logs it to stderr instead.
"""

from __future__ import annotations

import io
import json
from fractions import Fraction
from typing import Any

import numpy as np

from . import __version__
from .haar import GENERATOR_VERSION

BUILD_ID = f"qtamper/{__version__}"


def _emit(obj: Any, out: io.StringIO) -> None:
    if isinstance(obj, dict):
        out.write("{")
        first = True
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"report keys must be strings, got {key!r}")
            if not first:
                out.write(",")
            first = False
            out.write(json.dumps(key))
            out.write(":")
            _emit(obj[key], out)
        out.write("}")
    elif isinstance(obj, (list, tuple)):
        out.write("[")
        for i, item in enumerate(obj):
            if i:
                out.write(",")
            _emit(item, out)
        out.write("]")
    elif isinstance(obj, Fraction):
        out.write(json.dumps(f"{obj.numerator}/{obj.denominator}"))
    elif isinstance(obj, str):
        out.write(json.dumps(obj))
    elif isinstance(obj, (bool, np.bool_)):
        out.write("true" if obj else "false")
    elif obj is None:
        out.write("null")
    elif isinstance(obj, (int, np.integer)):
        out.write(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not np.isfinite(value):
            raise ValueError("reports must not contain NaN/Inf")
        out.write(format(value, ".17g"))
    else:
        raise TypeError(f"cannot serialize {type(obj)} into a report")


def canonical_json_bytes(obj: Any) -> bytes:
    buf = io.StringIO()
    _emit(obj, buf)
    buf.write("\n")
    return buf.getvalue().encode("utf-8")


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def make_manifest(subcommand: str, parameters: dict) -> dict:
    """Everything needed to reproduce a run bit-for-bit."""
    return {
        "subcommand": subcommand,
        "parameters": parameters,
        "generator_version": GENERATOR_VERSION,
        "build": BUILD_ID,
    }
