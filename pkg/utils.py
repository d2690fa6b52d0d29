"""
Utility functions for rational conversion and report serialization
"""

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

Rational = Union[int, Fraction]


def to_fraction(value: Any) -> Fraction:
    """Convert ints, Fractions, decimal strings, floats and QQ elements to Fraction

    Floats go through their shortest repr so that JSON text like 0.1 becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r} has no rational form")
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {value!r} to a rational")


def fraction_to_json(value: Fraction) -> Dict[str, int]:
    value = to_fraction(value)
    return {"num": value.numerator, "den": value.denominator}


def fraction_from_json(data: Dict[str, Any]) -> Fraction:
    try:
        return Fraction(int(data["num"]), int(data["den"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ValueError(f"invalid rational {data!r}: {e}")


def canonical_json(data: Any) -> str:
    """Deterministic JSON text: sorted keys, fixed indent, trailing newline"""
    return json.dumps(data, sort_keys=True, indent=2, default=_json_default) + "\n"


def write_json(path: Union[str, Path], data: Any) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(data), encoding="utf-8")
    return path


def read_json(path: Union[str, Path]) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def _json_default(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return fraction_to_json(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")
