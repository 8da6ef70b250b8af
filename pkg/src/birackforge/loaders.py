"""Resolve command-line arguments into library objects.

Every loader accepts ``@name`` for a built-in preset, a path to a JSON file,
or (for diagrams and braids) inline text.
"""

from __future__ import annotations

import json
import os

from . import presets
from .birack import Birack, birack_from_json
from .bweight import BraidWeight
from .errors import ParseError
from .qweight import QuantumWeight
from .tangle import BraidWord, SlicedDiagram, braid_closure, braid_tangle, parse_braid, parse_diagram

__all__ = ["read_json", "load_birack", "load_diagram", "load_braid", "load_weight", "load_braid_weight"]


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _preset(arg, kind):
    try:
        obj = presets.get(arg[1:])
    except KeyError:
        raise ParseError(f"unknown preset {arg!r}") from None
    if not isinstance(obj, kind):
        raise ParseError(f"preset {arg!r} is not a {kind.__name__}")
    return obj


def _doc(arg, base=None):
    if isinstance(arg, dict):
        return arg, base
    text = str(arg).strip()
    if text.startswith("{"):
        try:
            return json.loads(text), base
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid inline JSON: {exc.msg}") from None
    path = text if base is None or os.path.isabs(text) else os.path.join(base, text)
    return read_json(path), os.path.dirname(os.path.abspath(path))


def load_birack(arg, base=None):
    if isinstance(arg, Birack):
        return arg
    if isinstance(arg, str) and arg.startswith("@"):
        return _preset(arg, Birack)
    doc, _ = _doc(arg, base)
    return birack_from_json(doc)


def diagram_from_json(doc):
    kind = doc.get("type", "sliced")
    if kind == "braid":
        b = BraidWord(int(doc["strands"]), doc.get("word", []))
        return braid_closure(b) if doc.get("closure", True) else braid_tangle(b)
    if kind == "sliced":
        if "slices" not in doc:
            raise ParseError("sliced diagram document needs 'slices'")
        return parse_diagram(doc["slices"], doc.get("boundary_in"))
    raise ParseError(f"unknown diagram type {kind!r}")


def load_diagram(arg, boundary_in=None):
    """``@hopf``, ``file.json``, a text file, ``braid:1 1 1 2`` or slice text."""
    if isinstance(arg, SlicedDiagram):
        return arg
    text = str(arg).strip()
    if text.startswith("@"):
        return _preset(text, SlicedDiagram)
    if text.startswith("braid:"):
        return braid_closure(parse_braid(text[len("braid:"):]))
    if text.startswith("{") or text.endswith(".json"):
        doc, _ = _doc(text)
        return diagram_from_json(doc)
    if os.path.isfile(text):
        try:
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {arg}: {exc.strerror}") from None
    return parse_diagram(text, boundary_in)


def load_braid(arg, strands=None):
    text = str(arg).strip()
    if text.startswith("{") or text.endswith(".json"):
        doc, _ = _doc(text)
        return BraidWord(int(doc["strands"]), doc.get("word", []))
    if text.startswith("braid:"):
        text = text[len("braid:"):]
    return parse_braid(text, strands)


def _with_birack(doc, base):
    ref = doc.get("birack")
    if isinstance(ref, str):
        return load_birack(ref, base)
    return None


def load_weight(arg):
    if isinstance(arg, QuantumWeight):
        return arg
    if isinstance(arg, str) and arg.startswith("@"):
        return _preset(arg, QuantumWeight)
    doc, base = _doc(arg)
    return QuantumWeight.from_json(doc, _with_birack(doc, base))


def load_braid_weight(arg):
    if isinstance(arg, BraidWeight):
        return arg
    if isinstance(arg, str) and arg.startswith("@"):
        return _preset(arg, BraidWeight)
    doc, base = _doc(arg)
    return BraidWeight.from_json(doc, _with_birack(doc, base))
