"""
mls-v1 instance files

A UTF-8 JSON document:

    {
      "format": "mls-v1",
      "n": 3,
      "matroid": {"kind": "linear", "p": 5, "dim": 3, "elements": [[1, 0, 0], ...]}
                 | {"kind": "partition", "classes": [1, 2, ...]},
      "grid": [[0, 1, 2], ...],
      "provenance": {...}            # optional
    }

Element vectors are integer residue arrays; floating-point literals are rejected.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Union
import json
import logging

from .errors import InputError, ParseError
from .matroid import matroid_from_descriptor
from .mls import MLS

logger = logging.getLogger(__name__)

FORMAT_TAG = "mls-v1"


def _reject_float(value: str):
    raise ParseError(f"Floating-point literal {value} is not allowed in {FORMAT_TAG} files")


@dataclass
class InstanceFile:
    mls: MLS
    provenance: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        doc = {
            "format": FORMAT_TAG,
            "n": self.mls.n,
            "matroid": self.mls.matroid.descriptor(),
            "grid": [list(row) for row in self.mls.grid],
        }
        if self.provenance:
            doc["provenance"] = self.provenance
        return doc

    def dumps(self) -> str:
        return dumps_document(self.to_dict())

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.dumps(), encoding="utf-8")
        logger.info(f"Wrote {FORMAT_TAG} instance of degree {self.mls.n} to {path}")
        return path

    @classmethod
    def from_dict(cls, doc: Any) -> "InstanceFile":
        if not isinstance(doc, dict):
            raise ParseError("Instance document must be a JSON object")
        if doc.get("format") != FORMAT_TAG:
            raise ParseError(f"Unsupported format tag {doc.get('format')!r}, expected {FORMAT_TAG!r}")
        for key in ("n", "matroid", "grid"):
            if key not in doc:
                raise ParseError(f"Missing required field '{key}'")
        if not isinstance(doc["matroid"], dict):
            raise ParseError("Field 'matroid' must be an object")
        provenance = doc.get("provenance", {})
        if not isinstance(provenance, dict):
            raise ParseError("Field 'provenance' must be an object")
        try:
            matroid = matroid_from_descriptor(doc["matroid"])
            mls = MLS(doc["n"], matroid, doc["grid"])
        except InputError as e:
            raise ParseError(e.message, **e.details)
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed instance: {e}")
        return cls(mls, provenance)

    @classmethod
    def loads(cls, text: str) -> "InstanceFile":
        try:
            doc = json.loads(text, parse_float=_reject_float)
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid JSON: {e}")
        return cls.from_dict(doc)

    @classmethod
    def read(cls, path: Union[str, Path]) -> "InstanceFile":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ParseError(f"Cannot read instance file {path}: {e}")
        return cls.loads(text)


def dumps_document(doc: Dict[str, Any]) -> str:
    """Canonical JSON text: two-space indent, insertion order, trailing newline"""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
