"""Revealed-preference tests and cost recovery for posterior-mean separable
information costs.

Inputs are the same JSON documents the ``pmsep`` command line reads, passed as
dicts (or JSON strings). Every function returns ``(exit_code, report)`` with
the report as a dict; exit codes follow the command line (0 pass, 1 rejected).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping, Optional, Tuple, Union

from . import _core
from ._core import DomainError, InputError, ResourceError, StructuralError

Document = Union[str, Mapping[str, Any]]

__all__ = [
    "DomainError",
    "InputError",
    "ResourceError",
    "StructuralError",
    "check",
    "concavity",
    "exact",
    "generate",
    "recover",
    "run",
    "solve",
    "validate",
    "verify",
]


def _text(doc: Document) -> str:
    return doc if isinstance(doc, str) else json.dumps(doc)


def _wrap(result: Tuple[int, str]) -> Tuple[int, dict]:
    code, body = result
    return code, json.loads(body)


def exact(value: Mapping[str, Any]) -> Fraction:
    """The exact value of a report scalar ``{"exact": "p/q", "approx": ...}``."""
    return Fraction(value["exact"])


def validate(dataset: Document, numeric: str = "rational") -> Tuple[int, dict]:
    return _wrap(_core.validate(_text(dataset), numeric))


def check(dataset: Document, flattest: bool = False, numeric: str = "rational") -> Tuple[int, dict]:
    return _wrap(_core.check(_text(dataset), flattest, numeric))


def recover(dataset: Document, flattest: bool = False, numeric: str = "rational") -> Tuple[int, dict]:
    return _wrap(_core.recover(_text(dataset), flattest, numeric))


def solve(problem: Document, refine: Optional[int] = None, numeric: str = "rational") -> Tuple[int, dict]:
    return _wrap(_core.solve(_text(problem), refine, numeric))


def concavity(dataset: Document, budget: int = 10_000, numeric: str = "rational") -> Tuple[int, dict]:
    return _wrap(_core.concavity(_text(dataset), budget, numeric))


def verify(dataset: Document, report: Document, numeric: str = "rational") -> Tuple[int, dict]:
    return _wrap(_core.verify(_text(dataset), _text(report), numeric))


def generate(spec: Document) -> dict:
    """A dataset document of optimal behaviour under the generator document's cost."""
    return json.loads(_core.generate(_text(spec)))


def run(*args: str) -> Tuple[int, str, str]:
    """Runs the command line in-process."""
    return _core.run(list(args))
