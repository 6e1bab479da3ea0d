"""Answer extraction from final model text.

The preferred channel is a trailing ``ANSWER: <value>`` line; everything
else is a lenient per-task fallback over the free text.  An extraction
failure is data (the problem is graded incorrect), never an exception.
"""

from __future__ import annotations

import json
import re

from .problems import (
    BIPARTITE_MATCHING,
    CONNECTIVITY,
    CYCLE,
    GNN,
    HAMILTON_PATH,
    MAXIMUM_FLOW,
    SHORTEST_PATH,
    TOPOLOGICAL_SORT,
)

_ANSWER_LINE = re.compile(r"ANSWER:\s*(.+?)\s*$", re.IGNORECASE | re.MULTILINE)
_YES = re.compile(r"\b(yes|true)\b", re.IGNORECASE)
_NO = re.compile(r"\b(no|false)\b", re.IGNORECASE)
_INT_LIST = re.compile(r"\[\s*-?\d+(?:\s*,\s*-?\d+)*\s*\]")
_PAIR = re.compile(r"[\[(]\s*(\d+)\s*,\s*(\d+)\s*[\])]")
_NUMBER = re.compile(r"-?\d+(?:\.\d+)?")
_NODE_VEC = re.compile(r"node\s+(\d+)\s*:?\s*[\[(]\s*(-?\d+)\s*,\s*(-?\d+)\s*[\])]", re.IGNORECASE)


def extract_answer(task: str, final_text: str | None) -> tuple[object | None, str]:
    """Returns (value, reason); value None means extraction failed."""
    if not final_text:
        return None, "no answer found: the session produced no final text"
    match = None
    for match in _ANSWER_LINE.finditer(final_text):
        pass
    if match is not None:
        value = _parse_payload(task, match.group(1))
        if value is not None:
            return value, "parsed from ANSWER line"
    value = _fallback(task, final_text)
    if value is not None:
        return value, "parsed from free text"
    return None, "no answer found: could not parse a task-shaped answer from the final text"


def _parse_payload(task: str, payload: str) -> object | None:
    data = None
    try:
        data = json.loads(payload)
    except json.JSONDecodeError:
        pass
    if task in (CONNECTIVITY, CYCLE):
        if isinstance(data, bool):
            return data
        return _parse_bool(payload)
    if task in (TOPOLOGICAL_SORT, HAMILTON_PATH):
        if isinstance(data, list) and all(isinstance(x, int) for x in data):
            return data
        return _parse_int_list(payload)
    if task == SHORTEST_PATH:
        if isinstance(data, dict):
            return {"path": data.get("path"), "length": data.get("length")}
        if isinstance(data, list):
            return {"path": data, "length": None}
        if isinstance(data, (int, float)):
            return {"path": None, "length": data}
        return _fallback(SHORTEST_PATH, payload)
    if task == MAXIMUM_FLOW:
        if isinstance(data, dict) and "value" in data:
            return {"value": data["value"], "flows": data.get("flows")}
        if isinstance(data, (int, float)):
            return {"value": data, "flows": None}
        number = _NUMBER.search(payload)
        return {"value": float(number.group()), "flows": None} if number else None
    if task == BIPARTITE_MATCHING:
        if isinstance(data, list):
            pairs = [list(p) for p in data if isinstance(p, (list, tuple)) and len(p) == 2]
            if pairs or not data:
                return pairs
        return _parse_pairs(payload)
    if task == GNN:
        if isinstance(data, dict):
            try:
                return {int(k): list(v) for k, v in data.items()}
            except (TypeError, ValueError):
                return None
        return _parse_embeddings(payload)
    return None


def _fallback(task: str, text: str) -> object | None:
    if task in (CONNECTIVITY, CYCLE):
        return _parse_bool(text)
    if task in (TOPOLOGICAL_SORT, HAMILTON_PATH):
        return _parse_int_list(text)
    if task == SHORTEST_PATH:
        path = _parse_int_list(text)
        numbers = _NUMBER.findall(text.splitlines()[-1] if text else "")
        length = float(numbers[-1]) if numbers else None
        if path is None and length is None:
            numbers = _NUMBER.findall(text)
            length = float(numbers[-1]) if numbers else None
        if path is None and length is None:
            return None
        return {"path": path, "length": length}
    if task == MAXIMUM_FLOW:
        numbers = _NUMBER.findall(text)
        return {"value": float(numbers[-1]), "flows": None} if numbers else None
    if task == BIPARTITE_MATCHING:
        return _parse_pairs(text)
    if task == GNN:
        return _parse_embeddings(text)
    return None


def _parse_bool(text: str) -> bool | None:
    yes = [m.start() for m in _YES.finditer(text)]
    no = [m.start() for m in _NO.finditer(text)]
    if not yes and not no:
        lowered = text.lower()
        if "there is a path" in lowered or "there is a cycle" in lowered:
            return True
        if "no path" in lowered or "no cycle" in lowered or "not connected" in lowered:
            return False
        return None
    if not no or (yes and yes[-1] > no[-1]):
        return True
    return False


def _parse_int_list(text: str) -> list[int] | None:
    matches = _INT_LIST.findall(text)
    if not matches:
        return None
    return [int(x) for x in _NUMBER.findall(matches[-1])]


def _parse_pairs(text: str) -> list[list[int]] | None:
    pairs = [[int(a), int(b)] for a, b in _PAIR.findall(text)]
    return pairs or None


def _parse_embeddings(text: str) -> dict[int, list[int]] | None:
    found = {int(n): [int(x), int(y)] for n, x, y in _NODE_VEC.findall(text)}
    return found or None
