"""File formats and deterministic report emission.

Input-space files are CSV with header ``id,x0,x1,...,weight[,label...]``
(any column after ``weight`` is read as a label attribute named by its
header) or a JSON mirror ``{"points": ..., "weights": ..., "labels":
{name: [...]}}``. Protocol files are CSV ``id,message`` where a message is
a symbol string over vocabulary ``0..V-1`` of length ``L`` (e.g. ``0371``),
or the JSON mirror ``{"messages": [...]}``.

Reports are JSON with sorted keys and floats printed with 12 significant
digits, so identical configurations and seeds produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .core import InputSpace, LabelMap, MessageSpace, Protocol
from .errors import ParseError
from .games import ClassificationReceiver, ConstantDiscriminationReceiver, \
    GlobalReceiver, ReconstructionReceiver, TabularDiscriminationReceiver

__all__ = [
    "load_input_space",
    "save_input_space",
    "load_protocol",
    "save_protocol",
    "default_message_space",
    "receiver_to_json",
    "receiver_from_json",
    "load_receiver",
    "format_floats",
    "dumps_report",
    "write_report",
]


# ---------------------------------------------------------------------------
# Input spaces
# ---------------------------------------------------------------------------

def load_input_space(path: str | Path) -> tuple[InputSpace, list[LabelMap]]:
    path = Path(path)
    if path.suffix.lower() == ".json":
        return _input_space_from_json(path)
    rows = _read_csv(path)
    header = rows[0]
    if not header or header[0] != "id":
        raise ParseError("expected header starting with 'id'", str(path),
                         line=1, column=1)
    try:
        w_col = header.index("weight")
    except ValueError:
        raise ParseError("missing 'weight' column", str(path), line=1)
    coord_cols = list(range(1, w_col))
    for j, name in enumerate(header[1:w_col], start=1):
        if name != f"x{j - 1}":
            raise ParseError(f"expected coordinate column 'x{j - 1}', got "
                             f"{name!r}", str(path), line=1, column=j + 1)
    label_cols = list(range(w_col + 1, len(header)))

    records = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}",
                             str(path), line=lineno, column=len(row))
        try:
            ident = int(row[0])
        except ValueError:
            raise ParseError(f"bad id {row[0]!r}", str(path), line=lineno,
                             column=1)
        coords, weight = [], None
        for j in coord_cols:
            coords.append(_parse_float(row[j], path, lineno, j + 1))
        weight = _parse_float(row[w_col], path, lineno, w_col + 1)
        records[ident] = (coords, weight, [row[j] for j in label_cols])
    if not records:
        raise ParseError("no data rows", str(path), line=2)
    if sorted(records) != list(range(len(records))):
        raise ParseError("ids must be contiguous 0..N-1", str(path), line=2)

    ordered = [records[i] for i in range(len(records))]
    try:
        space = InputSpace([r[0] for r in ordered],
                           [r[1] for r in ordered])
    except ValueError as exc:
        raise ParseError(str(exc), str(path), line=2)
    labels = [LabelMap([r[2][j] for r in ordered], name=header[w_col + 1 + j])
              for j in range(len(label_cols))]
    return space, labels


def _input_space_from_json(path: Path) -> tuple[InputSpace, list[LabelMap]]:
    data = _read_json(path)
    try:
        space = InputSpace(data["points"], data.get("weights"))
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"bad input-space JSON: {exc}", str(path), line=1)
    labels = [LabelMap(vals, name=name)
              for name, vals in data.get("labels", {}).items()]
    return space, labels


def save_input_space(path: str | Path, space: InputSpace,
                     labels: list[LabelMap] | None = None) -> None:
    labels = labels or []
    path = Path(path)
    if path.suffix.lower() == ".json":
        payload = {
            "points": [[float(v) for v in p] for p in space.points],
            "weights": [float(w) for w in space.weights],
        }
        if labels:
            payload["labels"] = {lab.name: list(lab.labels) for lab in labels}
        write_report(path, payload)
        return
    header = (["id"] + [f"x{j}" for j in range(space.dim)] + ["weight"]
              + [lab.name for lab in labels])
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(space.size):
            row = [i] + [repr(float(v)) for v in space.points[i]] \
                + [repr(float(space.weights[i]))] \
                + [lab.labels[i] for lab in labels]
            writer.writerow(row)


# ---------------------------------------------------------------------------
# Protocols
# ---------------------------------------------------------------------------

def default_message_space(k: int) -> MessageSpace:
    """Synthetic symbol-sequence space for K messages: zero-padded decimal
    strings of equal length."""
    length = max(1, len(str(k - 1)))
    msgs = [str(m).zfill(length) for m in range(k)]
    return MessageSpace.symbol_sequences(msgs, vocab_size=10, length=length)


def load_protocol(path: str | Path,
                  message_space: MessageSpace | None = None,
                  vocab_size: int | None = None
                  ) -> tuple[Protocol, MessageSpace]:
    path = Path(path)
    if path.suffix.lower() == ".json":
        data = _read_json(path)
        if "messages" not in data:
            raise ParseError("protocol JSON needs a 'messages' list",
                             str(path), line=1)
        strings = {i: str(m) for i, m in enumerate(data["messages"])}
    else:
        rows = _read_csv(path)
        if not rows or rows[0][:2] != ["id", "message"]:
            raise ParseError("expected header 'id,message'", str(path),
                             line=1, column=1)
        strings = {}
        for lineno, row in enumerate(rows[1:], start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise ParseError("expected 'id,message'", str(path),
                                 line=lineno, column=1)
            try:
                ident = int(row[0])
            except ValueError:
                raise ParseError(f"bad id {row[0]!r}", str(path),
                                 line=lineno, column=1)
            strings[ident] = row[1].strip()
    if sorted(strings) != list(range(len(strings))):
        raise ParseError("ids must be contiguous 0..N-1", str(path), line=2)
    ordered = [strings[i] for i in range(len(strings))]

    seqs = []
    for lineno, s in enumerate(ordered, start=2):
        try:
            seqs.append(_parse_message_string(s))
        except ValueError as exc:
            raise ParseError(str(exc), str(path), line=lineno, column=2)
    lengths = {len(s) for s in seqs}
    if len(lengths) != 1:
        raise ParseError("messages must share one length", str(path), line=2)

    if message_space is None:
        atoms = sorted(set(seqs))
        if vocab_size is None:
            vocab_size = max(max(s) for s in seqs) + 1
        message_space = MessageSpace.symbol_sequences(
            atoms, vocab_size=vocab_size, length=lengths.pop())
    index = {tuple(a): i for i, a in enumerate(message_space.atoms)}
    try:
        assignment = [index[s] for s in seqs]
    except KeyError as exc:
        raise ParseError(f"message {exc.args[0]!r} not in the message space",
                         str(path), line=2)
    return Protocol(assignment, message_space.size), message_space


def _parse_message_string(s: str) -> tuple:
    if not s:
        raise ValueError("empty message string")
    if "-" in s:
        parts = s.split("-")
    else:
        parts = list(s)
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"bad message string {s!r}")


def save_protocol(path: str | Path, protocol: Protocol,
                  message_space: MessageSpace | None = None) -> None:
    if message_space is None:
        message_space = default_message_space(protocol.num_messages)
    path = Path(path)
    if path.suffix.lower() == ".json":
        write_report(path, {"messages": [
            message_space.atom_string(int(m)) for m in protocol.assignment]})
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "message"])
        for i, m in enumerate(protocol.assignment):
            writer.writerow([i, message_space.atom_string(int(m))])


# ---------------------------------------------------------------------------
# Receivers
# ---------------------------------------------------------------------------

_MAX_TABLE_ROWS = 10 ** 6


def receiver_to_json(receiver) -> dict:
    if isinstance(receiver, ReconstructionReceiver):
        return {"kind": "reconstruction", "outputs": [
            [float(v) for v in receiver.points[m]] if receiver.defined[m]
            else None for m in range(receiver.num_messages)]}
    if isinstance(receiver, GlobalReceiver):
        return {"kind": "global", "table": [
            [float(v) for v in receiver.table[m]] if receiver.defined[m]
            else None for m in range(receiver.num_messages)]}
    if isinstance(receiver, ClassificationReceiver):
        return {"kind": "classification", "conditional": [
            [float(v) for v in receiver.conditional[m]]
            if receiver.defined[m] else None
            for m in range(receiver.num_messages)]}
    if isinstance(receiver, ConstantDiscriminationReceiver):
        return {"kind": "constant-discrimination",
                "vector": [float(v) for v in receiver.vector],
                "num_messages": receiver.num_messages}
    if isinstance(receiver, TabularDiscriminationReceiver):
        if len(receiver.table) > _MAX_TABLE_ROWS:
            raise ValueError(
                f"dense discrimination table has {len(receiver.table)} rows; "
                f"only tables up to {_MAX_TABLE_ROWS} rows serialize")
        rows = [{"message": int(m), "candidates": [int(c) for c in cands],
                 "probs": [float(v) for v in row]}
                for (m, cands), row in sorted(receiver.table.items())]
        return {"kind": "discrimination", "d": receiver.num_candidates,
                "num_messages": receiver.num_messages, "rows": rows}
    raise TypeError(f"cannot serialize receiver of type {type(receiver)!r}")


def receiver_from_json(data: dict):
    kind = data.get("kind")
    if kind == "reconstruction":
        rows = data["outputs"]
        defined = np.array([r is not None for r in rows])
        dim = len(next(r for r in rows if r is not None))
        pts = np.array([r if r is not None else [math.nan] * dim
                        for r in rows], dtype=float)
        return ReconstructionReceiver(pts, defined=defined)
    if kind == "global":
        rows = data["table"]
        defined = np.array([r is not None for r in rows])
        n = len(next(r for r in rows if r is not None))
        tab = np.array([r if r is not None else [math.nan] * n
                        for r in rows], dtype=float)
        return GlobalReceiver(tab, defined=defined)
    if kind == "classification":
        rows = data["conditional"]
        defined = np.array([r is not None for r in rows])
        v = len(next(r for r in rows if r is not None))
        tab = np.array([r if r is not None else [math.nan] * v
                        for r in rows], dtype=float)
        return ClassificationReceiver(tab, defined=defined)
    if kind == "constant-discrimination":
        return ConstantDiscriminationReceiver(
            np.asarray(data["vector"], dtype=float),
            num_messages=int(data.get("num_messages", 1)))
    if kind == "discrimination":
        table = {(int(r["message"]), tuple(int(c) for c in r["candidates"])):
                 np.asarray(r["probs"], dtype=float) for r in data["rows"]}
        return TabularDiscriminationReceiver(int(data["d"]),
                                             int(data["num_messages"]), table)
    raise ValueError(f"unknown receiver kind {kind!r}")


def load_receiver(path: str | Path):
    return receiver_from_json(_read_json(Path(path)))


# ---------------------------------------------------------------------------
# Deterministic report emission
# ---------------------------------------------------------------------------

def format_floats(obj, digits: int = 12):
    """Round floats to the given significant digits, mapping non-finite
    values to strings so the result is plain JSON."""
    if isinstance(obj, dict):
        return {k: format_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [format_floats(v, digits) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return float(f"{v:.{digits}g}")
    if isinstance(obj, np.ndarray):
        return format_floats(obj.tolist(), digits)
    return obj


def dumps_report(obj) -> str:
    return json.dumps(format_floats(obj), sort_keys=True, indent=2) + "\n"


def write_report(path: str | Path, obj) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(dumps_report(obj))


# ---------------------------------------------------------------------------
# Low-level readers
# ---------------------------------------------------------------------------

def _read_csv(path: Path) -> list[list[str]]:
    try:
        with open(path, newline="") as fh:
            return [row for row in csv.reader(fh)]
    except OSError as exc:
        raise ParseError(str(exc), str(path))


def _read_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise ParseError(str(exc), str(path))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, str(path), line=exc.lineno,
                         column=exc.colno)


def _parse_float(cell: str, path: Path, line: int, column: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(f"bad number {cell!r}", str(path), line=line,
                         column=column)
