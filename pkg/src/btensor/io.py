"""Tensor file format and machine-readable report documents.

Tensors are stored as sparse JSON entry lists::

    {"order": 4, "dim": 2, "name": "example",
     "entries": [{"idx": [1, 1, 1, 1], "val": 2.0}, ...]}

Indices in files are 1-based throughout.  Unlisted entries are zero.
Values round-trip bit-for-bit (shortest round-trip decimals).
"""

from __future__ import annotations

import hashlib
import json
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .core import Tensor, is_symmetric, make_tensor
from .classify import ClassReport, Witness
from .decompose import Certificate, Decomposition
from .oracle import OracleResult, SearchReport

__all__ = [
    "TensorFormatError",
    "load_tensor",
    "save_tensor",
    "tensor_to_doc",
    "doc_to_tensor",
    "content_hash",
    "witness_to_dict",
    "class_report_to_dict",
    "decomposition_to_dict",
    "oracle_result_to_dict",
    "certificate_to_dict",
    "search_report_to_dict",
    "build_report",
    "dump_report",
]


class TensorFormatError(ValueError):
    """Malformed tensor document (parse failure or semantic violation)."""


def tensor_to_doc(T: Tensor, name: str | None = None) -> dict:
    """Sparse document for a tensor: nonzero entries in lexicographic order."""
    entries = []
    for idx in np.argwhere(T.data != 0.0):
        key = tuple(int(k) + 1 for k in idx)
        entries.append({"idx": list(key), "val": float(T.data[tuple(idx)])})
    doc = {"order": T.order, "dim": T.dim, "entries": entries}
    label = name if name is not None else T.name
    if label is not None:
        doc["name"] = label
    return doc


def doc_to_tensor(doc: dict) -> Tensor:
    """Validate and densify a tensor document."""
    if not isinstance(doc, dict):
        raise TensorFormatError(f"tensor document must be an object, got {type(doc).__name__}")
    for field in ("order", "dim", "entries"):
        if field not in doc:
            raise TensorFormatError(f"tensor document is missing the {field!r} field")
    order, dim = doc["order"], doc["dim"]
    if not isinstance(order, int) or not isinstance(dim, int):
        raise TensorFormatError("'order' and 'dim' must be integers")
    raw = doc["entries"]
    if not isinstance(raw, list):
        raise TensorFormatError("'entries' must be a list of {idx, val} records")
    pairs = []
    for pos, record in enumerate(raw):
        if not isinstance(record, dict) or "idx" not in record or "val" not in record:
            raise TensorFormatError(f"entry {pos} must be an object with 'idx' and 'val'")
        idx = record["idx"]
        val = record["val"]
        if not isinstance(idx, list) or not all(isinstance(k, int) for k in idx):
            raise TensorFormatError(f"entry {pos}: 'idx' must be a list of integers")
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise TensorFormatError(f"entry {pos}: 'val' must be a real number")
        pairs.append((tuple(idx), float(val)))
    name = doc.get("name")
    try:
        return make_tensor(order, dim, pairs, name=name)
    except ValueError as exc:
        raise TensorFormatError(str(exc)) from exc


def load_tensor(path: str | Path) -> Tensor:
    """Read a tensor document; warns (without failing) when the tensor is
    not symmetric, since classification applies regardless."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorFormatError(
            f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    T = doc_to_tensor(doc)
    if not is_symmetric(T):
        warnings.warn(f"{path}: tensor is not symmetric", stacklevel=2)
    return T


def save_tensor(T: Tensor, path: str | Path, name: str | None = None) -> None:
    Path(path).write_text(dump_tensor_doc(tensor_to_doc(T, name=name)))


def dump_tensor_doc(doc: dict) -> str:
    """Render a tensor document with one entry per line (diff-friendly)."""
    lines = ["{"]
    lines.append(f'  "order": {doc["order"]},')
    lines.append(f'  "dim": {doc["dim"]},')
    if "name" in doc:
        lines.append(f'  "name": {json.dumps(doc["name"])},')
    body = ",\n".join(
        "    " + json.dumps(entry, separators=(", ", ": ")) for entry in doc["entries"]
    )
    lines.append('  "entries": [' + ("\n" + body + "\n  ]" if body else "]"))
    lines.append("}")
    return "\n".join(lines) + "\n"


def content_hash(T: Tensor) -> str:
    """SHA-256 over the canonical sparse serialization of the entries."""
    doc = tensor_to_doc(T)
    payload = json.dumps(
        {"order": doc["order"], "dim": doc["dim"], "entries": doc["entries"]},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


# ---------------------------------------------------------------------------
# report documents


def witness_to_dict(w: Witness) -> dict:
    out = {"condition": w.condition, "lhs": w.lhs, "rhs": w.rhs}
    if w.index is not None:
        out["index"] = w.index
    if w.pair is not None:
        out["pair"] = list(w.pair)
    if w.multi_index is not None:
        out["multi_index"] = list(w.multi_index)
    return out


def class_report_to_dict(report: ClassReport) -> dict:
    return {
        "verdicts": dict(report.verdicts),
        "witnesses": {k: witness_to_dict(w) for k, w in report.witnesses.items()},
        "symmetric": report.symmetric,
        "even_order": report.even_order,
    }


def decomposition_to_dict(d: Decomposition) -> dict:
    return {
        "residual": tensor_to_doc(d.residual),
        "steps": [
            {"weight": weight, "rows": sorted(members)} for weight, members in d.steps
        ],
        "step_count": d.step_count,
        "max_beta_shift_error": d.max_beta_shift_error,
    }


def oracle_result_to_dict(r: OracleResult) -> dict:
    return {
        "min_value": r.min_value,
        "minimizer": list(r.minimizer),
        "normalization": r.normalization,
        "lambda_min_estimate": r.lambda_min_estimate,
        "samples": r.samples,
        "converged": r.converged,
        "witness": list(r.witness),
        "witness_value": r.witness_value,
    }


def certificate_to_dict(c: Certificate) -> dict:
    out = {"verdict": c.verdict, "route": c.route, "note": c.note}
    if c.decomposition is not None:
        out["decomposition"] = decomposition_to_dict(c.decomposition)
    if c.oracle_result is not None:
        out["oracle"] = oracle_result_to_dict(c.oracle_result)
    if c.witness is not None:
        out["witness"] = list(c.witness)
        out["witness_value"] = c.witness_value
    return out


def search_report_to_dict(r: SearchReport) -> dict:
    return {
        "trials": r.trials,
        "accepted": r.accepted,
        "seed": r.seed,
        "generator_params": dict(r.generator_params),
        "candidates": [
            {
                "trial": c.trial,
                "tensor": tensor_to_doc(c.tensor),
                "oracle": oracle_result_to_dict(c.oracle_result),
            }
            for c in r.candidates
        ],
    }


def build_report(
    T: Tensor,
    *,
    classes: ClassReport | None = None,
    certificate: Certificate | None = None,
    oracle_result: OracleResult | None = None,
    decomposition: Decomposition | None = None,
    seed: int | None = None,
    flags: dict | None = None,
    timestamp: str | None = None,
) -> dict:
    """Assemble the full machine-readable report for one input tensor."""
    report: dict = {
        "input": {
            "order": T.order,
            "dim": T.dim,
            "entry_count": int(np.count_nonzero(T.data)),
            "content_hash": content_hash(T),
            "name": T.name,
        },
        "tool": {"name": "btensor", "version": __version__},
        "seed": seed,
        "flags": dict(flags or {}),
    }
    if timestamp is not None:
        report["timestamp"] = timestamp
    if classes is not None:
        report["classes"] = class_report_to_dict(classes)
    if certificate is not None:
        report["certificate"] = certificate_to_dict(certificate)
    if oracle_result is not None:
        report["oracle"] = oracle_result_to_dict(oracle_result)
    if decomposition is not None:
        report["decomposition"] = decomposition_to_dict(decomposition)
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
