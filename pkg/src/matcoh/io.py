"""JSON descriptions of inputs and canonical serialization of outputs."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from typing import Any

from .arrangement import Arrangement
from .exactlin import IntMatrix, PresentedModule
from .graph import Graph
from .matroid import Matroid, from_graph, from_matrix, from_rank_table, from_uniform, non_pappus, pappus, validate_axioms
from .quasirep import (
    QuasiRep,
    RepresentationError,
    canonical_from_matrix,
    diagonal_u22,
    free_default,
    graphic_quasirep,
    uniform_canonical,
    validate,
)


class InputError(ValueError):
    """Malformed or inconsistent input (exit status 2)."""


@dataclass
class MatroidInput:
    matroid: Matroid
    kind: str
    graph: Graph | None = None
    matrix: IntMatrix | None = None
    params: dict | None = None


def read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def dumps(obj: Any) -> str:
    """Canonical text form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_text_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str, obj: Any) -> None:
    write_text_atomic(path, dumps(obj))


def _need(obj: dict, *keys: str) -> list:
    missing = [k for k in keys if k not in obj]
    if missing:
        raise InputError(f"{obj.get('type', 'input')} description is missing {', '.join(missing)}")
    return [obj[k] for k in keys]


def _int(x: Any, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{what} must be an integer, got {x!r}")
    return x


def _int_rows(rows: Any, what: str) -> list[list[int]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{what} must be a list of integer lists")
    return [[_int(x, what) for x in r] for r in rows]


def parse_graph(obj: dict) -> Graph:
    v, edges = _need(obj, "vertices", "edges")
    v = _int(v, "vertices")
    edges = _int_rows(edges, "edges")
    if any(len(e) != 2 for e in edges):
        raise InputError("every edge needs exactly two endpoints")
    try:
        return Graph.build(v, edges)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def parse_arrangement(obj: dict) -> Arrangement:
    dim, normals = _need(obj, "dim", "normals")
    try:
        return Arrangement.build(_int(dim, "dim"), _int_rows(normals, "normals"))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def parse_matroid(obj: Any) -> MatroidInput:
    if isinstance(obj, str):
        obj = {"type": obj}
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputError("matroid description needs a 'type' field")
    kind = obj["type"]
    try:
        if kind == "uniform":
            k, n = (_int(x, f) for x, f in zip(_need(obj, "k", "n"), ("k", "n")))
            return MatroidInput(from_uniform(k, n), kind, params={"k": k, "n": n})
        if kind == "graph":
            g = parse_graph(obj)
            return MatroidInput(from_graph(g), kind, graph=g)
        if kind == "matrix":
            (rows,) = _need(obj, "entries")
            rows = _int_rows(rows, "entries")
            ncols = len(rows[0]) if rows else _int(obj.get("n", 0), "n")
            if any(len(r) != ncols for r in rows):
                raise InputError("matrix rows have different lengths")
            A = IntMatrix.from_rows(rows, ncols=ncols)
            return MatroidInput(from_matrix(A), kind, matrix=A)
        if kind == "rank_table":
            n, ranks = _need(obj, "n", "ranks")
            n = _int(n, "n")
            ranks = [_int(x, "ranks") for x in ranks]
            m = from_rank_table(n, ranks)
            v = validate_axioms(m)
            if not v.passed:
                raise InputError(f"rank table violates {v.property} at {v.witness}")
            return MatroidInput(m, kind)
        if kind == "pappus":
            return MatroidInput(pappus(), kind)
        if kind == "non_pappus":
            return MatroidInput(non_pappus(), kind)
        if kind == "u22_diagonal":
            a, b = (_int(x, f) for x, f in zip(_need(obj, "a", "b"), ("a", "b")))
            return MatroidInput(from_uniform(2, 2), kind, params={"a": a, "b": b})
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown matroid type {kind!r}")


def _default_quasirep(mi: MatroidInput) -> str:
    return {
        "graph": "graphic",
        "matrix": "canonical",
        "u22_diagonal": "u22_diagonal",
        "uniform": "canonical",
    }.get(mi.kind, "free_default")


def parse_explicit_quasirep(m: Matroid, obj: dict) -> QuasiRep:
    """{"gens": g, "relations": [[...] columns], "flats": {"<bitmask>": [[...] columns]}}."""
    (flats,) = _need(obj, "flats")
    if not isinstance(flats, dict):
        raise InputError("'flats' must map bitmasks to generator lists")
    cols_of = {}
    for key, cols in flats.items():
        try:
            mask = int(key, 0) if isinstance(key, str) else int(key)
        except ValueError as exc:
            raise InputError(f"flat key {key!r} is not a bitmask") from exc
        cols_of[mask] = _int_rows(cols, f"generators of flat {key}")
    g = obj.get("gens")
    if g is None:
        g = max((len(c) for cs in cols_of.values() for c in cs), default=0)
    g = _int(g, "gens")
    rel = _int_rows(obj.get("relations", []), "relations")
    try:
        N = PresentedModule(g, IntMatrix.from_columns(rel, nrows=g) if rel else IntMatrix.zeros(g, 0))
        values = {}
        for F in m.flats():
            if F not in cols_of:
                raise InputError(f"no generators given for the flat with bitmask {F}")
            cs = cols_of[F]
            values[F] = IntMatrix.from_columns(cs, nrows=g) if cs else IntMatrix.zeros(g, 0)
        return QuasiRep(m, N, values, "explicit")
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from exc


def build_quasirep(mi: MatroidInput, desc: Any = None) -> QuasiRep:
    """Quasi-representation by name, explicit object, or the input's default."""
    if desc is None:
        desc = _default_quasirep(mi)
    if isinstance(desc, dict):
        q = parse_explicit_quasirep(mi.matroid, desc)
    else:
        q = _named_quasirep(mi, desc)
    v = validate(q)
    if not v.passed:
        raise InputError(f"invalid quasi-representation: {v.property} fails at {v.witness}")
    return q


def _named_quasirep(mi: MatroidInput, name: str) -> QuasiRep:
    m = mi.matroid
    try:
        if name == "free_default":
            return free_default(m)
        if name == "graphic":
            if mi.graph is None:
                raise InputError("the graphic quasi-representation needs graph input")
            return graphic_quasirep(mi.graph)
        if name == "canonical":
            if mi.graph is not None:
                return graphic_quasirep(mi.graph)
            if mi.matrix is not None:
                return canonical_from_matrix(m, mi.matrix)
            if mi.kind == "uniform":
                return uniform_canonical(mi.params["k"], mi.params["n"])
            raise InputError("the canonical quasi-representation needs matrix or graph input")
        if name == "u22_diagonal":
            if mi.kind != "u22_diagonal":
                raise InputError("u22_diagonal needs input of type u22_diagonal")
            return diagonal_u22(mi.params["a"], mi.params["b"])
    except RepresentationError as exc:
        raise InputError(f"{exc}; witness {getattr(exc, 'witness', None)}") from exc
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown quasi-representation {name!r}")
