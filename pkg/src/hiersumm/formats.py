"""CSV hierarchy/facts/weights files and the JSON report.

Hierarchy file (one per dimension): header ``id,parent_id,name``; the root
row has an empty ``parent_id``; row order is child order.

Facts file: header ``dim1,...,dimd,metric_pre,metric_cur``; dimension columns
hold leaf ids. Repeated leaf tuples are summed.

Weights file: header ``dim1,...,dimd,weight``; any node ids. Lets instances
whose weights are not derived from leaf cells (the conflict and reduction
families) travel through files too.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from .core import DimensionTree, ProductSpace
from .errors import InputError, ParseError, StructureError
from .solver import Solution
from .weights import AggregateTable, CellTable, WeightMap

SCHEMA_VERSION = 1
HIERARCHY_HEADER = ["id", "parent_id", "name"]


def _fmt(x: float) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 2 ** 53 else repr(x)


def _read_rows(path):
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("file is empty, header required", path=path, line=1) from None
        header = [h.strip() for h in header]
        rows = [(reader.line_num, row) for row in reader if row and any(c.strip() for c in row)]
    return path, header, rows


def read_hierarchy(path) -> DimensionTree:
    path, header, rows = _read_rows(path)
    if header != HIERARCHY_HEADER:
        raise ParseError(f"expected header {','.join(HIERARCHY_HEADER)}, got {','.join(header)}",
                         path=path, line=1)
    out = []
    seen = {}
    for line, row in rows:
        if len(row) != 3:
            raise ParseError(f"expected 3 columns, got {len(row)}", path=path, line=line)
        key, parent, name = (c.strip() for c in row)
        if not key:
            raise ParseError("empty id", path=path, line=line)
        if key in seen:
            raise ParseError(f"duplicate id {key!r} (first on line {seen[key]})", path=path, line=line)
        seen[key] = line
        out.append((key, parent or None, name or key))
    try:
        return DimensionTree.from_rows(out)
    except StructureError as exc:
        raise InputError(f"{path}: {exc}") from None


def write_hierarchy(tree: DimensionTree, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HIERARCHY_HEADER)
        for v in range(len(tree)):
            p = tree.parents[v]
            w.writerow([tree.ids[v], "" if p is None else tree.ids[p], tree.names[v]])


def _dim_header(d: int) -> list[str]:
    return [f"dim{i + 1}" for i in range(d)]


def _parse_number(text, path, line, what):
    try:
        x = float(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not a number", path=path, line=line) from None
    if not math.isfinite(x):
        raise ParseError(f"{what} {text!r} is not finite", path=path, line=line)
    if x < 0:
        raise InputError(f"{path}:{line}: {what} must be nonnegative, got {text}")
    return x


def _parse_node(space, cells, path, line):
    coords = []
    for i, (tree, key) in enumerate(zip(space.trees, cells)):
        key = key.strip()
        try:
            coords.append(tree.index(key))
        except StructureError:
            raise InputError(f"{path}:{line}: unknown node id {key!r} in dimension {i + 1}") from None
    return tuple(coords)


def read_facts(path, space: ProductSpace) -> CellTable:
    path, header, rows = _read_rows(path)
    expected = _dim_header(space.d) + ["metric_pre", "metric_cur"]
    if header != expected:
        raise ParseError(f"expected header {','.join(expected)}, got {','.join(header)}",
                         path=path, line=1)
    coords, pre, cur = [], [], []
    for line, row in rows:
        if len(row) != space.d + 2:
            raise ParseError(f"expected {space.d + 2} columns, got {len(row)}", path=path, line=line)
        v = _parse_node(space, row[: space.d], path, line)
        if not space.is_leaf(v):
            raise InputError(f"{path}:{line}: facts must reference leaf tuples, "
                             f"{space.ids_of(v)} is not one")
        coords.append(v)
        pre.append(_parse_number(row[space.d], path, line, "metric_pre"))
        cur.append(_parse_number(row[space.d + 1], path, line, "metric_cur"))
    return CellTable(space, np.array(coords, dtype=np.int64).reshape(-1, space.d), pre, cur)


def write_facts(cells: CellTable, path) -> None:
    space = cells.space
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_dim_header(space.d) + ["metric_pre", "metric_cur"])
        for v, (t, l) in cells.merged().items():
            w.writerow(list(space.ids_of(v)) + [_fmt(t), _fmt(l)])


def read_weights(path, space: ProductSpace) -> WeightMap:
    path, header, rows = _read_rows(path)
    expected = _dim_header(space.d) + ["weight"]
    if header != expected:
        raise ParseError(f"expected header {','.join(expected)}, got {','.join(header)}",
                         path=path, line=1)
    out: dict = {}
    for line, row in rows:
        if len(row) != space.d + 1:
            raise ParseError(f"expected {space.d + 1} columns, got {len(row)}", path=path, line=line)
        v = _parse_node(space, row[: space.d], path, line)
        if v in out:
            raise InputError(f"{path}:{line}: duplicate weight for {space.ids_of(v)}")
        out[v] = _parse_number(row[space.d], path, line, "weight")
    return WeightMap.from_dict(space, out)


def write_weights(weights: WeightMap, path) -> None:
    space = weights.space
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_dim_header(space.d) + ["weight"])
        for v, x in weights.positive_items():
            w.writerow(list(space.ids_of(v)) + [_fmt(x)])


def ingest(hierarchy_paths: Sequence, facts_path) -> tuple[ProductSpace, CellTable]:
    if not hierarchy_paths:
        raise InputError("at least one hierarchy file is required")
    space = ProductSpace([read_hierarchy(p) for p in hierarchy_paths])
    return space, read_facts(facts_path, space)


def write_instance(directory, space: ProductSpace, *, cells: CellTable | None = None,
                   weights: WeightMap | None = None) -> dict:
    """Write ``dim<i>.csv`` hierarchies plus ``facts.csv`` and/or ``weights.csv``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = {"hierarchies": []}
    for i, tree in enumerate(space.trees):
        p = directory / f"dim{i + 1}.csv"
        write_hierarchy(tree, p)
        files["hierarchies"].append(str(p))
    if cells is not None:
        files["facts"] = str(directory / "facts.csv")
        write_facts(cells, files["facts"])
    if weights is not None:
        files["weights"] = str(directory / "weights.csv")
        write_weights(weights, files["weights"])
    return files


def build_report(space: ProductSpace, solution: Solution, *, k: int, weight_fn: dict,
                 aggregates: AggregateTable | None = None) -> dict:
    """JSON-ready "top movers" report for a solution."""
    totals = aggregates.totals if aggregates is not None else (None, None)
    entries = []
    for v, w in zip(solution.segments, solution.weights):
        e = {
            "coordinates": list(space.names_of(v)),
            "ids": list(space.ids_of(v)),
            "weight": w,
        }
        if aggregates is not None:
            t, l = aggregates.get(v)
            e.update(
                t_v=t, l_v=l, delta=l - t,
                share_pre=t / totals[0] if totals[0] > 0 else None,
                share_cur=l / totals[1] if totals[1] > 0 else None,
            )
        entries.append(e)
    entries.sort(key=lambda e: -e["weight"])
    return {
        "schema": SCHEMA_VERSION,
        "summary": {
            "k": k,
            "weight_function": weight_fn,
            "total_weight": solution.total_weight,
            "n_segments": len(entries),
            "dimensions": space.d,
            "n_nodes": space.n,
            "grand_total_pre": totals[0],
            "grand_total_cur": totals[1],
        },
        "entries": entries,
    }
