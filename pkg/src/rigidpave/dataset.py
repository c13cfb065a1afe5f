"""Factorial training grid for the k-value surrogate and its CSV format."""

from __future__ import annotations

import csv
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .ann import INPUT_NAMES, GRID_LEVELS
from .deflection import LAYERED, FwdLoad
from .errors import FixtureError, RigidPaveError, SolverError
from .kvalue import modified_k
from .provenance import header_lines, strip_comments
from .slab_structure import PavementSection

#: Abort generation when more than this fraction of rows fail.
MAX_FAILURE_FRACTION = 0.01

DATASET_COLUMNS = INPUT_NAMES + ("k_pci", "grid_index", "status")


@dataclass
class Dataset:
    x: np.ndarray  # N x 6, SI
    y: np.ndarray  # N, pci
    index: list  # grid coordinates per row, e.g. "0-2-1-5-3-4"
    failures: list  # (grid index, message) of rows without a target

    def __len__(self):
        return len(self.y)


def reduced_levels(levels=GRID_LEVELS, n: int = 3):
    """``n`` evenly spaced sublevels of each factor (first, middle, last for n=3)."""
    out = []
    for lev in levels:
        idx = sorted({int(round(i)) for i in np.linspace(0, len(lev) - 1, n)})
        out.append(tuple(lev[i] for i in idx))
    return tuple(out)


def grid_rows(levels=GRID_LEVELS):
    """Full factorial in a fixed order: last factor varies fastest."""
    ranges = [range(len(l)) for l in levels]
    for idx in itertools.product(*ranges):
        yield idx, tuple(levels[j][i] for j, i in enumerate(idx))


def section_from_inputs(x: Sequence[float]) -> PavementSection:
    h_s, h_b, e_s, e_b, e_sg, delta = x
    return PavementSection(h_s=h_s, h_b=h_b, e_slab=e_s, e_base=e_b, e_subgrade=e_sg, delta=delta)


def exact_k(x: Sequence[float], model: str = LAYERED, load: FwdLoad = FwdLoad()) -> float:
    """Target k (pci) of one input row through the full forward chain."""
    return modified_k(section_from_inputs(x), None, load, model=model).k_pci


def _solve_row(args):
    x, model = args
    try:
        return exact_k(x, model), ""
    except (RigidPaveError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return float("nan"), f"{type(exc).__name__}: {exc}"


def generate_dataset(
    levels=GRID_LEVELS,
    *,
    model: str = LAYERED,
    workers: int = 1,
    forward: Callable | None = None,
) -> Dataset:
    """Evaluate the forward chain on every grid point.

    Failed rows are recorded and skipped; more than 1 % failures raise
    :class:`SolverError`.  Row order is that of :func:`grid_rows` whatever
    the worker count.
    """
    rows = list(grid_rows(levels))
    jobs = [(x, model) for _, x in rows]
    if forward is not None:
        results = []
        for x, _ in jobs:
            try:
                results.append((forward(x), ""))
            except (RigidPaveError, ArithmeticError) as exc:
                results.append((float("nan"), f"{type(exc).__name__}: {exc}"))
    elif workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_solve_row, jobs, chunksize=64))
    else:
        results = [_solve_row(j) for j in jobs]

    xs, ys, index, failures = [], [], [], []
    for (idx, x), (k, msg) in zip(rows, results):
        tag = "-".join(map(str, idx))
        if msg:
            failures.append((tag, msg))
            continue
        xs.append(x)
        ys.append(k)
        index.append(tag)
    if len(failures) > MAX_FAILURE_FRACTION * len(rows):
        raise SolverError(
            f"{len(failures)} of {len(rows)} grid rows failed; first: {failures[0][0]} {failures[0][1]}",
            residual=len(failures) / len(rows),
        )
    return Dataset(np.asarray(xs, dtype=float).reshape(-1, len(levels)), np.asarray(ys), index, failures)


DATASET_UNITS = "h_s_m m, h_b_m m, e_slab_pa Pa, e_base_pa Pa, e_subgrade_pa Pa, delta -, k_pci lbf/in^3"


def write_dataset(path, data: Dataset, config: dict) -> None:
    with open(path, "w", newline="") as fh:
        for line in header_lines("dataset", config, DATASET_UNITS):
            fh.write(line + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DATASET_COLUMNS)
        for x, k, tag in zip(data.x, data.y, data.index):
            w.writerow([repr(float(v)) for v in x] + [repr(float(k)), tag, "ok"])
        for tag, msg in data.failures:
            w.writerow([""] * len(INPUT_NAMES) + ["", tag, f"failed: {msg}"])


def read_dataset(path) -> Dataset:
    path = Path(path)
    xs, ys, index, failures = [], [], [], []
    with open(path, newline="") as fh:
        lines = strip_comments(fh)
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None or tuple(header) != DATASET_COLUMNS:
        raise FixtureError(f"{path}: dataset columns {header} do not match {list(DATASET_COLUMNS)}")
    for n, row in enumerate(reader, start=2):
        if len(row) != len(DATASET_COLUMNS):
            raise FixtureError(f"{path}: data row {n}: expected {len(DATASET_COLUMNS)} cells, got {len(row)}")
        if row[-1] != "ok":
            failures.append((row[-2], row[-1]))
            continue
        try:
            vals = [float(v) for v in row[: len(INPUT_NAMES) + 1]]
        except ValueError as exc:
            raise FixtureError(f"{path}: data row {n}: {exc}") from None
        xs.append(vals[:-1])
        ys.append(vals[-1])
        index.append(row[-2])
    return Dataset(np.asarray(xs, dtype=float).reshape(-1, len(INPUT_NAMES)), np.asarray(ys), index, failures)
