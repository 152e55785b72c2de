"""Seeded Monte Carlo harness: empirical power, level, and null diagnostics.

Every replication draws from a stream derived from the content of
``(seed, alpha, rho, n, replication index)``, so a cell's value does not
depend on where it sits in a grid, on the order cells are computed in, or on
how many worker threads run.  Replications run on a thread pool; the hot
work (stable transforms, box maxima) releases the GIL in both kernel
backends.  ``SMT_THREADS`` caps the worker count.
"""

from __future__ import annotations

import json
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .fields import (
    KIND_IID,
    KIND_MA,
    FieldSpec,
    field_spec_string,
    realize,
)
from .memory_test import TestConfig, compute_statistic, origin_box, shifted_box
from .stable_core import RngStream

SCHEMA = "smt/1"


def _resolve_threads(threads=None) -> int:
    if threads is not None:
        return max(1, int(threads))
    available = os.cpu_count() or 1
    env = os.environ.get("SMT_THREADS")
    if env:
        return max(1, min(available, int(env)))
    return available


def _float_bits(x: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", float(x)))[0]


def replication_stream(seed: int, alpha: float, rho: float, n: int, rep: int) -> RngStream:
    """Stream for one replication, keyed by parameter values rather than grid
    positions."""
    return RngStream(
        seed=int(seed),
        stream_id=int(rep),
        key=(_float_bits(alpha), _float_bits(rho), int(n)),
    )


def replication_samples(field: FieldSpec, config: TestConfig, replications: int,
                        seed: int, threads=None):
    """Run the test on ``replications`` fresh realizations.

    Returns arrays ``(u_n, v_n, t_n, reject)`` indexed by replication.  Any
    failed replication aborts the run; failures are never skipped silently.
    """
    replications = int(replications)
    if replications < 1:
        raise ValueError(f"replications must be at least 1, got {replications}")
    support = [origin_box(config.n, config.dim), shifted_box(config.n, config.rho, config.dim)]

    u = np.empty(replications)
    v = np.empty(replications)
    t = np.empty(replications)
    rej = np.zeros(replications, dtype=bool)

    def run_range(lo, hi):
        for i in range(lo, hi):
            rng = replication_stream(seed, config.alpha, config.rho, config.n, i)
            result = compute_statistic(realize(field, rng, support), config)
            u[i] = result.u_n
            v[i] = result.v_n
            t[i] = result.t_n
            rej[i] = result.reject

    workers = min(_resolve_threads(threads), replications)
    if workers == 1:
        run_range(0, replications)
    else:
        chunk = max(1, -(-replications // (workers * 4)))
        starts = range(0, replications, chunk)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_range, lo, min(lo + chunk, replications)) for lo in starts]
            for f in futures:
                f.result()
    return u, v, t, rej


def empirical_power(field: FieldSpec, config: TestConfig, replications: int,
                    seed: int, threads=None) -> float:
    """Fraction of replications rejected; an exact multiple of 1/replications."""
    _, _, _, rej = replication_samples(field, config, replications, seed, threads)
    return int(rej.sum()) / len(rej)


@dataclass(frozen=True)
class LevelResult:
    """Empirical rejection frequency under a short-memory (null) field."""

    field_spec: str
    config: TestConfig
    replications: int
    seed: int
    empirical_level: float


def empirical_level(field: FieldSpec, config: TestConfig, replications: int,
                    seed: int, threads=None) -> LevelResult:
    if field.kind not in (KIND_IID, KIND_MA):
        raise ValueError(
            f"empirical_level expects a short-memory field kind (iid or ma), got {field.kind!r}"
        )
    frequency = empirical_power(field, config, replications, seed, threads)
    return LevelResult(
        field_spec=field_spec_string(field),
        config=config,
        replications=int(replications),
        seed=int(seed),
        empirical_level=frequency,
    )


def null_statistic_sample(field: FieldSpec, config: TestConfig, replications: int,
                          seed: int, threads=None) -> np.ndarray:
    """The t_n draws themselves, for goodness-of-fit diagnostics."""
    _, _, t, _ = replication_samples(field, config, replications, seed, threads)
    return t


def ks_distance(sample, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance between an empirical sample and
    a distribution function: sup over jump points of both one-sided gaps."""
    xs = np.sort(np.asarray(sample, dtype=float))
    m = xs.size
    if m == 0:
        raise ValueError("ks_distance needs a nonempty sample")
    f = np.array([cdf(x) for x in xs])
    upper = np.arange(1, m + 1) / m
    lower = np.arange(0, m) / m
    return float(max(np.max(np.abs(f - upper)), np.max(np.abs(f - lower))))


@dataclass(frozen=True)
class ExperimentGrid:
    """A power study: one field kind crossed with alpha, rho, and n lists."""

    field: FieldSpec
    alphas: tuple
    rhos: tuple
    ns: tuple
    beta: float
    replications: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "rhos", tuple(float(r) for r in self.rhos))
        object.__setattr__(self, "ns", tuple(int(n) for n in self.ns))
        if not (self.alphas and self.rhos and self.ns):
            raise ValueError("alphas, rhos, and ns must all be nonempty")
        if int(self.replications) < 1:
            raise ValueError("replications must be at least 1")


@dataclass(frozen=True)
class PowerTable:
    """Rejection frequencies for one alpha over a (rho, n) grid."""

    field_spec: str
    alpha: float
    beta: float
    rhos: tuple
    ns: tuple
    cells: dict
    replications: int
    seed: int


def power_table(grid: ExperimentGrid, threads=None):
    """One PowerTable per alpha.  Cell streams depend only on parameter
    values, so permuting the lists permutes cells without changing them."""
    tables = []
    for alpha in grid.alphas:
        field = replace(grid.field, alpha=alpha)
        cells = {}
        for rho in grid.rhos:
            for n in grid.ns:
                config = TestConfig(alpha=alpha, dim=field.dim, n=n, rho=rho, beta=grid.beta)
                cells[(rho, n)] = empirical_power(
                    field, config, grid.replications, grid.seed, threads
                )
        tables.append(
            PowerTable(
                field_spec=field_spec_string(field),
                alpha=alpha,
                beta=grid.beta,
                rhos=grid.rhos,
                ns=grid.ns,
                cells=cells,
                replications=grid.replications,
                seed=grid.seed,
            )
        )
    return tables


def format_sig(x) -> str:
    """Fixed 6-significant-digit decimal format used for all text output."""
    return format(float(x), ".6g")


def power_table_csv(table: PowerTable) -> str:
    lines = ["rho," + ",".join(f"n={n}" for n in table.ns)]
    for rho in table.rhos:
        cells = ",".join(format_sig(table.cells[(rho, n)]) for n in table.ns)
        lines.append(f"{format_sig(rho)},{cells}")
    return "\n".join(lines) + "\n"


def power_table_json(table: PowerTable) -> str:
    doc = {
        "schema": SCHEMA,
        "kind": "power_table",
        "field": table.field_spec,
        "alpha": table.alpha,
        "beta": table.beta,
        "replications": table.replications,
        "seed": table.seed,
        "rhos": list(table.rhos),
        "ns": list(table.ns),
        "cells": [
            {"rho": rho, "n": n, "power": table.cells[(rho, n)]}
            for rho in table.rhos
            for n in table.ns
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def write_power_tables(tables, out_dir, fmt="csv"):
    """Write one file per alpha into ``out_dir``; returns the paths."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for table in tables:
        name = f"power_alpha_{format_sig(table.alpha)}.{fmt}"
        path = os.path.join(out_dir, name)
        text = power_table_csv(table) if fmt == "csv" else power_table_json(table)
        with open(path, "w") as fh:
            fh.write(text)
        paths.append(path)
    return paths
