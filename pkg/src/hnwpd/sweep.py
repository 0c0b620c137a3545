"""Replicated parameter sweeps over temptation, hub fraction, and degree.

Every data point aggregates ``n_realizations`` independently sampled
network topologies times ``n_runs`` dynamics runs per topology. Topology
seeds and run seeds are derived from a single master seed with a
documented SplitMix64 mix (see :func:`derive_seed`), so a sweep is a pure
function of (spec, master_seed): reruns, and runs split across any number
of worker processes, produce byte-identical output. Raw per-run values
are kept on every record so the aggregates can be audited.

Output goes to CSV (fixed column set, 6 significant digits) with an
optional JSON mirror carrying the raw run arrays.
"""

from __future__ import annotations

import json
import math
import multiprocessing
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .dynamics import ABSORBED_NONE, SimProtocol, run_simulation
from .game import RULE_ACCUMULATED, RULE_AVERAGE, GameParams
from .network import degree_stats, generate_hnw

__all__ = [
    "SweepSpec",
    "SweepRecord",
    "HeterogeneityPoint",
    "derive_seed",
    "default_hub_grid",
    "default_b_grid",
    "run_point",
    "sweep_hub_fraction",
    "sweep_b",
    "sweep_grid",
    "sweep_m",
    "heterogeneity_curve",
    "write_records_csv",
    "write_records_json",
    "write_heterogeneity_csv",
]

_MASK64 = (1 << 64) - 1

# Stream tags separating topology seeds from run seeds ("graph" / "runs"
# in ASCII). A realization's topology must not depend on which run index
# consumes it, hence two sub-masters instead of a sentinel run index.
_GRAPH_STREAM = 0x6772617068
_RUN_STREAM = 0x72756E73


def _splitmix64(value: int) -> int:
    value = (value + 0x9E3779B97F4A7C15) & _MASK64
    value = ((value ^ (value >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    value = ((value ^ (value >> 27)) * 0x94D049BB133111EB) & _MASK64
    return value ^ (value >> 31)


def derive_seed(
    master_seed: int,
    realization_index: int,
    run_index: int,
    point_index: int,
) -> int:
    """Derive a 64-bit seed for one (realization, run, point) replicate.

    The mix is fixed for all time: starting from ``master_seed`` masked to
    64 bits, fold in each index with ``h = splitmix64(h ^ splitmix64(i))``
    in the order realization, run, point, where splitmix64 is the standard
    finalizer (γ = 0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and
    0x94D049BB133111EB). Distinct index triples map to distinct seeds for
    every replicate structure used here; sweeps verify that exhaustively
    before running.
    """
    h = master_seed & _MASK64
    for index in (realization_index, run_index, point_index):
        h = _splitmix64(h ^ _splitmix64(index & _MASK64))
    return h


def _stream_master(master_seed: int, tag: int) -> int:
    return _splitmix64((master_seed & _MASK64) ^ tag)


def default_hub_grid(node_count: int, points: int = 12) -> tuple[int, ...]:
    """Log-spaced hub counts from 1 to ``node_count`` inclusive."""
    if points < 2:
        raise ValueError("need at least 2 grid points")
    raw = np.exp(np.linspace(0.0, math.log(node_count), points))
    grid = sorted({int(round(v)) for v in raw})
    grid[0], grid[-1] = 1, node_count
    return tuple(sorted(set(grid)))


def default_b_grid() -> tuple[float, ...]:
    """Temptation grid 1.0 to 2.0 in steps of 0.05."""
    return tuple(round(1.0 + 0.05 * i, 2) for i in range(21))


@dataclass(frozen=True)
class SweepSpec:
    """Parameter grids plus the replication structure of a sweep.

    Grids left as None fall back to per-sweep defaults where one exists
    (hub grid: log-spaced including the endpoints 1 and N; temptation
    grid: 1.0..2.0 step 0.05). Grids are normalized to sorted unique
    tuples so the canonical point order, and with it every derived seed,
    is independent of how the caller listed values.
    """

    node_count: int
    ring_halfwidth: int = 2
    shortcut_count: int = 0
    b_values: tuple[float, ...] | None = None
    hub_counts: tuple[int, ...] | None = None
    m_values: tuple[int, ...] | None = None
    rule: str = RULE_ACCUMULATED
    protocol: SimProtocol = field(default_factory=SimProtocol)
    n_realizations: int = 10
    n_runs: int = 10
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.rule not in (RULE_ACCUMULATED, RULE_AVERAGE):
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.n_realizations < 1 or self.n_runs < 1:
            raise ValueError("replicate counts must be >= 1")
        if self.shortcut_count < 0:
            raise ValueError("shortcut_count must be >= 0")
        for name, norm in (
            ("b_values", self._norm_b),
            ("hub_counts", self._norm_hubs),
            ("m_values", self._norm_m),
        ):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, norm(value))

    def _norm_b(self, values: Sequence[float]) -> tuple[float, ...]:
        out = tuple(sorted({float(b) for b in values}))
        if not out:
            raise ValueError("b_values grid is empty")
        for b in out:
            GameParams(b, self.rule)  # validates the range
        return out

    def _norm_hubs(self, values: Sequence[int]) -> tuple[int, ...]:
        out = tuple(sorted({int(h) for h in values}))
        if not out:
            raise ValueError("hub_counts grid is empty")
        if out[0] < 1 or out[-1] > self.node_count:
            raise ValueError(
                f"hub_counts must lie in [1, {self.node_count}], got {out}"
            )
        return out

    def _norm_m(self, values: Sequence[int]) -> tuple[int, ...]:
        out = tuple(sorted({int(m) for m in values}))
        if not out:
            raise ValueError("m_values grid is empty")
        if out[0] < 0:
            raise ValueError("m_values must be >= 0")
        return out

    def resolved_hub_counts(self) -> tuple[int, ...]:
        if self.hub_counts is not None:
            return self.hub_counts
        return default_hub_grid(self.node_count)

    def resolved_b_values(self) -> tuple[float, ...]:
        if self.b_values is not None:
            return self.b_values
        return default_b_grid()


@dataclass(frozen=True)
class SweepRecord:
    """One aggregated data point of a sweep.

    ``run_values`` holds the raw per-run cooperator frequencies in
    (realization, run) order; the aggregates are plain statistics of that
    array, recomputable by anyone holding the record.
    """

    temptation: float
    hub_count: int
    node_count: int
    ring_halfwidth: int
    shortcut_count: int
    rule: str
    rho_mean: float
    rho_std: float
    rho_stderr: float
    n_replicates: int
    absorbed_fraction: float
    run_values: tuple[float, ...]

    @property
    def proper_pd(self) -> bool:
        return 1.0 < self.temptation < 2.0


@dataclass(frozen=True)
class HeterogeneityPoint:
    """Mean degree dispersion of one hub-count, averaged over realizations."""

    hub_count: int
    hub_fraction: float
    heterogeneity: float
    variance: float
    n_realizations: int


# ----------------------------------------------------------------------
# Execution engine
# ----------------------------------------------------------------------

# A job is one network realization plus all its runs; tuple layout:
# (node_count, kappa, hub_count, m, b, rule, protocol, graph_seed, run_seeds)


def _realization_job(job):
    node_count, kappa, hub_count, m, b, rule, protocol, graph_seed, run_seeds = job
    graph = generate_hnw(node_count, kappa, hub_count, m, graph_seed)
    params = GameParams(b, rule)
    rhos = []
    absorbed = []
    for run_seed in run_seeds:
        result = run_simulation(graph, params, protocol, rng=run_seed)
        rhos.append(result.mean_coop_frequency)
        absorbed.append(result.absorbed != ABSORBED_NONE)
    return rhos, absorbed


def _point_jobs(spec: SweepSpec, point_index: int, b: float, hub_count: int,
                shortcut_count: int) -> list[tuple]:
    graph_master = _stream_master(spec.master_seed, _GRAPH_STREAM)
    run_master = _stream_master(spec.master_seed, _RUN_STREAM)
    jobs = []
    for real in range(spec.n_realizations):
        graph_seed = derive_seed(graph_master, real, 0, point_index)
        run_seeds = tuple(
            derive_seed(run_master, real, run, point_index)
            for run in range(spec.n_runs)
        )
        jobs.append((
            spec.node_count, spec.ring_halfwidth, hub_count, shortcut_count,
            b, spec.rule, spec.protocol, graph_seed, run_seeds,
        ))
    return jobs


def _check_seed_distinctness(spec: SweepSpec, n_points: int) -> None:
    graph_master = _stream_master(spec.master_seed, _GRAPH_STREAM)
    run_master = _stream_master(spec.master_seed, _RUN_STREAM)
    seeds = set()
    count = 0
    for point in range(n_points):
        for real in range(spec.n_realizations):
            seeds.add(derive_seed(graph_master, real, 0, point))
            count += 1
            for run in range(spec.n_runs):
                seeds.add(derive_seed(run_master, real, run, point))
                count += 1
    if len(seeds) != count:
        raise RuntimeError(
            "seed derivation collision detected; refusing to run a sweep "
            "with correlated replicates"
        )


def _aggregate(spec: SweepSpec, b: float, hub_count: int, shortcut_count: int,
               results) -> SweepRecord:
    values: list[float] = []
    absorbed: list[bool] = []
    for rhos, flags in results:
        values.extend(rhos)
        absorbed.extend(flags)
    arr = np.asarray(values)
    n = arr.size
    std = float(arr.std(ddof=1)) if n > 1 else 0.0
    return SweepRecord(
        temptation=b,
        hub_count=hub_count,
        node_count=spec.node_count,
        ring_halfwidth=spec.ring_halfwidth,
        shortcut_count=shortcut_count,
        rule=spec.rule,
        rho_mean=float(arr.mean()),
        rho_std=std,
        rho_stderr=std / math.sqrt(n),
        n_replicates=n,
        absorbed_fraction=float(np.mean(absorbed)),
        run_values=tuple(values),
    )


def iter_point_records(
    spec: SweepSpec,
    points: Sequence[tuple[float, int, int]],
    n_workers: int = 1,
) -> Iterator[SweepRecord]:
    """Yield one aggregated record per (b, hub_count, m) point, in order.

    Points execute sequentially; the realizations inside a point fan out
    over ``n_workers`` processes. Completion order cannot affect output:
    job results are consumed in submission order.
    """
    _check_seed_distinctness(spec, len(points))
    pool = None
    if n_workers > 1:
        pool = multiprocessing.Pool(n_workers)
    try:
        for index, (b, hub_count, shortcut_count) in enumerate(points):
            jobs = _point_jobs(spec, index, b, hub_count, shortcut_count)
            if pool is None:
                results = [_realization_job(job) for job in jobs]
            else:
                results = pool.map(_realization_job, jobs)
            yield _aggregate(spec, b, hub_count, shortcut_count, results)
    finally:
        if pool is not None:
            pool.close()
            pool.join()


def run_point(
    spec: SweepSpec,
    temptation: float,
    hub_count: int,
    shortcut_count: int | None = None,
    point_index: int = 0,
    n_workers: int = 1,
) -> SweepRecord:
    """Aggregate one parameter point: n_realizations graphs x n_runs runs."""
    m = spec.shortcut_count if shortcut_count is None else shortcut_count
    jobs = _point_jobs(spec, point_index, temptation, hub_count, m)
    if n_workers > 1:
        with multiprocessing.Pool(n_workers) as pool:
            results = pool.map(_realization_job, jobs)
    else:
        results = [_realization_job(job) for job in jobs]
    return _aggregate(spec, temptation, hub_count, m, results)


# ----------------------------------------------------------------------
# Sweep families
# ----------------------------------------------------------------------


def _hub_fraction_points(spec: SweepSpec) -> list[tuple[float, int, int]]:
    if spec.b_values is None:
        raise ValueError("hub-fraction sweeps need explicit b_values")
    hubs = spec.resolved_hub_counts()
    return [(b, h, spec.shortcut_count) for b in spec.b_values for h in hubs]


def sweep_hub_fraction(spec: SweepSpec, n_workers: int = 1) -> list[SweepRecord]:
    """Cooperation level across the hub-count grid, one series per b.

    The default grid is log-spaced in hub count and always includes the
    extremes: a single hub (all shortcuts on one center) and hubs
    everywhere (homogeneous small world).
    """
    return list(iter_point_records(spec, _hub_fraction_points(spec), n_workers))


def sweep_b(spec: SweepSpec, n_workers: int = 1) -> list[SweepRecord]:
    """Cooperation level across the temptation grid at fixed hub counts."""
    if spec.hub_counts is None:
        raise ValueError("temptation sweeps need explicit hub_counts")
    points = [
        (b, h, spec.shortcut_count)
        for b in spec.resolved_b_values()
        for h in spec.hub_counts
    ]
    return list(iter_point_records(spec, points, n_workers))


def sweep_grid(spec: SweepSpec, n_workers: int = 1) -> list[list[SweepRecord]]:
    """Dense (b x hub_count) matrix of records, row-major in b."""
    if spec.b_values is None:
        raise ValueError("grid sweeps need explicit b_values")
    hubs = spec.resolved_hub_counts()
    points = [(b, h, spec.shortcut_count) for b in spec.b_values for h in hubs]
    flat = list(iter_point_records(spec, points, n_workers))
    width = len(hubs)
    return [flat[i:i + width] for i in range(0, len(flat), width)]


def sweep_m(spec: SweepSpec, n_workers: int = 1) -> list[SweepRecord]:
    """Hub-fraction sweep repeated for each shortcut count in m_values."""
    if spec.m_values is None:
        raise ValueError("mean-degree sweeps need explicit m_values")
    if spec.b_values is None:
        raise ValueError("mean-degree sweeps need explicit b_values")
    hubs = spec.resolved_hub_counts()
    points = [
        (b, h, m)
        for m in spec.m_values
        for b in spec.b_values
        for h in hubs
    ]
    return list(iter_point_records(spec, points, n_workers))


def heterogeneity_curve(spec: SweepSpec) -> list[HeterogeneityPoint]:
    """Mean degree dispersion versus hub fraction; no game dynamics.

    Both dispersion measures are averaged over ``n_realizations``
    independent topologies per hub count and reported side by side.
    """
    graph_master = _stream_master(spec.master_seed, _GRAPH_STREAM)
    points = []
    for index, hub_count in enumerate(spec.resolved_hub_counts()):
        het = []
        var = []
        for real in range(spec.n_realizations):
            seed = derive_seed(graph_master, real, 0, index)
            graph = generate_hnw(
                spec.node_count, spec.ring_halfwidth, hub_count,
                spec.shortcut_count, seed,
            )
            stats = degree_stats(graph)
            het.append(stats.heterogeneity)
            var.append(stats.variance)
        points.append(HeterogeneityPoint(
            hub_count=hub_count,
            hub_fraction=hub_count / spec.node_count,
            heterogeneity=float(np.mean(het)),
            variance=float(np.mean(var)),
            n_realizations=spec.n_realizations,
        ))
    return points


# ----------------------------------------------------------------------
# Output formats
# ----------------------------------------------------------------------

CSV_HEADER = (
    "b,N_h,N,kappa,m,rule,rho_c_mean,rho_c_std,rho_c_stderr,"
    "n_replicates,absorbed_fraction"
)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def write_records_csv(records: Iterable[SweepRecord], sink) -> None:
    """Write aggregated records as CSV (floats at 6 significant digits)."""
    if hasattr(sink, "write"):
        _write_records_csv(records, sink)
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            _write_records_csv(records, fh)


def _write_records_csv(records, fh) -> None:
    fh.write(CSV_HEADER + "\n")
    for r in records:
        fh.write(
            f"{_fmt(r.temptation)},{r.hub_count},{r.node_count},"
            f"{r.ring_halfwidth},{r.shortcut_count},{r.rule},"
            f"{_fmt(r.rho_mean)},{_fmt(r.rho_std)},{_fmt(r.rho_stderr)},"
            f"{r.n_replicates},{_fmt(r.absorbed_fraction)}\n"
        )


def record_as_dict(record: SweepRecord) -> dict:
    return {
        "b": record.temptation,
        "N_h": record.hub_count,
        "N": record.node_count,
        "kappa": record.ring_halfwidth,
        "m": record.shortcut_count,
        "rule": record.rule,
        "rho_c_mean": record.rho_mean,
        "rho_c_std": record.rho_std,
        "rho_c_stderr": record.rho_stderr,
        "n_replicates": record.n_replicates,
        "absorbed_fraction": record.absorbed_fraction,
        "proper_pd": record.proper_pd,
        "run_values": list(record.run_values),
    }


def write_records_json(records: Iterable[SweepRecord], sink) -> None:
    """JSON mirror of the CSV including the raw per-run arrays."""
    payload = [record_as_dict(r) for r in records]
    if hasattr(sink, "write"):
        json.dump(payload, sink, indent=2)
        sink.write("\n")
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def write_heterogeneity_csv(points: Iterable[HeterogeneityPoint], sink) -> None:
    """Log-log-ready dispersion columns, both measures side by side."""
    if hasattr(sink, "write"):
        fh = sink
        fh.write("N_h,hub_fraction,heterogeneity,variance,n_realizations\n")
        for p in points:
            fh.write(
                f"{p.hub_count},{_fmt(p.hub_fraction)},{_fmt(p.heterogeneity)},"
                f"{_fmt(p.variance)},{p.n_realizations}\n"
            )
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            write_heterogeneity_csv(points, fh)
