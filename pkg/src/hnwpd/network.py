"""Heterogeneous Newman-Watts small-world networks.

A ring lattice with periodic boundaries is augmented with long-range
shortcuts. Heterogeneity is tuned by restricting shortcuts to touch a
randomly chosen set of hub nodes: every added shortcut has at least one
endpoint in the hub set, so fewer hubs concentrate more shortcut ends on
fewer nodes. With the hub set equal to the whole vertex set the model
degenerates to the homogeneous Newman-Watts construction; with a single
hub all shortcuts meet in one center.

Graphs are simple (no self-loops, no duplicate edges), undirected, and
immutable once built. Adjacency is stored in CSR form with each node's
neighbor slice sorted, so iteration order is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "Graph",
    "DegreeStats",
    "ring_lattice",
    "generate_hnw",
    "degree_stats",
    "write_edge_list",
    "read_edge_list",
    "graphs_identical",
    "as_generator",
]


def as_generator(rng: np.random.Generator | int | None) -> np.random.Generator:
    """Return ``rng`` unchanged if it is a Generator, else seed a fresh one."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph in CSR form with ring/shortcut bookkeeping.

    Attributes
    ----------
    node_count : int
        Number of nodes; ids are 0-based consecutive integers.
    ring_halfwidth : int
        Each node is ring-linked to the ``ring_halfwidth`` nearest nodes
        on either side (periodic boundary).
    shortcut_count : int
        Number of shortcut edges beyond the ring.
    hub_ids : ndarray of int64
        Sorted ids of the nodes eligible as mandatory shortcut endpoints.
        Empty for a bare ring lattice.
    offsets : ndarray of int64, shape (node_count + 1,)
        CSR slice pointers: node ``x``'s neighbors are
        ``neighbors[offsets[x]:offsets[x + 1]]``.
    neighbors : ndarray of int64
        Flat adjacency; each node's slice is sorted ascending.
    """

    node_count: int
    ring_halfwidth: int
    shortcut_count: int
    hub_ids: np.ndarray
    offsets: np.ndarray
    neighbors: np.ndarray

    def __post_init__(self) -> None:
        # Completed graphs are shared across threads/processes; freeze the arrays.
        for arr in (self.hub_ids, self.offsets, self.neighbors):
            arr.setflags(write=False)

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.offsets)
        d.setflags(write=False)
        return d

    @property
    def edge_count(self) -> int:
        return self.neighbors.size // 2

    @property
    def hub_count(self) -> int:
        return int(self.hub_ids.size)

    @property
    def mean_degree(self) -> float:
        return self.neighbors.size / self.node_count

    def neighbors_of(self, node: int) -> np.ndarray:
        """Sorted neighbor ids of ``node`` (a read-only view)."""
        return self.neighbors[self.offsets[node]:self.offsets[node + 1]]

    def edges(self):
        """Yield every undirected edge once as ``(u, v)`` with ``u < v``."""
        for u in range(self.node_count):
            for v in self.neighbors_of(u):
                if u < v:
                    yield u, int(v)

    def is_ring_edge(self, u: int, v: int) -> bool:
        """Whether ``{u, v}`` is one of the base ring-lattice edges."""
        d = abs(u - v)
        d = min(d, self.node_count - d)
        return 1 <= d <= self.ring_halfwidth


@dataclass(frozen=True)
class DegreeStats:
    """Degree-sequence summary.

    ``heterogeneity`` is the raw second moment of the degree sequence
    minus the mean degree, i.e. (1/N)·Σ_k k²·N(k) − ⟨k⟩; ``variance`` is
    the standard central variance ⟨k²⟩ − ⟨k⟩². The two differ whenever
    ⟨k⟩ ≠ ⟨k⟩², so both are always reported.
    """

    mean_degree: float
    heterogeneity: float
    variance: float
    histogram: dict[int, int]


# ----------------------------------------------------------------------
# Construction
# ----------------------------------------------------------------------


def _csr_from_edges(node_count: int, u: np.ndarray, v: np.ndarray):
    """Build (offsets, neighbors) from unordered edge endpoint arrays."""
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    order = np.lexsort((dst, src))
    src = src[order]
    dst = dst[order]
    counts = np.bincount(src, minlength=node_count)
    offsets = np.zeros(node_count + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return offsets, dst.astype(np.int64, copy=False)


def _ring_edges(node_count: int, ring_halfwidth: int):
    """Endpoint arrays of the node_count * ring_halfwidth ring edges."""
    ids = np.arange(node_count, dtype=np.int64)
    spans = np.arange(1, ring_halfwidth + 1, dtype=np.int64)
    u = np.repeat(ids, ring_halfwidth)
    v = (u + np.tile(spans, node_count)) % node_count
    return u, v


def ring_lattice(node_count: int, ring_halfwidth: int) -> Graph:
    """Ring of ``node_count`` nodes, each linked to its ``ring_halfwidth``
    nearest neighbors on both sides (periodic boundary).

    Parameters
    ----------
    node_count : int
        Must satisfy ``node_count >= 2 * ring_halfwidth + 1``; otherwise the
        neighborhood of a node would wrap onto itself.
    ring_halfwidth : int
        At least 1.

    Returns
    -------
    Graph
        Regular graph of degree ``2 * ring_halfwidth`` with no shortcuts
        and an empty hub set.
    """
    if ring_halfwidth < 1:
        raise ValueError(f"ring_halfwidth must be >= 1, got {ring_halfwidth}")
    if node_count < 2 * ring_halfwidth + 1:
        raise ValueError(
            f"node_count must be >= 2 * ring_halfwidth + 1 = "
            f"{2 * ring_halfwidth + 1}, got {node_count}"
        )
    u, v = _ring_edges(node_count, ring_halfwidth)
    offsets, neighbors = _csr_from_edges(node_count, u, v)
    return Graph(
        node_count=node_count,
        ring_halfwidth=ring_halfwidth,
        shortcut_count=0,
        hub_ids=np.empty(0, dtype=np.int64),
        offsets=offsets,
        neighbors=neighbors,
    )


def _count_hub_ring_edges(node_count, ring_halfwidth, hub_mask) -> int:
    """Ring edges with at least one hub endpoint."""
    count = 0
    hubs = np.flatnonzero(hub_mask)
    seen_both = 0
    for h in hubs:
        count += 2 * ring_halfwidth
        for d in range(1, ring_halfwidth + 1):
            if hub_mask[(h + d) % node_count]:
                seen_both += 1
    # Hub-hub ring edges were counted once from each side.
    return count - seen_both


def generate_hnw(
    node_count: int,
    ring_halfwidth: int,
    hub_count: int,
    shortcut_count: int,
    rng: np.random.Generator | int | None = None,
) -> Graph:
    """Sample a heterogeneous Newman-Watts graph.

    Starts from ``ring_lattice(node_count, ring_halfwidth)``, picks
    ``hub_count`` hubs uniformly without replacement, then adds exactly
    ``shortcut_count`` distinct shortcuts. Each shortcut joins a node
    drawn uniformly from all nodes to a node drawn uniformly from the
    hubs; candidates that would form a self-loop, duplicate an existing
    edge (ring or shortcut), are rejected and redrawn. Both endpoints may
    be hubs.

    Parameters
    ----------
    node_count, ring_halfwidth : int
        As for :func:`ring_lattice`.
    hub_count : int
        Number of hubs, ``1 <= hub_count <= node_count``.
    shortcut_count : int
        Shortcuts to add. Must not exceed the number of non-ring node
        pairs with at least one endpoint in the sampled hub set.
    rng : numpy Generator, int seed, or None
        Randomness source. Same seed gives a bit-identical graph.

    Returns
    -------
    Graph

    Raises
    ------
    ValueError
        Infeasible parameters (including a ``shortcut_count`` that cannot
        be placed given the sampled hub set).
    RuntimeError
        Rejection-sampling livelock: 100 * shortcut_count consecutive
        failed draws on a feasible but nearly saturated configuration.
    """
    base = ring_lattice(node_count, ring_halfwidth)  # validates N, kappa
    if not 1 <= hub_count <= node_count:
        raise ValueError(
            f"hub_count must be in [1, {node_count}], got {hub_count}"
        )
    if shortcut_count < 0:
        raise ValueError(f"shortcut_count must be >= 0, got {shortcut_count}")
    rng = as_generator(rng)

    hub_ids = np.sort(rng.choice(node_count, size=hub_count, replace=False))
    hub_mask = np.zeros(node_count, dtype=bool)
    hub_mask[hub_ids] = True

    # Feasibility given this hub set: pairs with >= 1 hub endpoint, minus
    # those already occupied by ring edges.
    hub_pairs = math.comb(hub_count, 2) + hub_count * (node_count - hub_count)
    free_pairs = hub_pairs - _count_hub_ring_edges(
        node_count, ring_halfwidth, hub_mask
    )
    if shortcut_count > free_pairs:
        raise ValueError(
            f"cannot place {shortcut_count} distinct shortcuts: only "
            f"{free_pairs} non-ring pairs touch the {hub_count} hubs"
        )

    chosen: set[tuple[int, int]] = set()
    halfwidth = ring_halfwidth
    attempt_cap = 100 * max(shortcut_count, 1)
    consecutive_failures = 0
    while len(chosen) < shortcut_count:
        a = int(rng.integers(node_count))
        h = int(hub_ids[rng.integers(hub_count)])
        d = abs(a - h)
        pair = (a, h) if a < h else (h, a)
        if a == h or min(d, node_count - d) <= halfwidth or pair in chosen:
            consecutive_failures += 1
            if consecutive_failures >= attempt_cap:
                raise RuntimeError(
                    f"shortcut rejection sampling stalled: {attempt_cap} "
                    f"consecutive rejected draws with "
                    f"{len(chosen)}/{shortcut_count} shortcuts placed "
                    f"(node_count={node_count}, hub_count={hub_count})"
                )
            continue
        consecutive_failures = 0
        chosen.add(pair)

    ring_u, ring_v = _ring_edges(node_count, ring_halfwidth)
    if chosen:
        sc = np.array(sorted(chosen), dtype=np.int64)
        u = np.concatenate([ring_u, sc[:, 0]])
        v = np.concatenate([ring_v, sc[:, 1]])
    else:
        u, v = ring_u, ring_v
    offsets, neighbors = _csr_from_edges(node_count, u, v)
    return Graph(
        node_count=node_count,
        ring_halfwidth=ring_halfwidth,
        shortcut_count=shortcut_count,
        hub_ids=hub_ids,
        offsets=offsets,
        neighbors=neighbors,
    )


# ----------------------------------------------------------------------
# Statistics
# ----------------------------------------------------------------------


def degree_stats(graph: Graph) -> DegreeStats:
    """Degree histogram, mean degree, and both dispersion measures.

    Sums are taken in exact integer arithmetic before the final division,
    so ``mean_degree`` equals 2*kappa + 2*m/N to full float precision.
    """
    degrees = graph.degrees
    n = graph.node_count
    total = int(degrees.sum())
    total_sq = int((degrees * degrees).sum())
    mean = total / n
    mean_sq = total_sq / n
    counts = np.bincount(degrees)
    histogram = {int(k): int(c) for k, c in enumerate(counts) if c > 0}
    return DegreeStats(
        mean_degree=mean,
        heterogeneity=mean_sq - mean,
        variance=mean_sq - mean * mean,
        histogram=histogram,
    )


def graphs_identical(a: Graph, b: Graph) -> bool:
    """Bit-identical comparison: parameters, hub set, and adjacency."""
    return (
        a.node_count == b.node_count
        and a.ring_halfwidth == b.ring_halfwidth
        and a.shortcut_count == b.shortcut_count
        and np.array_equal(a.hub_ids, b.hub_ids)
        and np.array_equal(a.offsets, b.offsets)
        and np.array_equal(a.neighbors, b.neighbors)
    )


# ----------------------------------------------------------------------
# Edge-list text format
# ----------------------------------------------------------------------
#
#   #N=<n>
#   #kappa=<k>
#   #m=<m>
#   #hubs=<id,id,...>        (empty after '=' when there are no hubs)
#   u v                      (one per line, u < v, space-separated)


def write_edge_list(graph: Graph, sink) -> None:
    """Write ``graph`` to ``sink`` (path or text file object)."""
    if hasattr(sink, "write"):
        _write_edge_list(graph, sink)
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            _write_edge_list(graph, fh)


def _write_edge_list(graph: Graph, fh) -> None:
    fh.write(f"#N={graph.node_count}\n")
    fh.write(f"#kappa={graph.ring_halfwidth}\n")
    fh.write(f"#m={graph.shortcut_count}\n")
    fh.write("#hubs=" + ",".join(str(h) for h in graph.hub_ids) + "\n")
    for u, v in graph.edges():
        fh.write(f"{u} {v}\n")


def _parse_header(line: str, lineno: int, key: str) -> str:
    prefix = f"#{key}="
    if not line.startswith(prefix):
        raise ValueError(
            f"edge list line {lineno}: expected header '{prefix}...', "
            f"got {line!r}"
        )
    return line[len(prefix):].strip()


def read_edge_list(source) -> Graph:
    """Parse an edge-list file back into a :class:`Graph`.

    The adjacency, hub set, and parameters of ``read(write(g))`` are
    identical to ``g``. Structural violations (self-loops, duplicates,
    reversed pairs, ids out of range, edge counts inconsistent with the
    declared shortcut count, non-ring edges missing a hub endpoint) are
    rejected with the offending line number.
    """
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()

    if len(lines) < 4:
        raise ValueError("edge list truncated: missing header lines")
    try:
        node_count = int(_parse_header(lines[0], 1, "N"))
        halfwidth = int(_parse_header(lines[1], 2, "kappa"))
        shortcut_count = int(_parse_header(lines[2], 3, "m"))
        hubs_text = _parse_header(lines[3], 4, "hubs")
        hub_ids = np.array(
            [int(t) for t in hubs_text.split(",")] if hubs_text else [],
            dtype=np.int64,
        )
    except ValueError as exc:
        raise ValueError(f"edge list header: {exc}") from exc

    if node_count < 2 * halfwidth + 1 or halfwidth < 1:
        raise ValueError(
            f"edge list header: invalid N={node_count}, kappa={halfwidth}"
        )
    if np.any(hub_ids < 0) or np.any(hub_ids >= node_count):
        raise ValueError("edge list header: hub id out of range")
    if np.unique(hub_ids).size != hub_ids.size:
        raise ValueError("edge list header: duplicate hub ids")
    hub_ids = np.sort(hub_ids)
    hub_mask = np.zeros(node_count, dtype=bool)
    hub_mask[hub_ids] = True

    ring = ring_lattice(node_count, halfwidth)
    expected_ring = {(u, v) for u, v in ring.edges()}
    seen: set[tuple[int, int]] = set()
    shortcut_pairs: list[tuple[int, int]] = []
    for lineno, line in enumerate(lines[4:], start=5):
        if not line.strip():
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ValueError(
                f"edge list line {lineno}: expected 'u v', got {line!r}"
            )
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ValueError(
                f"edge list line {lineno}: non-integer node id in {line!r}"
            ) from None
        if u == v:
            raise ValueError(f"edge list line {lineno}: self-loop '{u} {v}'")
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise ValueError(
                f"edge list line {lineno}: node id out of range in '{u} {v}'"
            )
        if u > v:
            raise ValueError(
                f"edge list line {lineno}: endpoints must satisfy u < v, "
                f"got '{u} {v}'"
            )
        pair = (u, v)
        if pair in seen:
            raise ValueError(f"edge list line {lineno}: duplicate edge '{u} {v}'")
        seen.add(pair)
        if pair not in expected_ring:
            if not (hub_mask[u] or hub_mask[v]):
                raise ValueError(
                    f"edge list line {lineno}: shortcut '{u} {v}' touches "
                    f"no hub"
                )
            shortcut_pairs.append(pair)

    missing_ring = expected_ring - seen
    if missing_ring:
        u, v = min(missing_ring)
        raise ValueError(f"edge list: ring edge '{u} {v}' missing")
    if len(shortcut_pairs) != shortcut_count:
        raise ValueError(
            f"edge list: header declares m={shortcut_count} shortcuts but "
            f"{len(shortcut_pairs)} non-ring edges found"
        )

    pairs = np.array(sorted(seen), dtype=np.int64)
    offsets, neighbors = _csr_from_edges(node_count, pairs[:, 0], pairs[:, 1])
    return Graph(
        node_count=node_count,
        ring_halfwidth=halfwidth,
        shortcut_count=shortcut_count,
        hub_ids=hub_ids,
        offsets=offsets,
        neighbors=neighbors,
    )
