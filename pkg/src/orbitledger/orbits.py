"""Orbit counting on GF(p)^n, two independent ways.

count_orbits_bfs walks the generator closure over vector indices with a flat
seen-array and a frontier; count_orbits_burnside averages fixed-point counts
over the whole group (fixed vectors of g form ker(g - I)).  The two must
agree wherever both budgets allow, which the test suite exploits as a cross
oracle.
"""

from __future__ import annotations

import time

import numpy as np

from .engine import (DEFAULT_ELEMENT_BUDGET, bsgs_build, elements_array_stream)
from .errors import BudgetExceeded, InternalError, NoCandidates
from .fieldmat import batch_kernel_dims, decode_indices, powers

DEFAULT_INDEX_BUDGET = 5 * 10**7
HARD_INDEX_CAP = 1 << 32
PERM_TABLE_CELL_BUDGET = 8 * 10**7
_CHUNK = 1 << 20


class OrbitReport:
    """Orbit count plus the orbit-size multiset for one group action."""

    __slots__ = ("p", "n", "orbit_count", "orbit_sizes", "method", "wall_time_s", "notes")

    def __init__(self, p, n, orbit_count, orbit_sizes, method, wall_time_s, notes=""):
        self.p = p
        self.n = n
        self.orbit_count = orbit_count
        self.orbit_sizes = orbit_sizes          # dict size -> multiplicity
        self.method = method
        self.wall_time_s = wall_time_s
        self.notes = notes

    def to_dict(self):
        return {
            "p": self.p,
            "n": self.n,
            "orbit_count": self.orbit_count,
            "orbit_sizes": [[int(s), int(m)] for s, m in sorted(self.orbit_sizes.items())],
            "method": self.method,
            "wall_time_s": self.wall_time_s,
            "notes": self.notes,
        }

    def __repr__(self):
        return (f"OrbitReport(p={self.p}, n={self.n}, count={self.orbit_count}, "
                f"method={self.method!r})")


def _unique_generator_arrays(g):
    seen = set()
    out = []
    for gen in g.generators:
        if gen.is_identity():
            continue
        k = gen.key()
        if k not in seen:
            seen.add(k)
            out.append(gen.a)
    return out


_decoded_range_cache = {}


def _decoded_range(p, n, total):
    """Float32 digit array of the full index range, memoised per (p, n)."""
    key = (p, n)
    hit = _decoded_range_cache.get(key)
    if hit is None:
        if total * n > 3 * 10**8:
            return None
        hit = decode_indices(np.arange(total), p, n).astype(np.float32)
        _decoded_range_cache.clear()    # keep at most one big array around
        _decoded_range_cache[key] = hit
    return hit


def _build_perm_tables(gens, p, n, total, table_cache=None):
    tables = []
    pows = powers(p, n)
    base = _decoded_range(p, n, total)
    for g in gens:
        key = (p, g.astype(np.uint8).tobytes())
        if table_cache is not None and key in table_cache:
            tables.append(table_cache[key])
            continue
        table = np.empty(total, dtype=np.int32)
        gt = g.T.astype(np.float32)
        for lo in range(0, total, _CHUNK):
            hi = min(lo + _CHUNK, total)
            if base is not None:
                vecs = base[lo:hi]
            else:
                vecs = decode_indices(np.arange(lo, hi), p, n).astype(np.float32)
            imgs = np.mod(vecs @ gt, p).astype(np.int64)
            table[lo:hi] = imgs @ pows
        tables.append(table)
        if table_cache is not None:
            table_cache[key] = table
    return tables


def _apply_gen_fly(g, frontier, p, n, pows):
    out = np.empty(frontier.shape[0], dtype=np.int64)
    gt = g.T.astype(np.float32)
    for lo in range(0, frontier.shape[0], _CHUNK):
        hi = min(lo + _CHUNK, frontier.shape[0])
        vecs = decode_indices(frontier[lo:hi], p, n)
        imgs = np.mod(vecs.astype(np.float32) @ gt, p).astype(np.int64)
        out[lo:hi] = imgs @ pows
    return out


def _next_unseen(seen, ptr):
    total = seen.size
    while ptr < total:
        block = seen[ptr:ptr + 65536]
        idx = np.nonzero(~block)[0]
        if idx.size:
            return ptr + int(idx[0])
        ptr += 65536
    return None


def count_orbits_bfs(g, index_budget=DEFAULT_INDEX_BUDGET,
                     perm_cell_budget=PERM_TABLE_CELL_BUDGET, table_cache=None):
    """Exact orbit partition of GF(p)^n under <g> by frontier closure."""
    p, n = g.p, g.n
    total = p**n
    if total > min(index_budget, HARD_INDEX_CAP):
        raise BudgetExceeded(f"{p}**{n} = {total} indices exceed the budget {index_budget}")
    t0 = time.perf_counter()
    gens = _unique_generator_arrays(g)
    pows = powers(p, n)
    use_tables = gens and total * len(gens) <= perm_cell_budget
    tables = _build_perm_tables(gens, p, n, total, table_cache) if use_tables else None

    seen = np.zeros(total, dtype=bool)
    sizes = {}
    count = 0
    ptr = 0
    while True:
        start = _next_unseen(seen, ptr)
        if start is None:
            break
        ptr = start
        seen[start] = True
        frontier = np.array([start], dtype=np.int64)
        orbit_size = 0
        while frontier.size:
            orbit_size += frontier.size
            new_parts = []
            for gi, gen in enumerate(gens):
                if use_tables:
                    imgs = tables[gi][frontier].astype(np.int64)
                else:
                    imgs = _apply_gen_fly(gen, frontier, p, n, pows)
                cand = imgs[~seen[imgs]]
                if cand.size:
                    cand = np.unique(cand)
                    cand = cand[~seen[cand]]
                    seen[cand] = True
                    new_parts.append(cand)
            frontier = np.concatenate(new_parts) if new_parts else np.empty(0, dtype=np.int64)
        sizes[orbit_size] = sizes.get(orbit_size, 0) + 1
        count += 1
    wall = time.perf_counter() - t0
    mode = "perm-tables" if use_tables else "chunked-matvec"
    report = OrbitReport(p, n, count, sizes, "bfs", round(wall, 6),
                         notes=f"generator application: {mode}")
    _check_partition(report, total)
    return report


def _check_partition(report, total):
    s = sum(size * mult for size, mult in report.orbit_sizes.items())
    if s != total:
        raise InternalError(f"orbit sizes sum to {s}, expected {total}")
    if report.orbit_sizes.get(1, 0) < 1:
        raise InternalError("no singleton orbit; the zero vector must be fixed")


def count_orbits_burnside(g, element_budget=DEFAULT_ELEMENT_BUDGET,
                          point_budget=None):
    """Orbit count as the average number of fixed vectors over the group."""
    p, n = g.p, g.n
    t0 = time.perf_counter()
    kwargs = {}
    if point_budget is not None:
        kwargs["point_budget"] = point_budget
    idx = bsgs_build(g, **kwargs)
    order = idx.order()
    if order > element_budget:
        raise BudgetExceeded(f"group order {order} exceeds element budget {element_budget}")
    eye = np.eye(n, dtype=np.int64)
    total_fixed = 0
    for stack in elements_array_stream(idx, chunk=4096, element_budget=element_budget):
        dims = batch_kernel_dims((stack - eye) % p, p)
        total_fixed += int(np.sum(p**dims.astype(object)))
    if total_fixed % order != 0:
        raise InternalError("fixed-point average is not an integer; engine bug")
    count = total_fixed // order
    wall = time.perf_counter() - t0
    return OrbitReport(p, n, count, {}, "burnside", round(wall, 6),
                       notes=f"averaged over {order} elements")


def min_orbit_tracker(reports):
    """Running minimum over (report, witness) pairs; first witness wins ties."""
    best = None
    best_witness = None
    for report, witness in reports:
        if best is None or report.orbit_count < best.orbit_count:
            best = report
            best_witness = witness
    if best is None:
        raise NoCandidates("empty report stream")
    return best, best_witness
