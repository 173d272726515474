"""Uniform-grid neighbor search (cell list) over alive particles.

Cells are at least twice the largest radius wide, so any overlapping pair is
guaranteed to sit in the same or adjacent cells. Buckets are filled by a
stable counting sort over particle ids, which makes the index content a pure
function of the particle arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import jit
from .particles import ParticleSystem


@dataclass
class NeighborIndex:
    cell_size: float
    origin: np.ndarray          # (3,) lower corner of the binning box
    dims: np.ndarray            # (3,) int cell counts
    cell_start: np.ndarray      # (ncells + 1,) prefix offsets into sorted ids
    sorted_ids: np.ndarray      # (n_alive,) particle ids grouped by cell
    build_position: np.ndarray  # (n, 3) position snapshot at build time
    n_particles: int

    @property
    def n_buckets(self) -> int:
        return int(np.count_nonzero(np.diff(self.cell_start)))


@jit
def _bin_particles(pos, alive, origin, cell_size, nx, ny, nz):
    n = pos.shape[0]
    ncell = nx * ny * nz
    counts = np.zeros(ncell + 1, dtype=np.int64)
    flat = np.empty(n, dtype=np.int64)
    for i in range(n):
        if not alive[i]:
            flat[i] = -1
            continue
        cx = int((pos[i, 0] - origin[0]) / cell_size)
        cy = int((pos[i, 1] - origin[1]) / cell_size)
        cz = int((pos[i, 2] - origin[2]) / cell_size)
        if cx < 0:
            cx = 0
        elif cx >= nx:
            cx = nx - 1
        if cy < 0:
            cy = 0
        elif cy >= ny:
            cy = ny - 1
        if cz < 0:
            cz = 0
        elif cz >= nz:
            cz = nz - 1
        c = (cx * ny + cy) * nz + cz
        flat[i] = c
        counts[c + 1] += 1
    start = np.cumsum(counts)
    fill = start[:-1].copy()
    sorted_ids = np.empty(start[-1], dtype=np.int64)
    for i in range(n):
        c = flat[i]
        if c >= 0:
            sorted_ids[fill[c]] = i
            fill[c] += 1
    return start, sorted_ids


@jit
def _collect_candidates(pos, i, origin, cell_size, nx, ny, nz, cell_start,
                        sorted_ids, out):
    cx = int((pos[i, 0] - origin[0]) / cell_size)
    cy = int((pos[i, 1] - origin[1]) / cell_size)
    cz = int((pos[i, 2] - origin[2]) / cell_size)
    count = 0
    for ox in range(-1, 2):
        gx = cx + ox
        if gx < 0 or gx >= nx:
            continue
        for oy in range(-1, 2):
            gy = cy + oy
            if gy < 0 or gy >= ny:
                continue
            for oz in range(-1, 2):
                gz = cz + oz
                if gz < 0 or gz >= nz:
                    continue
                c = (gx * ny + gy) * nz + gz
                for k in range(cell_start[c], cell_start[c + 1]):
                    j = sorted_ids[k]
                    if j != i:
                        out[count] = j
                        count += 1
    return count


def build_neighbor_index(particles: ParticleSystem, cell_size: float) -> NeighborIndex:
    """Bucket all alive particles on a uniform grid of ``cell_size`` cells.

    ``cell_size`` must be at least twice the largest radius so that
    ``query_candidates`` is a superset of every touching pair.
    """
    pos = particles.position
    alive = particles.alive
    finite = np.all(np.isfinite(pos), axis=1)
    if not np.all(finite[alive]):
        bad = np.nonzero(alive & ~finite)[0]
        raise ValueError(f"non-finite positions for particle ids {bad.tolist()[:20]}")
    rmax = float(particles.radius[alive].max()) if particles.alive.any() else 0.0
    if cell_size < 2.0 * rmax:
        raise ValueError(f"cell_size {cell_size} < 2 * max radius {2 * rmax}")
    if particles.alive.any():
        lo = pos[alive].min(axis=0) - 0.5 * cell_size
        hi = pos[alive].max(axis=0) + 0.5 * cell_size
    else:
        lo = np.zeros(3)
        hi = np.full(3, cell_size)
    dims = np.maximum(np.ceil((hi - lo) / cell_size).astype(np.int64), 1)
    cell_start, sorted_ids = _bin_particles(
        pos, alive.astype(np.uint8), lo, cell_size,
        int(dims[0]), int(dims[1]), int(dims[2]))
    return NeighborIndex(
        cell_size=float(cell_size),
        origin=lo,
        dims=dims,
        cell_start=cell_start,
        sorted_ids=sorted_ids,
        build_position=pos.copy(),
        n_particles=particles.n,
    )


def query_candidates(index: NeighborIndex, particles: ParticleSystem, i: int):
    """Ids of all particles in the 27-cell neighborhood of particle ``i``.

    Guaranteed superset of every j overlapping i; never contains i itself.
    Raises if the particle moved more than one cell since the index was
    built (stale index).
    """
    if not particles.alive[i]:
        raise ValueError(f"particle {i} is not alive")
    moved = np.linalg.norm(particles.position[i] - index.build_position[i])
    if moved > index.cell_size:
        raise ValueError(
            f"stale index: particle {i} moved {moved:.3g} m since build "
            f"(> cell_size {index.cell_size:.3g})")
    out = np.empty(len(index.sorted_ids), dtype=np.int64)
    count = _collect_candidates(
        index.build_position, i, index.origin, index.cell_size,
        int(index.dims[0]), int(index.dims[1]), int(index.dims[2]),
        index.cell_start, index.sorted_ids, out)
    return out[:count]
