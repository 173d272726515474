"""Vessel geometries (hopper, fluidized-bed box) and wall distance evaluation.

The hopper wall is a surface of revolution described by a polyline in the
(rho, z) half-plane: outlet pipe, outlet slope (truncated cone), cylindrical
barrel. The slope angle is measured from the horizontal, so 0 degrees is a
flat annular bottom plate. Signed distance is positive inside the vessel and
the returned normal always points into the interior.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .backend import jit


class GeometryWarning(UserWarning):
    pass


@dataclass
class HopperGeometry:
    diameter: float = 0.24          # D [m]
    height: float = 0.40            # barrel height above the cone top [m]
    outlet_diameter: float = 0.05   # O [m]
    slope_angle_deg: float = 30.0   # measured from horizontal, 0 = flat bottom
    outlet_open: bool = False

    def __post_init__(self):
        if not (0.0 <= self.slope_angle_deg <= 60.0):
            raise ValueError("slope angle must be in [0, 60] degrees")
        if not (0.0 < self.outlet_diameter < self.diameter):
            raise ValueError("outlet diameter must be in (0, diameter)")
        if self.height <= 0:
            raise ValueError("height must be positive")

    @property
    def cone_height(self) -> float:
        return 0.5 * (self.diameter - self.outlet_diameter) * np.tan(
            np.deg2rad(self.slope_angle_deg))

    @property
    def removal_plane_z(self) -> float:
        # particles are deleted once they fall this far below the outlet
        return -2.0 * self.outlet_diameter

    @property
    def top_z(self) -> float:
        return self.cone_height + self.height

    def bounding_box(self):
        r = 0.5 * self.diameter
        lo = np.array([-r, -r, self.removal_plane_z])
        hi = np.array([r, r, self.top_z])
        return lo, hi

    def profile(self) -> np.ndarray:
        """Wall polyline in the (rho, z) half-plane, ordered along the wall.

        Segment order guarantees that the rotated 2D tangent gives an
        interior-pointing normal (-dz, drho).
        """
        ro = 0.5 * self.outlet_diameter
        r = 0.5 * self.diameter
        hc = self.cone_height
        top = self.top_z + self.diameter  # wall continued past the fill level
        if self.outlet_open:
            z_pipe = self.removal_plane_z - self.outlet_diameter
            pts = [(ro, z_pipe), (ro, 0.0), (r, hc), (r, top)]
        else:
            pts = [(0.0, 0.0), (ro, 0.0), (r, hc), (r, top)]
        return np.asarray(pts, dtype=np.float64)


@dataclass
class BedGeometry:
    width: float = 0.096            # x extent [m]
    height: float = 0.24            # z extent [m]
    depth: float = None             # y extent [m]; defaults to width (square section)
    inlet_velocity: float = 0.0     # superficial gas velocity at the distributor [m/s]

    def __post_init__(self):
        if self.depth is None:
            self.depth = self.width
        if min(self.width, self.height, self.depth) <= 0:
            raise ValueError("bed dimensions must be positive")

    def bounding_box(self):
        return np.zeros(3), np.array([self.width, self.depth, self.height])


# ---------------------------------------------------------------------------
# kernels

@jit
def _polyline_distance(profile, rho, z):
    """Distance from (rho, z) to the wall polyline plus the closest-point normal.

    Returns (distance >= 0, n_rho, n_z) with the 2D normal pointing from the
    closest wall point towards (rho, z) when off the wall, or the segment's
    interior normal when exactly on it.
    """
    best = 1e300
    brho = 0.0
    bz = 0.0
    bn_rho = 0.0
    bn_z = 1.0
    for k in range(profile.shape[0] - 1):
        ax, az = profile[k, 0], profile[k, 1]
        bx, bz_ = profile[k + 1, 0], profile[k + 1, 1]
        dx = bx - ax
        dz = bz_ - az
        seg2 = dx * dx + dz * dz
        if seg2 <= 0.0:
            continue
        t = ((rho - ax) * dx + (z - az) * dz) / seg2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        cx = ax + t * dx
        cz = az + t * dz
        d2 = (rho - cx) * (rho - cx) + (z - cz) * (z - cz)
        if d2 < best:
            best = d2
            brho = cx
            bz = cz
            seg = np.sqrt(seg2)
            bn_rho = -dz / seg
            bn_z = dx / seg
    dist = np.sqrt(best)
    if dist > 1e-12:
        n_rho = (rho - brho) / dist
        n_z = (z - bz) / dist
    else:
        n_rho = bn_rho
        n_z = bn_z
    return dist, n_rho, n_z


@jit
def _hopper_inside(r_outlet, r_barrel, h_cone, outlet_open, rho, z):
    if z < 0.0:
        return outlet_open == 1 and rho <= r_outlet
    if h_cone > 0.0 and z < h_cone:
        return rho <= r_outlet + (r_barrel - r_outlet) * (z / h_cone)
    return rho <= r_barrel


@jit
def hopper_wall_distance(profile, r_outlet, r_barrel, h_cone, outlet_open,
                         x, y, z):
    """Signed distance (positive inside) and interior-pointing unit normal."""
    rho = np.sqrt(x * x + y * y)
    dist, n_rho, n_z = _polyline_distance(profile, rho, z)
    inside = _hopper_inside(r_outlet, r_barrel, h_cone, outlet_open, rho, z)
    if not inside:
        dist = -dist
        n_rho = -n_rho
        n_z = -n_z
    if rho > 1e-12:
        ex = x / rho
        ey = y / rho
    else:
        ex = 1.0
        ey = 0.0
    nx = n_rho * ex
    ny = n_rho * ey
    nz = n_z
    norm = np.sqrt(nx * nx + ny * ny + nz * nz)
    if norm > 0.0:
        nx /= norm
        ny /= norm
        nz /= norm
    return dist, nx, ny, nz


@jit
def box_wall_distance(w, d, h, x, y, z):
    """Signed distance to the closest of the six box walls, interior normal."""
    dist = x
    nx, ny, nz = 1.0, 0.0, 0.0
    if w - x < dist:
        dist = w - x
        nx, ny, nz = -1.0, 0.0, 0.0
    if y < dist:
        dist = y
        nx, ny, nz = 0.0, 1.0, 0.0
    if d - y < dist:
        dist = d - y
        nx, ny, nz = 0.0, -1.0, 0.0
    if z < dist:
        dist = z
        nx, ny, nz = 0.0, 0.0, 1.0
    if h - z < dist:
        dist = h - z
        nx, ny, nz = 0.0, 0.0, -1.0
    return dist, nx, ny, nz


def wall_signed_distance(geom, point):
    """Distance from ``point`` to the vessel wall and the interior normal.

    Positive distance means the point is inside the particle/fluid region.
    Points far outside the bounding box (more than one box diagonal) are
    clamped onto the inflated box before evaluation and a GeometryWarning is
    emitted.
    """
    p = np.asarray(point, dtype=np.float64).reshape(3).copy()
    lo, hi = geom.bounding_box()
    diag = float(np.linalg.norm(hi - lo))
    if np.any(p < lo - diag) or np.any(p > hi + diag):
        warnings.warn("query point far outside the geometry bounding box; "
                      "clamping", GeometryWarning)
        p = np.clip(p, lo - diag, hi + diag)
    if isinstance(geom, HopperGeometry):
        dist, nx, ny, nz = hopper_wall_distance(
            geom.profile(), 0.5 * geom.outlet_diameter, 0.5 * geom.diameter,
            geom.cone_height, 1 if geom.outlet_open else 0, p[0], p[1], p[2])
    elif isinstance(geom, BedGeometry):
        dist, nx, ny, nz = box_wall_distance(
            geom.width, geom.depth, geom.height, p[0], p[1], p[2])
    else:
        raise TypeError(f"unsupported geometry {type(geom).__name__}")
    return float(dist), np.array([nx, ny, nz])
