"""Particle state container shared by the DEM engine, coupling, and field pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GROUP_A = 0
GROUP_B = 1


@dataclass
class ParticleSystem:
    """Structure-of-arrays particle state.

    All arrays are indexed by a stable particle id; dead (exited) particles
    keep their slot with ``alive=False`` so that transport / residence
    bookkeeping by id stays trivial.
    """

    position: np.ndarray        # (n, 3) [m]
    velocity: np.ndarray        # (n, 3) [m/s]
    radius: np.ndarray          # (n,) [m]
    mass: np.ndarray            # (n,) [kg]
    volume: np.ndarray          # (n,) [m^3], 4/3 pi r^3
    alive: np.ndarray           # (n,) bool
    group: np.ndarray           # (n,) uint8, mixing label A/B
    spawn_time: np.ndarray      # (n,) [s]
    initial_position: np.ndarray  # (n, 3) [m], position at the reference frame
    angular_velocity: np.ndarray = field(default=None)  # (n, 3) [rad/s], rolling friction state

    def __post_init__(self):
        n = self.position.shape[0]
        if self.angular_velocity is None:
            self.angular_velocity = np.zeros((n, 3), dtype=np.float64)
        for name in ("position", "velocity", "initial_position", "angular_velocity"):
            arr = getattr(self, name)
            if arr.shape != (n, 3):
                raise ValueError(f"{name} must have shape ({n}, 3), got {arr.shape}")
        for name in ("radius", "mass", "volume", "alive", "group", "spawn_time"):
            arr = getattr(self, name)
            if arr.shape != (n,):
                raise ValueError(f"{name} must have shape ({n},), got {arr.shape}")

    @property
    def n(self) -> int:
        return self.position.shape[0]

    @property
    def n_alive(self) -> int:
        return int(np.count_nonzero(self.alive))

    def copy(self) -> "ParticleSystem":
        return ParticleSystem(
            position=self.position.copy(),
            velocity=self.velocity.copy(),
            radius=self.radius.copy(),
            mass=self.mass.copy(),
            volume=self.volume.copy(),
            alive=self.alive.copy(),
            group=self.group.copy(),
            spawn_time=self.spawn_time.copy(),
            initial_position=self.initial_position.copy(),
            angular_velocity=self.angular_velocity.copy(),
        )


def make_particles(position, radius, density=None, mass=None, velocity=None,
                   group=None, spawn_time=0.0) -> ParticleSystem:
    """Build a validated ParticleSystem from positions and radii.

    Exactly one of ``density`` or ``mass`` must be given; volume is always
    derived as (4/3) pi r^3.
    """
    position = np.ascontiguousarray(position, dtype=np.float64)
    if position.ndim != 2 or position.shape[1] != 3:
        raise ValueError("position must be (n, 3)")
    n = position.shape[0]
    radius = np.broadcast_to(np.asarray(radius, dtype=np.float64), (n,)).copy()
    if np.any(radius <= 0):
        raise ValueError("radius must be positive")
    volume = (4.0 / 3.0) * np.pi * radius ** 3
    if (density is None) == (mass is None):
        raise ValueError("give exactly one of density or mass")
    if mass is None:
        mass = np.asarray(density, dtype=np.float64) * volume
    mass = np.broadcast_to(np.asarray(mass, dtype=np.float64), (n,)).copy()
    if np.any(mass <= 0):
        raise ValueError("mass must be positive")
    if velocity is None:
        velocity = np.zeros((n, 3))
    velocity = np.ascontiguousarray(velocity, dtype=np.float64)
    if group is None:
        group = np.zeros(n, dtype=np.uint8)
    group = np.asarray(group, dtype=np.uint8).copy()
    spawn = np.broadcast_to(np.asarray(spawn_time, dtype=np.float64), (n,)).copy()
    return ParticleSystem(
        position=position.copy(),
        velocity=velocity.copy(),
        radius=radius,
        mass=mass,
        volume=volume,
        alive=np.ones(n, dtype=bool),
        group=group,
        spawn_time=spawn,
        initial_position=position.copy(),
    )


def validate_particles(p: ParticleSystem, bounds=None, rtol: float = 1e-12) -> None:
    """Check the container invariants; raises ValueError on violation.

    ``bounds`` is an optional ((3,), (3,)) bounding box that every alive
    particle centre must lie inside.
    """
    if np.any(p.radius <= 0):
        raise ValueError("radius must be positive")
    if np.any(p.mass <= 0):
        raise ValueError("mass must be positive")
    expected = (4.0 / 3.0) * np.pi * p.radius ** 3
    if np.any(np.abs(p.volume - expected) > rtol * expected):
        raise ValueError("volume inconsistent with (4/3) pi r^3")
    if not np.all(np.isfinite(p.position[p.alive])):
        bad = np.nonzero(~np.all(np.isfinite(p.position), axis=1) & p.alive)[0]
        raise ValueError(f"non-finite positions for particles {bad.tolist()[:20]}")
    if bounds is not None:
        lo, hi = np.asarray(bounds[0]), np.asarray(bounds[1])
        pos = p.position[p.alive]
        if pos.size and (np.any(pos < lo) or np.any(pos > hi)):
            raise ValueError("alive particle outside the domain bounding box")
