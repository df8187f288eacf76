"""Real-time evolution under an adiabatic switch-on of the bond coupling.

Time is measured in units of hbar/E0. The Hamiltonian along the ramp is
H(t) = sum_i L_i^2 + kappa(t) * B with B the bond operator, so only a
single scalar varies and dH/dt = kappa'(t) * B.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import CODATA2018, Constants
from .design import Geometry, rotational_quantum
from .lattice import ChainSpec, DimensionCapError, build_interaction, build_kinetic

__all__ = [
    "DYNAMICS_DIM_CAP",
    "RampSchedule",
    "EvolutionResult",
    "propagate",
    "adiabatic_ratio",
    "physical_ramp_time",
]

DYNAMICS_DIM_CAP = 2**16
STEP_ERROR_TOL = 1e-8
DEGENERATE_GAP = 1e-9


@dataclass(frozen=True)
class RampSchedule:
    """Coupling ramp kappa(t) over t in [0, duration] (units hbar/E0)."""

    kappa_start: float
    kappa_end: float
    duration: float
    shape: str = "linear"

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.kappa_start < 0 or self.kappa_end < 0:
            raise ValueError("kappa values must be non-negative")
        if self.shape not in ("linear", "smoothstep"):
            raise ValueError(f"shape must be 'linear' or 'smoothstep', got {self.shape!r}")

    def kappa(self, t: float) -> float:
        s = min(max(t / self.duration, 0.0), 1.0)
        if self.shape == "smoothstep":
            s = 3.0 * s**2 - 2.0 * s**3
        return self.kappa_start + (self.kappa_end - self.kappa_start) * s

    def rate(self, t: float) -> float:
        """d kappa / dt."""
        s = t / self.duration
        if s < 0.0 or s > 1.0:
            return 0.0
        ds = 1.0 / self.duration
        if self.shape == "smoothstep":
            ds *= 6.0 * s - 6.0 * s**2
        return (self.kappa_end - self.kappa_start) * ds


@dataclass
class EvolutionResult:
    """Outcome of one ramp propagation."""

    final_fidelity: float
    norm_drift: float
    max_adiabatic_ratio: float
    step_count: int
    accepted_dt: float
    trace: list | None = None  # (t, fidelity_to_instantaneous_gs, norm, kappa)


def _dense_parts(spec: ChainSpec):
    if spec.mu_tilde != 0.0:
        raise ValueError("ramp dynamics model the interaction switch-on at mu_tilde = 0")
    if spec.dimension > DYNAMICS_DIM_CAP:
        raise DimensionCapError(
            f"dimension {spec.dimension} exceeds the dynamics cap {DYNAMICS_DIM_CAP}"
        )
    kinetic = build_kinetic(spec).matrix.toarray().real
    bond = build_interaction(spec).matrix.toarray().real
    return kinetic, bond


def _hamiltonian(kinetic, bond, kappa):
    return kinetic + kappa * bond


def _step(kinetic, bond, schedule, psi, t, dt):
    """Midpoint-exponential step: exactly unitary for any dt."""
    h = _hamiltonian(kinetic, bond, schedule.kappa(t + 0.5 * dt))
    vals, vecs = np.linalg.eigh(h)
    phases = np.exp(-1j * vals * dt)
    return vecs @ (phases * (vecs.conj().T @ psi))


def _ground_of(matrix):
    vals, vecs = np.linalg.eigh(matrix)
    return vals, vecs


def propagate(spec: ChainSpec, schedule: RampSchedule, dt: float,
              record_trace: bool = False, trace_stride: int = 50) -> EvolutionResult:
    """Evolve from the ground state at kappa_start through the ramp.

    Fixed-step unitary stepping with an embedded half-step error
    estimate; if a step's full/half discrepancy exceeds STEP_ERROR_TOL
    the step size is halved (globally, to stay deterministic) and the
    run restarts. The accepted state of each step is the two-half-step
    result. Fidelity is measured against the exact ground state at
    kappa_end.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    kinetic, bond = _dense_parts(spec)

    start_vals, start_vecs = _ground_of(_hamiltonian(kinetic, bond, schedule.kappa_start))
    psi0 = start_vecs[:, 0].astype(complex)
    end_vals, end_vecs = _ground_of(_hamiltonian(kinetic, bond, schedule.kappa_end))
    target = end_vecs[:, 0]

    while True:
        n_steps = max(1, math.ceil(schedule.duration / dt))
        step_dt = schedule.duration / n_steps
        psi = psi0.copy()
        t = 0.0
        rejected = False
        trace = [] if record_trace else None
        max_ratio = 0.0
        for step in range(n_steps):
            full = _step(kinetic, bond, schedule, psi, t, step_dt)
            half = _step(kinetic, bond, schedule, psi, t, 0.5 * step_dt)
            half = _step(kinetic, bond, schedule, half, t + 0.5 * step_dt, 0.5 * step_dt)
            if np.linalg.norm(full - half) > STEP_ERROR_TOL:
                rejected = True
                break
            psi = half
            t += step_dt
            if record_trace and (step % trace_stride == 0 or step == n_steps - 1):
                vals, vecs = _ground_of(_hamiltonian(kinetic, bond, schedule.kappa(t)))
                fid_inst = abs(np.vdot(vecs[:, 0], psi)) ** 2
                trace.append((t, fid_inst, float(np.linalg.norm(psi)),
                              schedule.kappa(t)))
        if rejected:
            dt = 0.5 * step_dt
            continue
        norm = float(np.linalg.norm(psi))
        fidelity = float(abs(np.vdot(target, psi)) ** 2)
        try:
            max_ratio = adiabatic_ratio(spec, schedule, samples=16)[0]
        except ValueError:
            max_ratio = float("nan")
        return EvolutionResult(
            final_fidelity=fidelity,
            norm_drift=abs(norm - 1.0),
            max_adiabatic_ratio=max_ratio,
            step_count=n_steps,
            accepted_dt=step_dt,
            trace=trace,
        )


def adiabatic_ratio(spec: ChainSpec, schedule: RampSchedule, samples: int):
    """Worst adiabaticity quotient |<psi0| dH/dt |psi1>| / (E1 - E0)^2.

    Sampled at `samples` evenly spaced times; the first excited level
    may be degenerate, so the matrix element is taken as the norm of the
    dH/dt image of the ground state projected onto the whole E1
    eigenspace (basis-independent, reduces to the plain matrix element
    in the non-degenerate case). Returns (max_ratio, time_of_max).
    """
    if samples < 2:
        raise ValueError(f"need samples >= 2, got {samples}")
    kinetic, bond = _dense_parts(spec)
    times = np.linspace(0.0, schedule.duration, samples)
    best = (0.0, 0.0)
    for t in times:
        rate = schedule.rate(t)
        if rate == 0.0:
            continue
        vals, vecs = _ground_of(_hamiltonian(kinetic, bond, schedule.kappa(t)))
        gap = vals[1] - vals[0]
        if gap < DEGENERATE_GAP:
            raise ValueError(f"degenerate gap {gap} at t = {t}")
        excited = np.abs(vals - vals[1]) < 1e-9
        image = rate * (bond @ vecs[:, 0])
        element = float(np.linalg.norm(vecs[:, excited].conj().T @ image))
        ratio = element / gap**2
        if ratio > best[0]:
            best = (ratio, float(t))
    return best


def physical_ramp_time(geom: Geometry, duration: float,
                       constants: Constants = CODATA2018) -> float:
    """Convert a dimensionless duration to seconds: t = duration * hbar / E0."""
    if duration < 0:
        raise ValueError(f"duration must be non-negative, got {duration}")
    return duration * constants.hbar / rotational_quantum(geom, constants)
