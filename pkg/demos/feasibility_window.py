"""Sweep the sphere gap of the micrometer design and watch the feasibility
window open and close.

Small gaps break the scale hierarchy (the spheres nearly touch), large gaps
push the coupling so weak that the energy gap drops below any realistic
cryostat temperature.

Run:  python3 demos/feasibility_window.py
"""

import numpy as np

from rotorsim import Environment, Geometry, feasibility

BASE = dict(
    wire_radius=100e-9,
    insulating_sphere_radius=400e-9,
    conducting_sphere_radius=500e-9,
    lattice_spacing=12.5e-6,
)
ENV = Environment(temperature=1e-5, magnetic_field=0.0)

print(f"{'gamma [um]':>11} {'g_eff':>8} {'gap [uK]':>10} {'T/gap':>8} {'verdict':>8}")
for gamma in np.geomspace(0.8e-6, 8e-6, 12):
    geom = Geometry(sphere_gap=float(gamma), **BASE)
    rep = feasibility(geom, ENV)
    eff = rep.effective
    print(f"{gamma * 1e6:11.3f} {eff.effective_coupling:8.3f} "
          f"{eff.gap_temperature * 1e6:10.1f} {rep.temperature_ratio:8.3f} "
          f"{rep.overall_verdict:>8}")
