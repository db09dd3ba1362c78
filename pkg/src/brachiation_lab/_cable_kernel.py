"""Compiled inner loop for the lumped-mass cable substeps.

The cable's axial modes sit near sqrt(k_seg/m_node) ~ 3.5e3 rad/s, so each robot
step (1e-4 s) wraps many semi-implicit Euler substeps.  This is the only numba
surface in the package; everything else is plain numpy.  The force law here must
stay in lockstep with cable.internal_forces — a test compares one substep of
this kernel against the vectorized forces.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def advance(
    pos,        # (n+1, 2) node positions, mutated in place
    vel,        # (n+1, 2) node velocities, mutated in place
    n_steps,    # number of substeps
    dt,         # substep size
    k_seg,      # axial stiffness per segment
    c_seg,      # axial damping per segment
    rest,       # natural segment length
    inv_mass,   # (n+1,) inverse node masses; 0 pins a node (supports, slaved node)
    acc0,       # (n+1, 2) constant acceleration per node (gravity / external load)
    ai,         # slaved attachment node index, or -1
    z0,         # attachment height at window start
    zdot,       # attachment vertical rate over the window
    drag,       # per-step velocity retention factor (1.0 = undamped relaxation off)
):
    n_nodes = pos.shape[0]
    fx = np.empty(n_nodes)
    fz = np.empty(n_nodes)
    for step in range(n_steps):
        for i in range(n_nodes):
            fx[i] = 0.0
            fz[i] = 0.0
        for s in range(n_nodes - 1):
            dx = pos[s + 1, 0] - pos[s, 0]
            dz = pos[s + 1, 1] - pos[s, 1]
            length = np.sqrt(dx * dx + dz * dz)
            if length < 1e-12:
                continue
            ux = dx / length
            uz = dz / length
            rate = (vel[s + 1, 0] - vel[s, 0]) * ux + (vel[s + 1, 1] - vel[s, 1]) * uz
            tension = k_seg * (length - rest) + c_seg * rate
            fx[s] += tension * ux
            fz[s] += tension * uz
            fx[s + 1] -= tension * ux
            fz[s + 1] -= tension * uz
        for i in range(n_nodes):
            im = inv_mass[i]
            if im > 0.0:
                vel[i, 0] = (vel[i, 0] + dt * (fx[i] * im + acc0[i, 0])) * drag
                vel[i, 1] = (vel[i, 1] + dt * (fz[i] * im + acc0[i, 1])) * drag
                pos[i, 0] += dt * vel[i, 0]
                pos[i, 1] += dt * vel[i, 1]
        if ai >= 0:
            pos[ai, 1] = z0 + zdot * (step + 1) * dt
            vel[ai, 1] = zdot
