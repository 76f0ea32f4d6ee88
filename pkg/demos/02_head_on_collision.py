"""Anti-parallel vortex pair in d = 3: the discrete head-on collision.

A Gaussian blob above the symmetry plane (with its implicit odd mirror
below) drifts toward the plane while stretching radially.  Along the way
the exact discrete theorems are visible in the printed diagnostics: the
total mass R0 never changes a bit, Z strictly decreases, R = R_{d-1}
strictly increases, and the interaction energy stays flat.
"""

import numpy as np

from axivort import (
    Dimension,
    InitialData,
    StepControl,
    compute_sample,
    make_initial_state,
    run,
)


def main():
    dim = Dimension(3)
    init = InitialData(kind="gaussian_pair", r0=1.0, z0=0.5, sigma=0.15,
                       strength=1.0, grid_n=24, cutoff=4.0)
    state = make_initial_state(dim, delta=0.05, data=init)
    print(f"{state.n} particles, total mass {float(np.sum(state.w)):.6e}\n")
    print(f"{'t':>5} {'R0':>13} {'Z':>11} {'R':>11} {'E':>12} "
          f"{'dZ/dt':>11} {'dR/dt':>11}")

    rows = []

    def sink(st):
        s = compute_sample(st)
        rows.append(s)
        print(f"{s.t:5.2f} {s.R0:.7e} {s.Z:.5e} {s.R_dm1:.5e} "
              f"{s.E:.6e} {s.dZdt_k:11.3e} {s.dRdt_k:11.3e}")

    run(state, StepControl(t_end=4.0, cfl=0.25, output_every=0.5), sink)

    z = [s.Z for s in rows]
    r = [s.R_dm1 for s in rows]
    e = [s.E for s in rows]
    print("\nmass values distinct:", len({s.R0 for s in rows}))
    print("Z strictly decreasing:", all(b < a for a, b in zip(z, z[1:])))
    print("R strictly increasing:", all(b > a for a, b in zip(r, r[1:])))
    print(f"energy drift: {max(abs(x - e[0]) for x in e) / e[0]:.2e}")


if __name__ == "__main__":
    main()
