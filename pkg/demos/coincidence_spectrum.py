"""Cascade photon coincidences versus two-photon detuning.

Compares the steady-state coincidence signal of two coupled emitters at
120 nm against the independent-emitter case, together with its split into
population and photon-exchange parts.  Coupling the emitters lowers the
overall coincidence level and skews the line.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from collemit import (
    build_collective_basis,
    build_generator,
    damping_channels,
    g2_coincidence,
    initial_state,
    rb87_diamond,
    steady_state,
)

basis = build_collective_basis(4, 2)
R12 = 120.0


def sweep(couplings_on):
    rows = []
    for delta2 in np.linspace(-10.0, 10.0, 121):
        system = rb87_diamond(r12=R12, delta2=delta2, couplings_on=couplings_on)
        gen = build_generator(system.hamiltonian(), damping_channels(system.tensors, 4, 2), basis)
        w_ss = steady_state(gen, initial_state(basis))
        k23 = system.array.scheme.transition((3, 2)).wavenumber
        k30 = system.array.scheme.transition((0, 3)).wavenumber
        res = g2_coincidence(w_ss, basis, k23, k30, R12)
        rows.append((delta2, res.g2, res.gpp, res.gpe))
    return np.asarray(rows)

coupled = sweep(True)
independent = sweep(False)

fig, (top, bottom) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
top.plot(independent[:, 0], independent[:, 1], label="independent emitters")
top.plot(coupled[:, 0], coupled[:, 1], label="coupled at 120 nm")
top.set_ylabel("coincidence signal (arb.)")
top.legend()
bottom.plot(coupled[:, 0], coupled[:, 2], label="population part")
bottom.plot(coupled[:, 0], coupled[:, 3], label="photon-exchange part")
bottom.axhline(0.0, color="k", lw=0.5)
bottom.set_xlabel("two-photon detuning (1e6 rad/s)")
bottom.set_ylabel("split (arb.)")
bottom.legend()
fig.tight_layout()
fig.savefig("coincidence_spectrum.png", dpi=150)
print("wrote coincidence_spectrum.png")

print(f"peak coupled      : {coupled[:, 1].max():.4f}")
print(f"peak independent  : {independent[:, 1].max():.4f}")
print(f"exchange part sign at resonance: {coupled[60, 3]:+.4f}")
