#!/usr/bin/env python3
"""Simulate a few textbook circuits on the diagram backend.

States are diagrams over the complex instance; gates are matrix
diagrams applied by diagram-level matrix-vector product, so a GHZ
state over thousands of qubits stays small. Measurement samples
directly from the squared-magnitude view without expanding the state
vector.
"""

import math

from wcflobdd.core import size
from wcflobdd.quantum import (Circuit, amplitude, bernstein_vazirani, ghz,
                              measure, qft, run_circuit, state_vector)


def main():
    print("GHZ on 3 qubits: H 0; CNOT 0 1; CNOT 1 2")
    state = run_circuit(ghz(3))
    for label in ("000", "111", "010"):
        a = amplitude(state, label)
        print(f"  amplitude({label}) = {a.real:+.6f}{a.imag:+.6f}j")
    counts = measure(state, shots=2000, seed=11)
    print(f"  2000 shots: {dict(sorted(counts.items()))}")

    print("\nGHZ scales: diagram size grows by a constant per doubling")
    for n in (16, 128, 1024, 4096):
        s = size(run_circuit(ghz(n)).diagram)
        print(f"  qubits {n:>5}: total size {s.total}")

    hidden = "1101"
    print(f"\nBernstein-Vazirani recovers s = {hidden} in one query")
    state = run_circuit(bernstein_vazirani(4, hidden))
    outcome = next(iter(measure(state, shots=1, seed=3)))
    print(f"  measured data register: {outcome[:4]}")
    assert outcome[:4] == hidden

    print("\nQFT of |5> on 3 qubits: amplitudes e^(2*pi*i*5k/8)/sqrt(8)")
    state = run_circuit(qft(3, basis=5))
    for k, a in enumerate(state_vector(state)):
        phase = math.atan2(a.imag, a.real) / math.pi
        print(f"  |{k:03b}>  modulus {abs(a):.6f}  phase {phase:+.4f} pi")

    print("\nHand-written circuit: equal superposition then phase kick")
    circuit = Circuit(2).h(0).h(1).cp(math.pi / 2, 0, 1)
    state = run_circuit(circuit)
    for k, a in enumerate(state_vector(state)):
        print(f"  |{k:02b}>  {a.real:+.4f}{a.imag:+.4f}j")


if __name__ == "__main__":
    main()
