"""Quantum states, gates, and stock circuits over the complex instance.

States are broadcast-column diagrams: a level-k diagram reads the
interleaved bits (q0 row, q0 col, q1 row, ...) and a state stores
amplitude(x) in every cell of row x, so gate application is plain
matrix multiplication with no scaling correction.  Qubit counts are
padded up to a power of two; padding qubits stay |0> and are stripped
again by measurement, as are the column bits.

Qubit 0 is the most significant bit of a basis label: |q0 q1 ... >.

One-qubit gates are embedded with balanced Kronecker trees over cached
identities, so building a gate on P qubits touches O(log P) fresh
groupings.  Controlled gates use the projection decomposition

    C-U(a, b) = |0><0|_a (x) I  +  |1><1|_a (x) U_b

with each term assembled the same way and the sum taken pointwise.
"""

import cmath
import math

from .core import Diagram, Forest, evaluate
from .construct import fold, hadamard_family, identity_matrix, not_matrix
from .matrix import apply_matrix_to_vector, kronecker
from .pointwise import add
from .sampling import SampleContext, measure_view, sample_assignment
from .semifield import complex_field

__all__ = [
    "Circuit",
    "QuantumState",
    "amplitude",
    "basis_state",
    "bernstein_vazirani",
    "build_gate",
    "deutsch_jozsa",
    "ghz",
    "grover",
    "measure",
    "parse_circuit",
    "qft",
    "quantum_forest",
    "run_circuit",
    "state_vector",
]

_GATE_ARITY = {"H": 1, "X": 1, "I": 1, "PHASE": 1, "CNOT": 2, "CP": 2}


def quantum_forest() -> Forest:
    """A fresh forest over the complex instance."""
    return Forest(complex_field())


def _padded(n: int) -> int:
    if n < 1:
        raise ValueError("qubit count must be positive")
    p = 1
    while p < n:
        p <<= 1
    return p


def _level(p: int) -> int:
    return p.bit_length()  # p is a power of two: level = log2(p) + 1


class QuantumState:
    """An n-qubit state plus the padded diagram that carries it."""

    __slots__ = ("n", "padded", "diagram")

    def __init__(self, n: int, diagram: Diagram):
        self.n = n
        self.padded = _padded(n)
        self.diagram = diagram

    def __repr__(self):
        return f"<QuantumState {self.n} qubits, level {self.diagram.level}>"


class Circuit:
    """A gate list over n qubits; build with h/x/cnot/cp or parse_circuit."""

    def __init__(self, n: int, hidden: str | None = None):
        if n < 1:
            raise ValueError("qubit count must be positive")
        self.n = n
        self.hidden = hidden
        self.gates = []

    def _check(self, *qubits):
        for q in qubits:
            if not 0 <= q < self.n:
                raise ValueError(f"qubit {q} out of range for {self.n} qubits")

    def h(self, q: int):
        self._check(q)
        self.gates.append(("H", q))
        return self

    def x(self, q: int):
        self._check(q)
        self.gates.append(("X", q))
        return self

    def phase(self, theta: float, q: int):
        self._check(q)
        self.gates.append(("PHASE", theta, q))
        return self

    def cnot(self, control: int, target: int):
        self._check(control, target)
        if control == target:
            raise ValueError("CNOT control and target must differ")
        self.gates.append(("CNOT", control, target))
        return self

    def cp(self, theta: float, control: int, target: int):
        self._check(control, target)
        if control == target:
            raise ValueError("CP control and target must differ")
        self.gates.append(("CP", theta, control, target))
        return self

    def __repr__(self):
        return f"<Circuit {self.n} qubits, {len(self.gates)} gates>"


def parse_circuit(text: str, n: int | None = None) -> Circuit:
    """Circuit from one gate per line: H q | X q | CNOT c t | CP theta c t.

    Blank lines and lines starting with # are skipped.  The qubit count
    is inferred from the largest index unless given.
    """
    parsed = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        op = parts[0].upper()
        try:
            if op in ("H", "X") and len(parts) == 2:
                q = int(parts[1])
                parsed.append((op, q))
                top = max(top, q)
            elif op == "PHASE" and len(parts) == 3:
                theta, q = float(parts[1]), int(parts[2])
                parsed.append((op, theta, q))
                top = max(top, q)
            elif op == "CNOT" and len(parts) == 3:
                a, b = int(parts[1]), int(parts[2])
                parsed.append((op, a, b))
                top = max(top, a, b)
            elif op == "CP" and len(parts) == 4:
                theta, a, b = float(parts[1]), int(parts[2]), int(parts[3])
                parsed.append((op, theta, a, b))
                top = max(top, a, b)
            else:
                raise ValueError("bad shape")
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {line!r}") from None
    if top < 0 and n is None:
        raise ValueError("empty circuit and no qubit count given")
    count = (top + 1) if n is None else n
    circuit = Circuit(count)
    for gate in parsed:
        if gate[0] == "H":
            circuit.h(gate[1])
        elif gate[0] == "X":
            circuit.x(gate[1])
        elif gate[0] == "PHASE":
            circuit.phase(gate[1], gate[2])
        elif gate[0] == "CNOT":
            circuit.cnot(gate[1], gate[2])
        else:
            circuit.cp(gate[1], gate[2], gate[3])
    return circuit


# -- gate construction -----------------------------------------------------


def _single(forest, kind, theta=None):
    field = forest.field
    if kind == "H":
        return hadamard_family(forest, 1)
    if kind == "X":
        return not_matrix(forest, 1)
    if kind == "I":
        return identity_matrix(forest, 1)
    if kind == "PHASE":
        return fold(forest, [field.one, field.zero, field.zero,
                             cmath.exp(1j * theta)])
    raise ValueError(f"unknown single-qubit gate {kind!r}")


def _kron_segment(forest, lo, hi, specials):
    """Kronecker product of per-qubit factors over [lo, hi).

    ``specials`` maps qubit index to a level-1 matrix; everything else
    is the identity, and all-identity segments come from the cache
    without recursing.
    """
    if not any(lo <= q < hi for q in specials):
        return identity_matrix(forest, _level(hi - lo))
    if hi - lo == 1:
        return specials[lo]
    mid = (lo + hi) // 2
    return kronecker(_kron_segment(forest, lo, mid, specials),
                     _kron_segment(forest, mid, hi, specials))


def build_gate(forest: Forest, gate, n: int) -> Diagram:
    """The full n-qubit (padded) matrix for one gate description.

    ``gate`` is a tuple as stored by Circuit: ("H", q), ("X", q),
    ("PHASE", theta, q), ("CNOT", a, b), or ("CP", theta, a, b).
    """
    p = _padded(n)
    field = forest.field
    kind = gate[0]
    if kind in ("H", "X", "I"):
        q = gate[1]
        return _kron_segment(forest, 0, p, {q: _single(forest, kind)})
    if kind == "PHASE":
        theta, q = gate[1], gate[2]
        return _kron_segment(forest, 0, p,
                             {q: _single(forest, "PHASE", theta)})
    if kind == "CNOT":
        a, b = gate[1], gate[2]
        u = _single(forest, "X")
    elif kind == "CP":
        theta, a, b = gate[1], gate[2], gate[3]
        u = _single(forest, "PHASE", theta)
    else:
        raise ValueError(f"unknown gate {gate!r}")
    if a == b:
        raise ValueError("control and target must differ")
    p0 = fold(forest, [field.one, field.zero, field.zero, field.zero])
    p1 = fold(forest, [field.zero, field.zero, field.zero, field.one])
    rest = _kron_segment(forest, 0, p, {a: p0})
    acting = _kron_segment(forest, 0, p, {a: p1, b: u})
    return add(rest, acting)


# -- states -----------------------------------------------------------------


def basis_state(forest: Forest, bits) -> Diagram:
    """Broadcast-column diagram for the basis state |bits>.

    ``bits`` must already have power-of-two length; use run_circuit or
    QuantumState for logical qubit counts.
    """
    bits = tuple(int(b) for b in bits)
    p = len(bits)
    if p & (p - 1) or p < 1:
        raise ValueError("basis_state needs a power-of-two qubit count")
    field = forest.field
    blocks = (fold(forest, [field.one, field.one, field.zero, field.zero]),
              fold(forest, [field.zero, field.zero, field.one, field.one]))
    zero_powers = forest.cache("basis_zero_powers")

    def segment_zero(width):
        hit = zero_powers.get(width)
        if hit is None:
            if width == 1:
                hit = blocks[0]
            else:
                half = segment_zero(width // 2)
                hit = kronecker(half, half)
            zero_powers[width] = hit
        return hit

    def segment(lo, hi):
        width = hi - lo
        if not any(bits[lo:hi]):
            return segment_zero(width)
        if width == 1:
            return blocks[bits[lo]]
        mid = (lo + hi) // 2
        return kronecker(segment(lo, mid), segment(mid, hi))

    return segment(0, p)


def run_circuit(circuit: Circuit, forest: Forest | None = None) -> QuantumState:
    """Left fold of gate application starting from |0...0>."""
    if forest is None:
        forest = quantum_forest()
    p = _padded(circuit.n)
    state = basis_state(forest, (0,) * p)
    for gate in circuit.gates:
        matrix = build_gate(forest, gate, circuit.n)
        state = apply_matrix_to_vector(matrix, state)
    return QuantumState(circuit.n, state)


def amplitude(state: QuantumState, bits) -> complex:
    """Amplitude of |bits> (logical, unpadded)."""
    bits = tuple(int(b) for b in bits)
    if len(bits) != state.n:
        raise ValueError(f"expected {state.n} bits")
    padded = bits + (0,) * (state.padded - state.n)
    assignment = []
    for b in padded:
        assignment.append(b)
        assignment.append(0)
    return evaluate(state.diagram, assignment)


def state_vector(state: QuantumState):
    """All 2^n amplitudes in basis-label order; desk scale only."""
    if state.n > 16:
        raise ValueError("state_vector is meant for small qubit counts")
    out = []
    for x in range(1 << state.n):
        bits = [(x >> (state.n - 1 - j)) & 1 for j in range(state.n)]
        out.append(amplitude(state, bits))
    return out


def measure(state: QuantumState, shots: int, seed: int):
    """Histogram of basis labels sampled from |amplitude|^2.

    Column bits and padding qubits are stripped from each draw; the
    result maps n-character bit strings to counts.
    """
    view = measure_view(state.diagram)
    ctx = SampleContext(seed)
    counts = {}
    for _ in range(shots):
        a = sample_assignment(view, ctx)
        label = a[0::2][:state.n]
        counts[label] = counts.get(label, 0) + 1
    return counts


# -- stock circuits ----------------------------------------------------------


def ghz(n: int) -> Circuit:
    """H on qubit 0 plus a CNOT chain: (|0...0> + |1...1>)/sqrt(2)."""
    c = Circuit(n)
    c.h(0)
    for q in range(n - 1):
        c.cnot(q, q + 1)
    return c


def bernstein_vazirani(n: int, hidden: str) -> Circuit:
    """BV over n input qubits and one ancilla; measuring gives hidden."""
    if len(hidden) != n or set(hidden) - {"0", "1"}:
        raise ValueError("hidden string must be n bits of 0/1")
    c = Circuit(n + 1, hidden=hidden)
    c.x(n)
    for q in range(n + 1):
        c.h(q)
    for q, bit in enumerate(hidden):
        if bit == "1":
            c.cnot(q, n)
    for q in range(n):
        c.h(q)
    return c


def deutsch_jozsa(n: int, hidden: str | None) -> Circuit:
    """DJ with a balanced oracle from a nonzero hidden string.

    ``hidden=None`` builds the constant-zero oracle; measuring the
    input register then gives all zeros, versus never all zeros for a
    balanced oracle.
    """
    if hidden is not None and (len(hidden) != n or set(hidden) - {"0", "1"}
                               or hidden == "0" * n):
        raise ValueError("hidden string must be n bits and nonzero")
    c = Circuit(n + 1, hidden=hidden)
    c.x(n)
    for q in range(n + 1):
        c.h(q)
    if hidden is not None:
        for q, bit in enumerate(hidden):
            if bit == "1":
                c.cnot(q, n)
    for q in range(n):
        c.h(q)
    return c


def qft(n: int, basis: int = 0) -> Circuit:
    """QFT circuit; run on |basis> it yields the Fourier-transformed state.

    The basis state is prepared with X gates, then the textbook ladder
    of H and controlled phases runs, and final swaps (three CNOTs each)
    restore ascending bit order.
    """
    if not 0 <= basis < (1 << n):
        raise ValueError("basis label out of range")
    c = Circuit(n)
    for q in range(n):
        if (basis >> (n - 1 - q)) & 1:
            c.x(q)
    for q in range(n):
        c.h(q)
        for k in range(q + 1, n):
            c.cp(math.pi / (1 << (k - q)), k, q)
    for q in range(n // 2):
        other = n - 1 - q
        c.cnot(q, other).cnot(other, q).cnot(q, other)
    return c


def grover(n: int, hidden: str, forest: Forest | None = None):
    """Grover search at desk scale; returns (state, iterations).

    The phase oracle and the diffusion operator are folded from dense
    tables, so n is capped at 4.
    """
    if n > 4:
        raise ValueError("grover is supported for n <= 4")
    if len(hidden) != n or set(hidden) - {"0", "1"}:
        raise ValueError("hidden string must be n bits of 0/1")
    if forest is None:
        forest = quantum_forest()
    size = 1 << n
    marked = int(hidden, 2)
    oracle = _embedded_dense(
        forest, n, lambda r, c:
        (-1.0 if r == marked else 1.0) if r == c else 0.0)
    mean = 2.0 / size
    diffusion = _embedded_dense(
        forest, n, lambda r, c: mean - (1.0 if r == c else 0.0))
    uniform = Circuit(n)
    for q in range(n):
        uniform.h(q)
    state = run_circuit(uniform, forest).diagram
    iterations = max(1, math.floor(math.pi / 4 * math.sqrt(size)))
    for _ in range(iterations):
        state = apply_matrix_to_vector(oracle, state)
        state = apply_matrix_to_vector(diffusion, state)
    return QuantumState(n, state), iterations


def _embedded_dense(forest, n, cell):
    """Dense n-qubit operator padded with identity action to 2^k qubits.

    ``cell(r, c)`` gives the entry over the logical qubits; the padded
    table acts as the identity on the padding bits.
    """
    p = _padded(n)
    shift = p - n
    side = 1 << p
    table = []
    for r in range(side):
        row = []
        for c in range(side):
            if shift and (r & ((1 << shift) - 1)) != (c & ((1 << shift) - 1)):
                row.append(0.0)
            else:
                row.append(cell(r >> shift, c >> shift))
        table.append(row)
    return _matrix_from_dense(forest, table)


def _matrix_from_dense(forest, table):
    """Interleaved-order diagram of a dense 2^m x 2^m table, m a power of 2."""
    side = len(table)
    half = side.bit_length() - 1
    flat = [None] * (side * side)
    for r in range(side):
        for c in range(side):
            idx = 0
            for j in range(half):
                rb = (r >> (half - 1 - j)) & 1
                cb = (c >> (half - 1 - j)) & 1
                idx = (idx << 2) | (rb << 1) | cb
            flat[idx] = table[r][c]
    return fold(forest, flat)
