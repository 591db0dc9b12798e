"""Dense complex linear algebra for noiseless quantum simulation.

States are density matrices, circuits are gate lists over the
{Rx, Rz, CNOT} basis (plus generic unitaries before transpilation),
observables are Pauli strings.  Everything here is a pure function of
its inputs; randomness enters only through explicit seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_1Q = {"I": I2, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}

HADAMARD = (PAULI_X + PAULI_Z) / np.sqrt(2)
S_GATE = np.diag([1.0, 1j]).astype(complex)
CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

HERM_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIG_FLOOR = -1e-8


def as_rng(seed) -> np.random.Generator:
    """Coerce an int seed or an existing Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Square complex matrix representing the state of a finite system.

    ``dim`` is 2**n for qubit registers or the Fock truncation for
    continuous-variable states.  Instances are immutable; operations
    return new objects.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got {m.shape}")
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def n_qubits(self) -> int:
        n = int(round(math.log2(self.dim)))
        if 2 ** n != self.dim:
            raise ValueError(f"dimension {self.dim} is not a qubit register")
        return n

    @classmethod
    def from_state_vector(cls, psi) -> "DensityMatrix":
        v = np.asarray(psi, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def basis_state(cls, n_qubits: int, index: int = 0) -> "DensityMatrix":
        v = np.zeros(2 ** n_qubits, dtype=complex)
        v[index] = 1.0
        return cls.from_state_vector(v)

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        d = 2 ** n_qubits
        return cls(np.eye(d, dtype=complex) / d)

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    def validate(self, trace_atol: float = TRACE_ATOL,
                 herm_atol: float = HERM_ATOL,
                 eig_floor: float = EIG_FLOOR) -> None:
        """Raise ValueError unless Hermitian, unit trace, and PSD."""
        herm = np.abs(self.mat - self.mat.conj().T).max()
        if herm > herm_atol:
            raise ValueError(f"not Hermitian: deviation {herm:.3e}")
        tr = np.trace(self.mat)
        if abs(tr - 1.0) > trace_atol:
            raise ValueError(f"trace {tr} != 1")
        evals = np.linalg.eigvalsh((self.mat + self.mat.conj().T) / 2)
        if evals.min() < eig_floor:
            raise ValueError(f"negative eigenvalue {evals.min():.3e}")


# ---------------------------------------------------------------------------
# gates and circuits
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Gate:
    """One circuit element: Rx/Rz rotation, CNOT, or a generic unitary."""

    kind: str                      # "rx" | "rz" | "cnot" | "unitary"
    qubits: tuple
    angle: float | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit indices {self.qubits}")
        if self.kind in ("rx", "rz"):
            if len(self.qubits) != 1 or self.angle is None:
                raise ValueError(f"{self.kind} needs one qubit and an angle")
        elif self.kind == "cnot":
            if len(self.qubits) != 2:
                raise ValueError("cnot needs (control, target)")
        elif self.kind == "unitary":
            m = np.asarray(self.matrix, dtype=complex)
            d = 2 ** len(self.qubits)
            if m.shape != (d, d):
                raise ValueError(f"unitary shape {m.shape} != ({d},{d})")
            if np.abs(m @ m.conj().T - np.eye(d)).max() > 1e-10:
                raise ValueError("matrix is not unitary")
            object.__setattr__(self, "matrix", m)
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @classmethod
    def rx(cls, qubit: int, angle: float) -> "Gate":
        return cls("rx", (qubit,), angle=float(angle))

    @classmethod
    def rz(cls, qubit: int, angle: float) -> "Gate":
        return cls("rz", (qubit,), angle=float(angle))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls("cnot", (control, target))

    @classmethod
    def unitary(cls, qubits, matrix) -> "Gate":
        return cls("unitary", tuple(qubits), matrix=matrix)

    def local_matrix(self) -> np.ndarray:
        """Dense matrix on this gate's qubits, in listed-qubit order."""
        if self.kind == "rx":
            a = self.angle
            return math.cos(a / 2) * I2 - 1j * math.sin(a / 2) * PAULI_X
        if self.kind == "rz":
            a = self.angle
            return np.diag([np.exp(-1j * a / 2), np.exp(1j * a / 2)])
        if self.kind == "cnot":
            return CNOT_MATRIX
        return self.matrix


@dataclass(frozen=True, eq=False)
class NoiseMark:
    """Insertion point for placement-driven noise.

    ``position`` is a gate index (noise goes before that gate; position
    len(gates) means after the last gate), ``qubits`` are the lines the
    channel should touch there.
    """

    position: int
    qubits: tuple


@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gate sequence on n qubits, tagged with a process property.

    The tag carries whatever real number identifies the process to the
    dataset (a Hamiltonian coefficient, an evolution time, or a plain id).
    ``marks`` are optional noise-insertion anchors used by block- and
    layer-based placements.
    """

    n_qubits: int
    gates: tuple
    tag: float = 0.0
    marks: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "marks", tuple(self.marks))
        if not math.isfinite(self.tag):
            raise ValueError("circuit tag must be finite")
        for g in self.gates:
            if any(q < 0 or q >= self.n_qubits for q in g.qubits):
                raise ValueError(f"gate {g.kind} on {g.qubits} exceeds "
                                 f"{self.n_qubits} qubits")

    def unitary(self) -> np.ndarray:
        """Dense composed unitary of all gates."""
        u = np.eye(2 ** self.n_qubits, dtype=complex)
        for g in self.gates:
            u = embed_unitary(g.local_matrix(), g.qubits, self.n_qubits) @ u
        return u

    def with_tag(self, tag: float) -> "Circuit":
        return replace(self, tag=float(tag))


def embed_unitary(u_local: np.ndarray, qubits, n_qubits: int) -> np.ndarray:
    """Embed a k-qubit unitary acting on ``qubits`` into the n-qubit space.

    Qubit 0 is the most significant bit of the basis index.
    """
    qubits = tuple(qubits)
    k = len(qubits)
    rest = [q for q in range(n_qubits) if q not in qubits]
    m = np.kron(u_local, np.eye(2 ** (n_qubits - k), dtype=complex))
    order = list(qubits) + rest            # axis slot -> qubit it holds
    inv = [order.index(q) for q in range(n_qubits)]
    t = m.reshape((2,) * (2 * n_qubits))
    t = t.transpose([*inv, *[n_qubits + i for i in inv]])
    return np.ascontiguousarray(t.reshape(2 ** n_qubits, 2 ** n_qubits))


def apply_gate(state: DensityMatrix, gate: Gate) -> DensityMatrix:
    """Conjugate the state by the gate's embedded unitary."""
    n = state.n_qubits
    if any(q >= n for q in gate.qubits):
        raise IndexError(f"gate on {gate.qubits} out of range for {n} qubits")
    u = embed_unitary(gate.local_matrix(), gate.qubits, n)
    return DensityMatrix(u @ state.mat @ u.conj().T)


def apply_circuit(state: DensityMatrix, circuit: Circuit) -> DensityMatrix:
    out = state
    for g in circuit.gates:
        out = apply_gate(out, g)
    return out


def apply_gate_vector(psi: np.ndarray, gate: Gate, n_qubits: int) -> np.ndarray:
    """State-vector version of apply_gate (used by the trainers)."""
    u = embed_unitary(gate.local_matrix(), gate.qubits, n_qubits)
    return u @ psi


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PauliObservable:
    """Tensor product of single-qubit Paulis, e.g. "IXZI"."""

    paulis: str

    def __post_init__(self):
        if not self.paulis or any(c not in "IXYZ" for c in self.paulis):
            raise ValueError(f"bad Pauli string {self.paulis!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.paulis)

    @property
    def support(self) -> tuple:
        return tuple(i for i, c in enumerate(self.paulis) if c != "I")

    @classmethod
    def two_local(cls, n_qubits: int, site: int, pair: str) -> "PauliObservable":
        """Pauli ``pair`` (two letters) on qubits (site, site+1)."""
        label = ["I"] * n_qubits
        label[site], label[site + 1] = pair[0], pair[1]
        return cls("".join(label))

    @classmethod
    def single(cls, n_qubits: int, qubit: int, letter: str) -> "PauliObservable":
        label = ["I"] * n_qubits
        label[qubit] = letter
        return cls("".join(label))

    def matrix(self) -> np.ndarray:
        m = np.array([[1.0 + 0j]])
        for c in self.paulis:
            m = np.kron(m, PAULI_1Q[c])
        return m

    def support_matrix(self) -> np.ndarray:
        """Dense matrix on the support qubits only (identity if empty)."""
        if not self.support:
            return np.array([[1.0 + 0j]])
        m = np.array([[1.0 + 0j]])
        for q in self.support:
            m = np.kron(m, PAULI_1Q[self.paulis[q]])
        return m


def pauli_string_matrix(label: str) -> np.ndarray:
    return PauliObservable(label).matrix()


def expectation(state: DensityMatrix, obs) -> float:
    """tr(rho M) for a PauliObservable or a dense Hermitian matrix.

    The imaginary residue must stay below 1e-10; it is discarded.
    """
    m = obs.matrix() if isinstance(obs, PauliObservable) else np.asarray(obs)
    if m.shape[0] != state.dim:
        raise ValueError(f"observable dim {m.shape[0]} != state dim {state.dim}")
    val = np.trace(m @ state.mat)
    if abs(val.imag) > 1e-8:
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def expectation_on_support(state: DensityMatrix, obs: PauliObservable) -> float:
    """Expectation via the reduced state on the observable's support.

    Equivalent to :func:`expectation` but cheaper for few-qubit
    observables on large registers.
    """
    sup = obs.support
    if not sup:
        return float(np.real(np.trace(state.mat)))
    n = state.n_qubits
    reduced = partial_trace(state.mat, [2] * n, keep=list(sup))
    val = np.trace(obs.support_matrix() @ reduced)
    return float(val.real)


def partial_trace(mat: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep``.

    ``dims`` are the subsystem dimensions in tensor order; ``keep`` is a
    list of subsystem indices whose joint reduced matrix is returned (in
    the order given).
    """
    dims = list(dims)
    keep = list(keep)
    n = len(dims)
    t = mat.reshape(dims + dims)
    drop = [i for i in range(n) if i not in keep]
    for count, i in enumerate(sorted(drop)):
        axis = i - count                      # axes shift as we trace
        t = np.trace(t, axis1=axis, axis2=axis + (n - count))
    d_keep = int(np.prod([dims[i] for i in sorted(keep)]))
    out = t.reshape(d_keep, d_keep)
    if keep != sorted(keep):
        # reorder kept subsystems to the requested order
        kept_sorted = sorted(keep)
        perm = [kept_sorted.index(i) for i in keep]
        kd = [dims[i] for i in kept_sorted]
        tt = out.reshape(kd + kd)
        m = len(kd)
        tt = tt.transpose([*perm, *[m + p for p in perm]])
        out = tt.reshape(d_keep, d_keep)
    return out


# ---------------------------------------------------------------------------
# measurement statistics
# ---------------------------------------------------------------------------

def sample_distribution(state: DensityMatrix, shots: int, seed) -> np.ndarray:
    """Computational-basis outcome probabilities.

    ``shots == 0`` is the exact mode and returns the (clipped,
    renormalized) diagonal; otherwise the empirical frequencies of a
    multinomial draw with the given seed.
    """
    if shots < 0:
        raise ValueError("shots must be >= 0")
    p = np.real(np.diag(state.mat)).copy()
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    if shots == 0:
        return p
    rng = as_rng(seed)
    counts = rng.multinomial(shots, p)
    return counts / float(shots)


def sampled_expectation(state: DensityMatrix, obs: PauliObservable,
                        shots: int, seed) -> float:
    """Shot-noise estimate of a Pauli expectation (exact when shots=0).

    A Pauli string has eigenvalues +-1, so the estimate is built from a
    binomial draw of the +1 outcome probability.
    """
    exact = expectation_on_support(state, obs)
    if shots == 0:
        return exact
    rng = as_rng(seed)
    p_plus = min(max((1.0 + exact) / 2.0, 0.0), 1.0)
    hits = rng.binomial(shots, p_plus)
    return 2.0 * hits / shots - 1.0


# ---------------------------------------------------------------------------
# random states
# ---------------------------------------------------------------------------

def haar_random_pure(n_qubits: int, seed) -> DensityMatrix:
    """Pure state drawn from the Haar measure."""
    rng = as_rng(seed)
    d = 2 ** n_qubits
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return DensityMatrix.from_state_vector(v)


def random_mixed(n_qubits: int, seed) -> DensityMatrix:
    """Full-rank mixed state from the Ginibre ensemble, G G^dag / tr."""
    rng = as_rng(seed)
    d = 2 ** n_qubits
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m))


# ---------------------------------------------------------------------------
# Ising model and Hamiltonian evolution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsingSpec:
    """Open transverse-field Ising chain: -g sum X_i - J sum Z_i Z_{i+1}."""

    n_sites: int
    coupling: float = 1.0       # J
    field: float = 1.0          # g

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("need at least 2 sites")

    def hamiltonian(self) -> np.ndarray:
        n = self.n_sites
        h = np.zeros((2 ** n, 2 ** n), dtype=complex)
        for i in range(n):
            h -= self.field * PauliObservable.single(n, i, "X").matrix()
        for i in range(n - 1):
            h -= self.coupling * PauliObservable.two_local(n, i, "ZZ").matrix()
        return h


def ground_state(spec: IsingSpec) -> tuple[DensityMatrix, float]:
    """Lowest eigenpair by dense diagonalization (n_sites <= 12).

    For degenerate ground spaces (coupling-dominated limit) the state is
    whichever eigenvector the symmetric eigensolver returns first; the
    choice is deterministic but not symmetry-adapted.
    """
    if spec.n_sites > 12:
        raise ValueError("dense diagonalization capped at 12 sites")
    h = spec.hamiltonian()
    evals, evecs = np.linalg.eigh(h)
    return DensityMatrix.from_state_vector(evecs[:, 0]), float(evals[0])


def expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) through the eigendecomposition of Hermitian h."""
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def evolve_unitary(state: DensityMatrix, h: np.ndarray, t: float) -> DensityMatrix:
    """Evolve rho -> U rho U^dag with U = exp(-i h t)."""
    h = np.asarray(h, dtype=complex)
    if np.abs(h - h.conj().T).max() > 1e-10:
        raise ValueError("generator must be Hermitian")
    if h.shape[0] != state.dim:
        raise ValueError("dimension mismatch")
    u = expm_hermitian(h, t)
    return DensityMatrix(u @ state.mat @ u.conj().T)


# ---------------------------------------------------------------------------
# transpilation to the {Rx, Rz, CNOT} basis
# ---------------------------------------------------------------------------

_MAGIC = np.array(
    [
        [1, 0, 0, 1j],
        [0, 1j, 1, 0],
        [0, 1j, -1, 0],
        [1, 0, 0, -1j],
    ],
    dtype=complex,
) / np.sqrt(2)

# diagonal signs of XX, YY, ZZ in the magic basis, plus a constant column;
# used to solve interaction coefficients from canonical phases
_SIGNS = np.stack(
    [
        np.diag(_MAGIC.conj().T @ np.kron(p, p) @ _MAGIC).real
        for p in (PAULI_X, PAULI_Y, PAULI_Z)
    ]
    + [np.ones(4)],
    axis=1,
)

_ANGLE_TOL = 1e-12


def euler_zxz(u: np.ndarray) -> tuple[float, float, float, float]:
    """Decompose a 1-qubit unitary as e^{i phase} Rz(c) Rx(b) Rz(a).

    Returns (phase, a, b, c) with a applied first.
    """
    u = np.asarray(u, dtype=complex)
    det = np.linalg.det(u)
    phase = float(np.angle(det) / 2.0)
    v = u * np.exp(-1j * phase)
    # ZYZ angles of v, then shift into ZXZ
    b = 2.0 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    if abs(v[1, 0]) < 1e-12:
        cpa = -2.0 * np.angle(v[0, 0])      # c + a
        c_zyz, a_zyz = 0.0, float(cpa)
    elif abs(v[0, 0]) < 1e-12:
        c_zyz, a_zyz = float(2.0 * np.angle(v[1, 0])), 0.0
    else:
        a_zyz = float(-np.angle(v[0, 0]) - np.angle(v[1, 0]))
        c_zyz = float(np.angle(v[1, 0]) - np.angle(v[0, 0]))
    return phase, a_zyz - math.pi / 2.0, b, c_zyz + math.pi / 2.0


def _emit_1q(qubit: int, u: np.ndarray) -> list[Gate]:
    _, a, b, c = euler_zxz(u)
    gates = []
    if abs(a) > _ANGLE_TOL:
        gates.append(Gate.rz(qubit, a))
    if abs(b) > _ANGLE_TOL:
        gates.append(Gate.rx(qubit, b))
    if abs(c) > _ANGLE_TOL:
        gates.append(Gate.rz(qubit, c))
    return gates


def _kak_decompose(u: np.ndarray):
    """Cartan decomposition of a 4x4 unitary via the magic basis.

    Returns locals (a1, b1), (a2, b2) and coefficients (kx, ky, kz) with
    u = phase * (a1 (x) b1) exp(i(kx XX + ky YY + kz ZZ)) (a2 (x) b2).
    """
    det = np.linalg.det(u)
    un = u * np.exp(-1j * np.angle(det) / 4.0)
    up = _MAGIC.conj().T @ un @ _MAGIC
    s = up.T @ up
    o = None
    # Re(s) and Im(s) commute; a generic linear combination splits all
    # degeneracies.  Fixed angles keep the routine deterministic.
    for t in (0.0, 0.391, 0.782, 1.273, 1.914, 2.505, 3.096, 3.787):
        g = math.cos(t) * s.real + math.sin(t) * s.imag
        _, ocand = np.linalg.eigh(g)
        d = ocand.T @ s @ ocand
        if np.abs(d - np.diag(np.diag(d))).max() < 1e-10:
            o = ocand
            break
    if o is None:
        raise RuntimeError("simultaneous diagonalization failed")
    if np.linalg.det(o) < 0:
        o = o.copy()
        o[:, 0] = -o[:, 0]
    theta = np.angle(np.diag(o.T @ s @ o)) / 2.0
    k1 = up @ o @ np.diag(np.exp(-1j * theta))
    if np.linalg.det(k1.real) < 0:
        theta = theta.copy()
        theta[0] += math.pi
        k1 = up @ o @ np.diag(np.exp(-1j * theta))
    if np.abs(k1.imag).max() > 1e-8:
        raise RuntimeError("orthogonal factor is not real")
    k1 = k1.real
    k2 = o.T
    kx, ky, kz, _ = np.linalg.solve(_SIGNS, theta)

    def to_local(k):
        l = _MAGIC @ k @ _MAGIC.conj().T
        lb = l.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
        uu, ss, vh = np.linalg.svd(lb)
        if ss[1] > 1e-8:
            raise RuntimeError("orthogonal factor is not a local unitary")
        a = (uu[:, 0] * math.sqrt(ss[0])).reshape(2, 2)
        b = (vh[0, :] * math.sqrt(ss[0])).reshape(2, 2)
        r = math.sqrt(abs(np.linalg.det(a)))
        return a / r, b * r

    a1, b1 = to_local(k1)
    a2, b2 = to_local(k2)
    return (a1, b1), (a2, b2), (float(kx), float(ky), float(kz))


def _emit_2q(q0: int, q1: int, u: np.ndarray) -> list[Gate]:
    (a1, b1), (a2, b2), (kx, ky, kz) = _kak_decompose(u)
    gates: list[Gate] = []
    pend = {q0: a2, q1: b2}

    def flush():
        for q in (q0, q1):
            gates.extend(_emit_1q(q, pend[q]))
            pend[q] = I2

    sh = S_GATE @ HADAMARD
    for k, c in ((kz, I2), (kx, HADAMARD), (ky, sh)):
        if abs(k) < _ANGLE_TOL:
            continue
        cd = c.conj().T
        pend[q0] = cd @ pend[q0]
        pend[q1] = cd @ pend[q1]
        flush()
        gates.append(Gate.cnot(q0, q1))
        gates.append(Gate.rz(q1, -2.0 * k))
        gates.append(Gate.cnot(q0, q1))
        pend[q0] = c.copy()
        pend[q1] = c.copy()
    pend[q0] = a1 @ pend[q0]
    pend[q1] = b1 @ pend[q1]
    flush()
    return gates


def transpile(circuit: Circuit) -> Circuit:
    """Rewrite a circuit over the {Rx, Rz, CNOT} basis.

    Basis gates pass through unchanged (zero-angle rotations included,
    so noise anchors survive).  Generic 1-qubit unitaries become ZXZ
    Euler sequences, 2-qubit ones go through the Cartan decomposition.
    The composed unitary is preserved up to global phase; noise marks
    are remapped onto the rewritten gate positions.
    """
    out: list[Gate] = []
    offsets = []
    for g in circuit.gates:
        offsets.append(len(out))
        if g.kind in ("rx", "rz", "cnot"):
            out.append(g)
        elif len(g.qubits) == 1:
            out.extend(_emit_1q(g.qubits[0], g.matrix))
        elif len(g.qubits) == 2:
            out.extend(_emit_2q(g.qubits[0], g.qubits[1], g.matrix))
        else:
            raise ValueError(
                f"cannot transpile a {len(g.qubits)}-qubit unitary")
    offsets.append(len(out))
    marks = tuple(
        NoiseMark(offsets[m.position], m.qubits) for m in circuit.marks
    )
    return Circuit(circuit.n_qubits, tuple(out), tag=circuit.tag, marks=marks)


def unitary_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Operator distance after global-phase alignment."""
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    ph = u[idx] / v[idx]
    ph = ph / abs(ph) if abs(ph) > 0 else 1.0
    return float(np.abs(u - ph * v).max())
