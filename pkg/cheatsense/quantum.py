"""
Dense complex linear algebra for small multi-register Hilbert spaces.

Register convention: a layout is a tuple of register dimensions listed in
index order, index 0 being the least significant (rightmost Kronecker
factor).  ``tensor(a, b)`` puts ``a`` in the more significant position, so
the layout of the product is ``b.register_layout + a.register_layout``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Literal, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.stats import unitary_group

from .branching import ZERO_PROBABILITY, RngLike, as_generator
from .exceptions import CapacityError, InvalidArgumentError, NumericalError

logger = logging.getLogger(__name__)

#: Tolerance for algebraic identities and type invariants.
ATOL = 1e-9
#: Tolerance for constructed unitaries.
UNITARY_ATOL = 1e-12
#: Probabilities and eigenvalues this far outside their range are clipped.
CLIP_ATOL = 1e-12
#: Eigenvalues of rho0 - rho1 above this go to the Helstrom outcome "0".
HELSTROM_THRESHOLD = 1e-12
#: Largest total Hilbert-space dimension (10 qubits).
MAX_DIMENSION = 2 ** 10

Layout = Tuple[int, ...]
MeasurementKind = Literal["projective", "povm"]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def as_complex_matrix(data, *, square: bool = False, max_dimension: Optional[int] = MAX_DIMENSION) -> np.ndarray:
    """Coerce `data` into a finite 2-D complex array."""
    matrix = np.array(data, dtype=complex)
    if matrix.ndim != 2 or min(matrix.shape) < 1:
        raise InvalidArgumentError(f"Expected a non-empty 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidArgumentError("Matrix entries must be finite")
    if max_dimension is not None and max(matrix.shape) > max_dimension:
        raise CapacityError(f"Matrix shape {matrix.shape} exceeds the dimension cap {max_dimension}")
    if square and matrix.shape[0] != matrix.shape[1]:
        raise InvalidArgumentError(f"Matrix must be square, got shape {matrix.shape}")
    return matrix


def _normalise_layout(layout: Iterable[int], dim: int) -> Layout:
    dims = tuple(int(d) for d in layout) or (dim,)
    if any(d < 1 for d in dims):
        raise InvalidArgumentError(f"Register dimensions must be positive, got {dims}")
    if math.prod(dims) != dim:
        raise InvalidArgumentError(f"Layout {dims} does not match dimension {dim}")
    return dims


def _check_targets(layout: Layout, targets: Sequence[int]) -> List[int]:
    picked = [int(t) for t in targets]
    if not picked:
        raise InvalidArgumentError("At least one target register is required")
    if len(set(picked)) != len(picked):
        raise InvalidArgumentError(f"Duplicate target registers: {picked}")
    bad = [t for t in picked if not 0 <= t < len(layout)]
    if bad:
        raise InvalidArgumentError(f"Registers {bad} outside layout {layout}")
    return picked


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def is_unitary(matrix: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=atol))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalised pure state."""

    amplitudes: np.ndarray
    register_layout: Layout = ()

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 1 or not np.all(np.isfinite(amps)):
            raise InvalidArgumentError("State amplitudes must be finite and non-empty")
        layout = _normalise_layout(self.register_layout, amps.size)
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > ATOL:
            raise InvalidArgumentError(f"State is not normalised (norm squared {norm:.12g})")
        object.__setattr__(self, "amplitudes", _frozen(amps))
        object.__setattr__(self, "register_layout", layout)

    @classmethod
    def normalised(cls, amplitudes, register_layout: Iterable[int] = ()) -> "StateVector":
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(amps))
        if norm <= ZERO_PROBABILITY:
            raise NumericalError("Cannot normalise a zero vector", {"norm": norm})
        return cls(amps / norm, tuple(register_layout))

    @classmethod
    def basis(cls, index: int, register_layout: Iterable[int]) -> "StateVector":
        layout = tuple(register_layout)
        amps = np.zeros(math.prod(layout), dtype=complex)
        amps[index] = 1.0
        return cls(amps, layout)

    @classmethod
    def ket(cls, bits: str) -> "StateVector":
        """Computational basis state of qubits; the leftmost character is the highest register."""
        if not bits or set(bits) - {"0", "1"}:
            raise InvalidArgumentError(f"Expected a non-empty bit string, got {bits!r}")
        return cls.basis(int(bits, 2), (2,) * len(bits))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.register_layout)

    def overlap(self, other: "StateVector") -> complex:
        if other.dim != self.dim:
            raise InvalidArgumentError(f"Dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def equals_up_to_phase(self, other: "StateVector", atol: float = ATOL) -> bool:
        return other.dim == self.dim and abs(abs(self.overlap(other)) - 1.0) <= atol


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Mixed state: Hermitian, unit trace, positive semidefinite."""

    matrix: np.ndarray
    register_layout: Layout = ()

    def __post_init__(self) -> None:
        m = as_complex_matrix(self.matrix, square=True, max_dimension=None)
        layout = _normalise_layout(self.register_layout, m.shape[0])
        if not np.allclose(m, m.conj().T, atol=ATOL):
            raise InvalidArgumentError("Density matrix is not Hermitian")
        m = (m + m.conj().T) / 2
        trace = float(np.trace(m).real)
        if abs(trace - 1.0) > ATOL:
            raise InvalidArgumentError(f"Density matrix trace is {trace:.12g}, expected 1")
        lowest = float(scipy.linalg.eigh(m, eigvals_only=True)[0])
        if lowest < -ATOL:
            raise InvalidArgumentError(f"Density matrix has negative eigenvalue {lowest:.3g}")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "register_layout", layout)

    @classmethod
    def from_state(cls, state: "StateVector") -> "DensityMatrix":
        return state.density()

    @classmethod
    def maximally_mixed(cls, register_layout: Iterable[int]) -> "DensityMatrix":
        layout = tuple(register_layout)
        dim = math.prod(layout)
        return cls(np.eye(dim, dtype=complex) / dim, layout)

    @classmethod
    def mixture(cls, components: Iterable[Tuple[float, Union["StateVector", "DensityMatrix"]]]) -> "DensityMatrix":
        """Convex combination of states; weights must sum to one."""
        total = None
        layout: Layout = ()
        weight_sum = 0.0
        for weight, state in components:
            rho = as_density(state)
            if total is None:
                total = np.zeros_like(rho.matrix)
                layout = rho.register_layout
            elif rho.register_layout != layout:
                raise InvalidArgumentError("Mixture components must share one register layout")
            total = total + float(weight) * rho.matrix
            weight_sum += float(weight)
        if total is None:
            raise InvalidArgumentError("Mixture needs at least one component")
        if abs(weight_sum - 1.0) > ATOL:
            raise InvalidArgumentError(f"Mixture weights sum to {weight_sum}, expected 1")
        return cls(total, layout)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def allclose(self, other: "DensityMatrix", atol: float = ATOL) -> bool:
        return other.dim == self.dim and bool(np.allclose(self.matrix, other.matrix, atol=atol))


@dataclass(frozen=True, eq=False)
class Measurement:
    """Labelled projective measurement or POVM."""

    labels: Tuple[str, ...]
    elements: Tuple[np.ndarray, ...]
    kind: MeasurementKind = "projective"

    def __post_init__(self) -> None:
        labels = tuple(str(label) for label in self.labels)
        if self.kind not in ("projective", "povm"):
            raise InvalidArgumentError(f"Unknown measurement kind '{self.kind}'")
        if not labels or len(labels) != len(self.elements):
            raise InvalidArgumentError("Measurement needs one label per element")
        if len(set(labels)) != len(labels):
            raise InvalidArgumentError(f"Duplicate outcome labels: {labels}")
        elements = tuple(as_complex_matrix(e, square=True, max_dimension=None) for e in self.elements)
        dim = elements[0].shape[0]
        if any(e.shape[0] != dim for e in elements):
            raise InvalidArgumentError("Measurement elements must share one dimension")
        identity = np.eye(dim)
        cleaned = []
        for label, element in zip(labels, elements):
            if not np.allclose(element, element.conj().T, atol=ATOL):
                raise InvalidArgumentError(f"Element '{label}' is not Hermitian")
            element = (element + element.conj().T) / 2
            if scipy.linalg.eigh(element, eigvals_only=True)[0] < -ATOL:
                raise InvalidArgumentError(f"Element '{label}' is not positive semidefinite")
            if self.kind == "projective" and not np.allclose(element @ element, element, atol=ATOL):
                raise InvalidArgumentError(f"Element '{label}' is not a projector")
            cleaned.append(_frozen(element))
        if not np.allclose(sum(cleaned), identity, atol=ATOL):
            raise InvalidArgumentError("Measurement elements do not sum to the identity")
        if self.kind == "projective":
            for a in range(len(cleaned)):
                for b in range(a + 1, len(cleaned)):
                    if not np.allclose(cleaned[a] @ cleaned[b], 0, atol=ATOL):
                        raise InvalidArgumentError(f"Projectors '{labels[a]}' and '{labels[b]}' overlap")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "elements", tuple(cleaned))

    @classmethod
    def computational(cls, dim: int = 2) -> "Measurement":
        elements = []
        for k in range(dim):
            projector = np.zeros((dim, dim), dtype=complex)
            projector[k, k] = 1.0
            elements.append(projector)
        return cls(tuple(str(k) for k in range(dim)), tuple(elements), "projective")

    @classmethod
    def from_projectors(cls, projectors: Mapping[str, np.ndarray]) -> "Measurement":
        return cls(tuple(projectors), tuple(projectors.values()), "projective")

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def element(self, label: str) -> np.ndarray:
        try:
            return self.elements[self.labels.index(label)]
        except ValueError:
            raise InvalidArgumentError(f"Unknown outcome label '{label}'") from None

    @cached_property
    def kraus(self) -> Tuple[np.ndarray, ...]:
        """Kraus operators: the projectors themselves, or square roots of POVM elements."""
        if self.kind == "projective":
            return self.elements
        return tuple(_psd_sqrt(e) for e in self.elements)


@dataclass(frozen=True)
class ProbDist:
    """Distribution over outcome labels, in label order."""

    probabilities: Dict[str, float]

    def __post_init__(self) -> None:
        cleaned: Dict[str, float] = {}
        for label, value in dict(self.probabilities).items():
            p = float(value)
            if not math.isfinite(p) or p < -CLIP_ATOL or p > 1.0 + CLIP_ATOL:
                raise NumericalError(f"Probability of '{label}' outside [0, 1]", {"label": label, "value": p})
            cleaned[str(label)] = min(max(p, 0.0), 1.0)
        if not cleaned:
            raise InvalidArgumentError("Distribution needs at least one outcome")
        total = sum(cleaned.values())
        if abs(total - 1.0) > ATOL:
            raise NumericalError("Probabilities do not sum to one", {"total": total})
        object.__setattr__(self, "probabilities", cleaned)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self.probabilities)

    def __getitem__(self, label: str) -> float:
        return self.probabilities[label]

    def as_array(self, labels: Optional[Sequence[str]] = None) -> np.ndarray:
        order = self.labels if labels is None else labels
        return np.array([self.probabilities[label] for label in order])


def as_density(state: Union[StateVector, DensityMatrix]) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, StateVector):
        return state.density()
    raise InvalidArgumentError(f"Expected a StateVector or DensityMatrix, got {type(state).__name__}")


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    eigenvalues, eigenvectors = scipy.linalg.eigh(matrix)
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (eigenvectors * roots) @ eigenvectors.conj().T


def rotation(alpha: float) -> np.ndarray:
    """Real rotation by ``alpha * pi / 2``."""
    try:
        value = float(alpha)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"Rotation parameter must be a real number, got {alpha!r}") from None
    if not math.isfinite(value):
        raise InvalidArgumentError(f"Rotation parameter must be finite, got {alpha!r}")
    angle = value * math.pi / 2
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s], [-s, c]], dtype=complex)


def tensor(a, b, *, max_dimension: int = MAX_DIMENSION):
    """Kronecker product with ``a`` occupying the more significant registers."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        if a.dim * b.dim > max_dimension:
            raise CapacityError(f"Product dimension {a.dim * b.dim} exceeds cap {max_dimension}")
        return StateVector(np.kron(a.amplitudes, b.amplitudes), b.register_layout + a.register_layout)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        if a.dim * b.dim > max_dimension:
            raise CapacityError(f"Product dimension {a.dim * b.dim} exceeds cap {max_dimension}")
        return DensityMatrix(np.kron(a.matrix, b.matrix), b.register_layout + a.register_layout)
    if isinstance(a, (StateVector, DensityMatrix)) or isinstance(b, (StateVector, DensityMatrix)):
        raise InvalidArgumentError(f"Cannot tensor {type(a).__name__} with {type(b).__name__}")
    left = as_complex_matrix(a, max_dimension=max_dimension)
    right = as_complex_matrix(b, max_dimension=max_dimension)
    rows, cols = left.shape[0] * right.shape[0], left.shape[1] * right.shape[1]
    if max(rows, cols) > max_dimension:
        raise CapacityError(f"Product shape ({rows}, {cols}) exceeds cap {max_dimension}")
    return np.kron(left, right)


def apply_operator(operator: np.ndarray, array: np.ndarray, layout: Layout, targets: Sequence[int]) -> np.ndarray:
    """Multiply `array` (shape (D,) or (D, m)) by `operator` acting on `targets`.

    The operator is given in the Kronecker order of its targets, i.e. the
    last listed target is its most significant factor.
    """
    layout = tuple(layout)
    picked = _check_targets(layout, targets)
    local = [layout[t] for t in picked]
    op = np.asarray(operator, dtype=complex)
    local_dim = math.prod(local)
    if op.shape != (local_dim, local_dim):
        raise InvalidArgumentError(f"Operator shape {op.shape} does not act on registers {picked} of {layout}")
    n, k = len(layout), len(picked)
    tensor_form = array.reshape(tuple(reversed(layout)) + array.shape[1:])
    op_form = op.reshape(tuple(reversed(local)) * 2)
    state_axes = [n - 1 - picked[k - 1 - j] for j in range(k)]
    result = np.tensordot(op_form, tensor_form, axes=(list(range(k, 2 * k)), state_axes))
    result = np.moveaxis(result, list(range(k)), state_axes)
    return result.reshape(array.shape)


def lift_operator(operator: np.ndarray, layout: Layout, targets: Sequence[int]) -> np.ndarray:
    """Full-space matrix of `operator` acting on `targets`, identity elsewhere."""
    dim = math.prod(layout)
    return apply_operator(operator, np.eye(dim, dtype=complex), layout, targets)


def conjugate(operator: np.ndarray, matrix: np.ndarray, layout: Layout, targets: Sequence[int]) -> np.ndarray:
    """Return ``K rho K^dagger`` with ``K`` acting on `targets`."""
    left = apply_operator(operator, matrix, layout, targets)
    return apply_operator(operator, left.conj().T, layout, targets).conj().T


def partial_trace(rho: Union[DensityMatrix, StateVector], keep: Iterable[int]) -> DensityMatrix:
    """Trace out every register not in `keep`; kept registers retain their order."""
    rho = as_density(rho)
    kept = sorted({int(k) for k in keep})
    if not kept:
        raise InvalidArgumentError("Keep set must not be empty")
    layout = rho.register_layout
    bad = [k for k in kept if not 0 <= k < len(layout)]
    if bad:
        raise InvalidArgumentError(f"Registers {bad} outside layout {layout}")
    work = rho.matrix.reshape(tuple(reversed(layout)) * 2)
    current = list(range(len(layout)))
    for register in sorted(set(current) - set(kept), reverse=True):
        position = current.index(register)
        m = len(current)
        axis = m - 1 - position
        work = np.trace(work, axis1=axis, axis2=axis + m)
        current.pop(position)
    kept_layout = tuple(layout[k] for k in kept)
    dim = math.prod(kept_layout)
    return DensityMatrix(work.reshape(dim, dim), kept_layout)


def trace_norm(matrix) -> float:
    """Sum of singular values."""
    a = as_complex_matrix(matrix, square=True)
    if np.allclose(a, a.conj().T, atol=ATOL):
        eigenvalues = scipy.linalg.eigh((a + a.conj().T) / 2, eigvals_only=True)
        return float(np.sum(np.abs(eigenvalues)))
    return float(np.sum(scipy.linalg.svdvals(a)))


def pure_trace_distance(phi: StateVector, psi: StateVector) -> float:
    """Closed form ``2 sqrt(1 - |<phi|psi>|^2)`` of the trace norm between two pure states."""
    overlap = abs(phi.overlap(psi)) ** 2
    return 2.0 * math.sqrt(max(0.0, 1.0 - overlap))


def l1_distance(p: ProbDist, q: ProbDist) -> float:
    """Half the absolute difference summed over outcomes."""
    if set(p.labels) != set(q.labels):
        raise InvalidArgumentError(f"Outcome labels differ: {p.labels} vs {q.labels}")
    value = 0.5 * sum(abs(p[label] - q[label]) for label in p.labels)
    return min(max(value, 0.0), 1.0)


def _as_probdist(labels: Sequence[str], values: Sequence[float]) -> ProbDist:
    return ProbDist(dict(zip(labels, (float(v) for v in values))))


def outcome_distribution(
    state: Union[DensityMatrix, StateVector],
    measurement: Measurement,
    registers: Optional[Sequence[int]] = None,
) -> ProbDist:
    """Outcome probabilities ``tr(E_k rho)``; with `registers`, elements are lifted by identity."""
    rho = as_density(state)
    if registers is None:
        if measurement.dim != rho.dim:
            raise InvalidArgumentError(f"Measurement dimension {measurement.dim} does not match state dimension {rho.dim}")
        values = [np.trace(element @ rho.matrix).real for element in measurement.elements]
    else:
        values = [
            np.trace(apply_operator(element, rho.matrix, rho.register_layout, registers)).real
            for element in measurement.elements
        ]
    return _as_probdist(measurement.labels, values)


def positive_projector(hermitian: np.ndarray, threshold: float = HELSTROM_THRESHOLD) -> np.ndarray:
    """Projector onto the eigenvectors of `hermitian` with eigenvalue above `threshold`."""
    h = as_complex_matrix(hermitian, square=True)
    eigenvalues, eigenvectors = scipy.linalg.eigh((h + h.conj().T) / 2)
    positive = eigenvectors[:, eigenvalues > threshold]
    projector = positive @ positive.conj().T
    return (projector + projector.conj().T) / 2


def helstrom_measurement(
    rho0: Union[DensityMatrix, StateVector],
    rho1: Union[DensityMatrix, StateVector],
    labels: Tuple[str, str] = ("0", "1"),
) -> Measurement:
    """Optimal two-outcome measurement for telling `rho0` from `rho1`.

    Outcome ``labels[0]`` projects onto the positive eigenspace of
    ``rho0 - rho1``; zero eigenvectors go to ``labels[1]``.
    """
    a, b = as_density(rho0), as_density(rho1)
    if a.dim != b.dim:
        raise InvalidArgumentError(f"Dimension mismatch: {a.dim} vs {b.dim}")
    p0 = positive_projector(a.matrix - b.matrix)
    return Measurement(labels, (p0, np.eye(a.dim) - p0), "projective")


def distinguishing_advantage(
    rho0: Union[DensityMatrix, StateVector], rho1: Union[DensityMatrix, StateVector], measurement: Measurement
) -> float:
    """L1 distance of the outcome distributions `measurement` produces on the two states."""
    return l1_distance(outcome_distribution(rho0, measurement), outcome_distribution(rho1, measurement))


def branch_states(
    amplitudes: np.ndarray, layout: Layout, measurement: Measurement, registers: Sequence[int]
) -> List[Tuple[float, np.ndarray]]:
    """Unnormalised post-measurement vectors with their probabilities, one per outcome."""
    branches = []
    for kraus in measurement.kraus:
        branch = apply_operator(kraus, amplitudes, layout, registers)
        branches.append((float(np.vdot(branch, branch).real), branch))
    return branches


def measure(
    state: Union[StateVector, DensityMatrix],
    measurement: Measurement,
    registers: Optional[Sequence[int]] = None,
    rng: RngLike = None,
) -> Tuple[str, Union[StateVector, DensityMatrix]]:
    """Sample an outcome and return it with the renormalised post-measurement state."""
    generator = as_generator(rng)
    layout = state.register_layout
    targets = list(range(len(layout))) if registers is None else list(registers)
    if registers is None and measurement.dim != state.dim:
        raise InvalidArgumentError(f"Measurement dimension {measurement.dim} does not match state dimension {state.dim}")
    if isinstance(state, StateVector):
        branches = branch_states(state.amplitudes, layout, measurement, targets)
    else:
        branches = []
        for kraus in measurement.kraus:
            post = conjugate(kraus, state.matrix, layout, targets)
            branches.append((float(np.trace(post).real), post))
    probabilities = np.clip([p for p, _ in branches], 0.0, None)
    cumulative = np.cumsum(probabilities)
    draw = generator.random() * cumulative[-1]
    index = min(int(np.searchsorted(cumulative, draw, side="right")), len(branches) - 1)
    probability, post = branches[index]
    if probability <= ZERO_PROBABILITY:
        raise NumericalError(
            "Sampled a zero-probability measurement branch",
            {"label": measurement.labels[index], "probabilities": probabilities.tolist(), "draw": float(draw)},
        )
    label = measurement.labels[index]
    if isinstance(state, StateVector):
        return label, StateVector(post / math.sqrt(probability), layout)
    return label, DensityMatrix(post / probability, layout)


def preparation_unitary(state: Union[StateVector, np.ndarray]) -> np.ndarray:
    """Unitary whose first column is `state`, so it maps the all-zero basis state onto it."""
    psi = state.amplitudes if isinstance(state, StateVector) else np.asarray(state, dtype=complex).reshape(-1)
    dim = psi.size
    q, r = np.linalg.qr(np.column_stack([psi, np.eye(dim, dtype=complex)]))
    unitary = q.copy()
    unitary[:, 0] = unitary[:, 0] * r[0, 0]
    return unitary


def random_unitary(dim: int, rng: RngLike = None) -> np.ndarray:
    """Haar-random unitary."""
    if dim < 1:
        raise InvalidArgumentError(f"Dimension must be positive, got {dim}")
    generator = as_generator(rng)
    if dim == 1:
        return np.array([[np.exp(2j * math.pi * generator.random())]], dtype=complex)
    return np.asarray(unitary_group.rvs(dim, random_state=generator), dtype=complex)


def random_state_vector(register_layout: Iterable[int], rng: RngLike = None) -> StateVector:
    layout = tuple(register_layout)
    generator = as_generator(rng)
    dim = math.prod(layout)
    raw = generator.normal(size=dim) + 1j * generator.normal(size=dim)
    return StateVector.normalised(raw, layout)


def random_density_matrix(dim: int, rng: RngLike = None, rank: Optional[int] = None) -> DensityMatrix:
    """Random mixed state from a Ginibre matrix of the given rank."""
    generator = as_generator(rng)
    columns = dim if rank is None else rank
    ginibre = generator.normal(size=(dim, columns)) + 1j * generator.normal(size=(dim, columns))
    rho = ginibre @ ginibre.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_povm(dim: int, outcomes: int, rng: RngLike = None) -> Measurement:
    """Random full-rank POVM normalised by the inverse square root of its sum."""
    generator = as_generator(rng)
    raw = []
    for _ in range(outcomes):
        a = generator.normal(size=(dim, dim)) + 1j * generator.normal(size=(dim, dim))
        raw.append(a @ a.conj().T)
    eigenvalues, eigenvectors = scipy.linalg.eigh(sum(raw))
    inverse_root = (eigenvectors / np.sqrt(eigenvalues)) @ eigenvectors.conj().T
    elements = []
    for g in raw:
        element = inverse_root @ g @ inverse_root
        elements.append((element + element.conj().T) / 2)
    return Measurement(tuple(str(k) for k in range(outcomes)), tuple(elements), "povm")


def random_projective_measurement(dim: int, outcomes: int, rng: RngLike = None) -> Measurement:
    """Split the columns of a Haar unitary into `outcomes` groups and project onto each span."""
    basis = random_unitary(dim, rng)
    elements = []
    for group in np.array_split(np.arange(dim), outcomes):
        columns = basis[:, group]
        elements.append(columns @ columns.conj().T)
    return Measurement(tuple(str(k) for k in range(outcomes)), tuple(elements), "projective")
