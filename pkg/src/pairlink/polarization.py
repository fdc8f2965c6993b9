"""Two-qubit polarization state algebra.

Density matrices live in the |HH>, |HV>, |VH>, |VV> product basis (row-major
tensor order, first factor = signal arm). Single-qubit conventions:

    H = (1, 0)        V = (0, 1)
    D = (H + V)/sqrt2     A = (H - V)/sqrt2
    R = (H - iV)/sqrt2    L = (H + iV)/sqrt2

The circular-basis sign is a convention choice; everything downstream is
internally consistent with it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LABELS = ("H", "V", "D", "A", "R", "L")

_KETS = {
    "H": np.array([1.0, 0.0], dtype=complex),
    "V": np.array([0.0, 1.0], dtype=complex),
    "D": np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
    "A": np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
    "R": np.array([1.0, -1.0j], dtype=complex) / np.sqrt(2.0),
    "L": np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0),
}

# Construction tolerances for physical states.
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_TOL = 1e-9


@dataclass(frozen=True)
class AnalyzerSetting:
    """One polarization analyzer: a labeled basis state or a continuous angle.

    ``label`` picks one of H/V/D/A/R/L. Alternatively ``angle`` (radians)
    describes a linear analyzer transmitting cos(t)|H> + sin(t)|V>; with
    ``quarter_wave`` set the transmitted state is cos(t)|H> - i sin(t)|V>,
    so t = pi/4 gives R and t = 3pi/4 gives L.
    """

    label: str | None = None
    angle: float | None = None
    quarter_wave: bool = False

    def __post_init__(self):
        if (self.label is None) == (self.angle is None):
            raise ValueError("give exactly one of label or angle")
        if self.label is not None and self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}, got {self.label!r}")

    @classmethod
    def from_label(cls, label: str) -> "AnalyzerSetting":
        return cls(label=label.upper())

    @classmethod
    def linear(cls, angle: float) -> "AnalyzerSetting":
        return cls(angle=float(angle))

    def ket(self) -> np.ndarray:
        if self.label is not None:
            return _KETS[self.label].copy()
        t = self.angle
        if self.quarter_wave:
            return np.array([np.cos(t), -1.0j * np.sin(t)], dtype=complex)
        return np.array([np.cos(t), np.sin(t)], dtype=complex)


def _as_setting(s) -> AnalyzerSetting:
    if isinstance(s, AnalyzerSetting):
        return s
    if isinstance(s, str):
        return AnalyzerSetting.from_label(s)
    raise TypeError(f"cannot interpret {s!r} as an analyzer setting")


def single_qubit_projector(setting) -> np.ndarray:
    """Rank-1 projector |s><s| for an analyzer setting (2x2 complex)."""
    v = _as_setting(setting).ket()
    return np.outer(v, v.conj())


def orthogonal_projector(setting) -> np.ndarray:
    """Projector onto the state rejected by the analyzer (I - |s><s|)."""
    return np.eye(2, dtype=complex) - single_qubit_projector(setting)


class TwoQubitState:
    """A physical 4x4 polarization density matrix.

    Construction validates Hermiticity and unit trace, clips eigenvalues in
    [-EIGENVALUE_TOL, 0) to zero with renormalization, and rejects anything
    less physical than that. Raw linear-inversion matrices (which may carry
    genuinely negative eigenvalues) stay plain ndarrays; see the tomography
    module.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix: np.ndarray):
        m = np.array(matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian within tolerance")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace must be 1, got {tr}")
        m = 0.5 * (m + m.conj().T)
        w, v = np.linalg.eigh(m)
        if w.min() < -EIGENVALUE_TOL:
            raise ValueError(
                f"matrix has eigenvalue {w.min():.3e}; not a physical state"
            )
        if w.min() < 0.0:
            w = np.clip(w, 0.0, None)
            m = (v * w) @ v.conj().T
            m /= np.trace(m).real
        m.setflags(write=False)
        self.matrix = m

    @classmethod
    def from_vector(cls, psi) -> "TwoQubitState":
        """Pure state |psi><psi| from a length-4 ket (normalized here)."""
        v = np.asarray(psi, dtype=complex).reshape(4)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("zero vector")
        v = v / n
        return cls(np.outer(v, v.conj()))

    def __repr__(self):
        return f"TwoQubitState(purity={purity(self):.6f})"


def _as_state(rho) -> TwoQubitState:
    if isinstance(rho, TwoQubitState):
        return rho
    return TwoQubitState(rho)


def bell_phi_plus() -> TwoQubitState:
    """The Bell state (|HH> + |VV>)/sqrt2 as a density matrix."""
    return TwoQubitState.from_vector([1.0, 0.0, 0.0, 1.0])


def bell_phi_minus() -> TwoQubitState:
    """The Bell state (|HH> - |VV>)/sqrt2."""
    return TwoQubitState.from_vector([1.0, 0.0, 0.0, -1.0])


def maximally_mixed() -> TwoQubitState:
    return TwoQubitState(np.eye(4, dtype=complex) / 4.0)


def werner(p: float) -> TwoQubitState:
    """Werner state p |phi+><phi+| + (1-p) I/4, the standard noisy benchmark."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    return TwoQubitState(p * bell_phi_plus().matrix + (1.0 - p) * np.eye(4) / 4.0)


def joint_projector(a, b) -> np.ndarray:
    """Two-arm projector Pi_a (x) Pi_b (4x4)."""
    return np.kron(single_qubit_projector(a), single_qubit_projector(b))


def coincidence_probability(rho, a, b) -> float:
    """Tr[rho (Pi_a (x) Pi_b)]: probability both analyzers transmit."""
    state = _as_state(rho)
    p = np.trace(state.matrix @ joint_projector(a, b)).real
    # guard against -1e-17 style round-off
    return float(min(max(p, 0.0), 1.0))


@dataclass(frozen=True)
class FringeScan:
    """A coincidence fringe: one analyzer fixed, the other swept in angle."""

    fixed_arm: AnalyzerSetting
    swept_angles: np.ndarray  # analyzer angles, rad
    probabilities: np.ndarray

    def __post_init__(self):
        if len(self.swept_angles) != len(self.probabilities):
            raise ValueError("angles and probabilities must have equal length")
        p = np.asarray(self.probabilities)
        if np.any(p < 0) or np.any(p > 1):
            raise ValueError("probabilities must lie in [0, 1]")


def fringe_curve(rho, fixed, n_points: int = 64) -> FringeScan:
    """Sweep a linear analyzer on the second arm over [0, pi).

    The first arm stays at ``fixed``. Angles are the analyzer (projector)
    angles directly; a physical half-wave plate advances at half this rate.
    """
    if n_points < 4:
        raise ValueError("need at least 4 sweep points")
    state = _as_state(rho)
    fixed = _as_setting(fixed)
    angles = np.arange(n_points) * np.pi / n_points
    probs = np.array(
        [
            coincidence_probability(state, fixed, AnalyzerSetting.linear(t))
            for t in angles
        ]
    )
    return FringeScan(fixed_arm=fixed, swept_angles=angles, probabilities=probs)


def visibility(max_val: float, min_val: float) -> float:
    """Fringe contrast (max - min) / (max + min)."""
    if not (max_val >= min_val >= 0.0) or max_val <= 0.0:
        raise ValueError(
            f"need max >= min >= 0 and max > 0, got max={max_val}, min={min_val}"
        )
    return (max_val - min_val) / (max_val + min_val)


def purity(rho) -> float:
    """Tr(rho^2); 1 for pure states, 1/4 for the maximally mixed state."""
    m = _as_state(rho).matrix
    return float(np.trace(m @ m).real)


def fidelity_to_pure(rho, target) -> float:
    """<psi| rho |psi> for a pure target state.

    ``target`` must have purity 1 within 1e-9; for mixed-vs-mixed
    comparisons use uhlmann_fidelity.
    """
    state = _as_state(rho)
    tgt = _as_state(target)
    if abs(purity(tgt) - 1.0) > 1e-9:
        raise ValueError("target state is not pure")
    f = np.trace(state.matrix @ tgt.matrix).real
    return float(min(max(f, 0.0), 1.0))


def uhlmann_fidelity(rho, sigma) -> float:
    """General fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Reduces to fidelity_to_pure when either argument is pure; needed when
    comparing two mixed states (e.g. reconstruction vs a Werner target).
    """
    a = _as_state(rho).matrix
    b = _as_state(sigma).matrix
    wa, va = np.linalg.eigh(a)
    root = (va * np.sqrt(np.clip(wa, 0.0, None))) @ va.conj().T
    w = np.linalg.eigvalsh(root @ b @ root)
    f = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)
