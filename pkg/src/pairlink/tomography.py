"""Two-qubit polarization tomography: simulated counts and reconstruction.

Measurement model: each of the 16 settings projects both arms onto one
analyzer state; counts are Poissonian with mean = flux * Tr[rho Pi]. The
per-setting flux is a single common unknown, so reconstruction profiles it
out of the likelihood rather than requiring a calibrated rate.

Reconstruction paths:
  * linear_inversion: least squares on a 16-dim Hermitian operator basis,
    trace-normalized. Fast, unbiased, but may leave negative eigenvalues.
  * mle_reconstruct: Cholesky-parametrized maximum likelihood (rho =
    T^dag T / Tr[T^dag T], T lower triangular, 16 real parameters), physical
    by construction, optimized with L-BFGS-B and an analytic gradient.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .polarization import (
    LABELS,
    AnalyzerSetting,
    TwoQubitState,
    joint_projector,
)

# Canonical 16-setting set (informationally complete); first four span H/V.
_SETTING_LABELS = (
    ("H", "H"), ("H", "V"), ("V", "V"), ("V", "H"),
    ("H", "D"), ("H", "L"), ("V", "D"), ("V", "L"),
    ("D", "H"), ("D", "V"), ("D", "D"), ("D", "L"),
    ("L", "H"), ("L", "V"), ("L", "D"), ("L", "L"),
)


@dataclass(frozen=True)
class TomographySetting:
    """Analyzer pair for one tomography acquisition."""

    arm_a: AnalyzerSetting
    arm_b: AnalyzerSetting

    def __post_init__(self):
        for arm in (self.arm_a, self.arm_b):
            if arm.label is None or arm.label not in LABELS:
                raise ValueError("tomography settings must use labeled analyzers")

    @classmethod
    def from_labels(cls, a: str, b: str) -> "TomographySetting":
        return cls(AnalyzerSetting.from_label(a), AnalyzerSetting.from_label(b))

    def projector(self) -> np.ndarray:
        return joint_projector(self.arm_a, self.arm_b)


@dataclass(frozen=True)
class CountRecord:
    """Coincidence counts for one setting.

    ``counts`` is integer for sampled data but may be real-valued in the
    exact-statistics mode (Poisson means passed through unsampled).
    """

    setting: TomographySetting
    counts: float
    integration: float = 1.0  # s

    def __post_init__(self):
        if self.counts < 0:
            raise ValueError("counts must be non-negative")
        if self.integration <= 0:
            raise ValueError("integration time must be positive")


@dataclass(frozen=True)
class ReconstructionResult:
    state: TwoQubitState
    log_likelihood: float
    iterations: int
    converged: bool


def standard_16_settings() -> list:
    """The canonical 16-setting tomography set (HH, HV, VV, VH, HD, ...)."""
    return [TomographySetting.from_labels(a, b) for a, b in _SETTING_LABELS]


def simulate_counts(
    rho,
    settings=None,
    mean_total: float = 1e6,
    seed=None,
    exact: bool = False,
) -> list:
    """Draw Poisson counts with mean = mean_total * Tr[rho Pi] per setting.

    ``exact=True`` skips sampling and records the means themselves
    (infinite-statistics limit). Otherwise ``seed`` fixes the stream.
    """
    if mean_total <= 0:
        raise ValueError("mean_total must be positive")
    state = rho if isinstance(rho, TwoQubitState) else TwoQubitState(rho)
    if settings is None:
        settings = standard_16_settings()
    means = np.array(
        [np.trace(state.matrix @ s.projector()).real for s in settings]
    )
    means = np.clip(means, 0.0, None) * mean_total
    if exact:
        sampled = means
    else:
        rng = np.random.default_rng(seed)
        sampled = rng.poisson(means).astype(float)
    return [
        CountRecord(setting=s, counts=float(n), integration=1.0)
        for s, n in zip(settings, sampled)
    ]


# 16 Hermitian basis operators for the 4x4 state space: diagonal units,
# symmetric and antisymmetric off-diagonal combinations.
def _hermitian_basis() -> list:
    basis = []
    for j in range(4):
        e = np.zeros((4, 4), dtype=complex)
        e[j, j] = 1.0
        basis.append(e)
    for j in range(4):
        for k in range(j + 1, 4):
            e = np.zeros((4, 4), dtype=complex)
            e[j, k] = 1.0
            e[k, j] = 1.0
            basis.append(e)
            e = np.zeros((4, 4), dtype=complex)
            e[j, k] = 1.0j
            e[k, j] = -1.0j
            basis.append(e)
    return basis


_BASIS = _hermitian_basis()


def _design_matrix(settings) -> np.ndarray:
    a = np.empty((len(settings), 16))
    for i, s in enumerate(settings):
        pi = s.projector()
        for m, b in enumerate(_BASIS):
            a[i, m] = np.trace(b @ pi).real
    return a


def settings_gram_rank(settings) -> int:
    """Numeric rank of the measurement-operator Gram matrix (16 = complete)."""
    a = _design_matrix(settings)
    return int(np.linalg.matrix_rank(a))


def linear_inversion(records) -> np.ndarray:
    """Least-squares Hermitian estimate from count records, trace 1.

    Returns a plain ndarray: the result is unconstrained and may have
    negative eigenvalues under finite statistics. The overall count scale
    (flux) is absorbed by the final trace normalization.
    """
    if len(records) < 16:
        raise ValueError("need at least 16 records for a complete inversion")
    settings = [r.setting for r in records]
    a = _design_matrix(settings)
    if np.linalg.matrix_rank(a) < 16:
        raise ValueError("setting set is not informationally complete")
    rates = np.array([r.counts / r.integration for r in records])
    x, *_ = np.linalg.lstsq(a, rates, rcond=None)
    sigma = sum(c * b for c, b in zip(x, _BASIS))
    sigma = 0.5 * (sigma + sigma.conj().T)
    tr = np.trace(sigma).real
    if tr <= 0:
        raise ValueError("inversion produced non-positive trace; counts degenerate")
    return sigma / tr


def project_to_physical(matrix: np.ndarray) -> TwoQubitState:
    """Clip negative eigenvalues to zero and renormalize the trace."""
    m = np.asarray(matrix, dtype=complex)
    m = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(m)
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0:
        raise ValueError("matrix has no positive eigenvalues")
    m = (v * w) @ v.conj().T
    return TwoQubitState(m / np.trace(m).real)


_LOG_FLOOR = 1e-300  # keeps log() finite when a projector probability hits 0


def log_likelihood(rho, records) -> float:
    """Profiled Poisson log-likelihood of ``rho`` given the records.

    The common flux is replaced by its maximizer, so the value depends only
    on the state: L = sum n_i ln p_i - n_tot ln(sum T_i p_i) + const, with
    the constant chosen to make it the actual Poisson log-likelihood at the
    profiled flux (factorial terms dropped).
    """
    state = rho if isinstance(rho, TwoQubitState) else TwoQubitState(rho)
    counts = np.array([r.counts for r in records])
    times = np.array([r.integration for r in records])
    probs = np.array(
        [np.trace(state.matrix @ r.setting.projector()).real for r in records]
    )
    probs = np.clip(probs, _LOG_FLOOR, None)
    n_tot = counts.sum()
    if n_tot == 0:
        return 0.0
    exposure = float(times @ probs)
    ll = counts @ np.log(probs) - n_tot * np.log(exposure)
    return float(ll + n_tot * np.log(n_tot) - n_tot)


# --- Cholesky-parametrized MLE ------------------------------------------------

# Lower-triangular index layout: 4 real diagonal entries first, then the
# 6 sub-diagonal complex entries as (re, im) pairs -> 16 real parameters.
_TRIL_ROWS, _TRIL_COLS = np.tril_indices(4, k=-1)


def _params_to_t(x: np.ndarray) -> np.ndarray:
    t = np.zeros((4, 4), dtype=complex)
    t[np.arange(4), np.arange(4)] = x[:4]
    t[_TRIL_ROWS, _TRIL_COLS] = x[4:10] + 1.0j * x[10:16]
    return t


def _t_to_params(t: np.ndarray) -> np.ndarray:
    x = np.empty(16)
    x[:4] = np.diag(t).real
    off = t[_TRIL_ROWS, _TRIL_COLS]
    x[4:10] = off.real
    x[10:16] = off.imag
    return x


def _lower_cholesky_factor(rho: np.ndarray) -> np.ndarray:
    """Lower-triangular T with T^dag T = rho (reverse-ordered Cholesky)."""
    p = np.eye(4)[::-1]
    l_rev = np.linalg.cholesky(p @ rho @ p)
    t = p @ l_rev.conj().T @ p
    return t


def _floored_projection(matrix: np.ndarray, floor: float = 1e-13) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    m = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(m)
    w = np.clip(w, floor, None)
    m = (v * w) @ v.conj().T
    return m / np.trace(m).real


def mle_reconstruct(
    records,
    tol: float = 1e-10,
    max_iter: int = 2000,
) -> ReconstructionResult:
    """Maximum-likelihood density matrix from tomography counts.

    rho = T^dag T / Tr[T^dag T] with T lower triangular guarantees a
    physical result. The optimizer starts from the physicality-projected
    linear inversion (eigenvalues floored at 1e-13 so the factorization
    exists), so the likelihood can only improve on that point.
    """
    settings = [r.setting for r in records]
    projectors = np.array([s.projector() for s in settings])
    counts = np.array([r.counts for r in records])
    times = np.array([r.integration for r in records])
    n_tot = counts.sum()
    if n_tot <= 0:
        raise ValueError("all counts are zero; nothing to reconstruct")

    # integration-weighted sum of projectors; Tr[S G] is the total exposure
    g = np.tensordot(times, projectors, axes=(0, 0))

    def neg_ll_and_grad(x):
        t = _params_to_t(x)
        s = t.conj().T @ t
        q = np.einsum("ij,kji->k", s, projectors).real
        q = np.clip(q, _LOG_FLOOR, None)
        sg = max(np.trace(s @ g).real, _LOG_FLOOR)
        ll = counts @ np.log(q) - n_tot * np.log(sg)
        # Wirtinger gradient wrt conj(T); objective is -ll
        w = np.tensordot(counts / q, np.matmul(t[None, :, :], projectors), axes=(0, 0))
        w -= (n_tot / sg) * (t @ g)
        grad = np.empty(16)
        grad[:4] = 2.0 * np.diag(w).real
        off = w[_TRIL_ROWS, _TRIL_COLS]
        grad[4:10] = 2.0 * off.real
        grad[10:16] = 2.0 * off.imag
        return -ll, -grad

    rho0 = _floored_projection(linear_inversion(records))
    x0 = _t_to_params(_lower_cholesky_factor(rho0))

    res = minimize(
        neg_ll_and_grad,
        x0,
        jac=True,
        method="L-BFGS-B",
        options={"ftol": tol, "gtol": 1e-8, "maxiter": max_iter},
    )

    t = _params_to_t(res.x)
    s = t.conj().T @ t
    state = TwoQubitState(s / np.trace(s).real)
    grad_norm = float(np.linalg.norm(res.jac))
    converged = bool(res.success) or grad_norm < 1e-8
    ll_records = [CountRecord(st, c, ti) for st, c, ti in zip(settings, counts, times)]
    return ReconstructionResult(
        state=state,
        log_likelihood=log_likelihood(state, ll_records),
        iterations=int(res.nit),
        converged=converged,
    )


# --- count-file IO ------------------------------------------------------------

_COUNT_HEADER = ["setting_a", "setting_b", "counts", "integration_s"]


def write_count_records(path, records) -> None:
    """CSV with columns setting_a,setting_b,counts,integration_s."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_COUNT_HEADER)
        for r in records:
            n = r.counts
            writer.writerow(
                [
                    r.setting.arm_a.label,
                    r.setting.arm_b.label,
                    int(n) if float(n).is_integer() else repr(n),
                    repr(float(r.integration)),
                ]
            )


def read_count_records(path) -> list:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != _COUNT_HEADER:
            raise ValueError(f"expected header {','.join(_COUNT_HEADER)}")
        records = []
        for row in reader:
            if not row:
                continue
            if len(row) != 4:
                raise ValueError(f"malformed count row: {row!r}")
            a, b, counts, integration = row
            records.append(
                CountRecord(
                    setting=TomographySetting.from_labels(a.strip(), b.strip()),
                    counts=float(counts),
                    integration=float(integration),
                )
            )
    if not records:
        raise ValueError("count file contains no records")
    return records
