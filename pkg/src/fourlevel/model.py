"""Rotating-frame model of the degenerate four-level atom.

Level scheme: a twice degenerate ground level spanned by |1>, |1'>, two more
metastable levels |2> and |3>, and one lifetime-broadened excited level |4>.
A coupling laser drives |2> <-> |4| on resonance, an rf field drives
|1>,|1'> <-> |3> on resonance, and a probe laser drives |1>,|1'> <-> |4>
with detuning ``delta``. All frequencies are quoted in units of the excited
state decay rate, so the numbers here are dimensionless.

Matrices are plain complex ndarrays over the fixed basis order

    index 0 = |1>, 1 = |1'>, 2 = |2>, 3 = |3>, 4 = |4>

which every other module relies on (the vectorized superoperators in
particular).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

DIM = 5

# basis indices, kept next to the docstring above
IDX_1, IDX_1P, IDX_2, IDX_3, IDX_4 = range(DIM)

#: eigen-residual threshold for the detuning-persistence test in
#: :func:`find_dark_states`; exact geometry-protected dark states sit at
#: machine precision, detuning-dependent ones at O(0.1) for the 0.1 step.
_PERSIST_RESIDUAL_TOL = 1e-8

_DETUNING_PROBE_STEP = 0.1

DARK_KINDS = ("raman", "non_raman", "bright")


def _require_finite(name: str, value: complex) -> None:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class DriveConfig:
    """Field amplitudes and probe detuning, all in units of the decay rate.

    ``omega_c`` is real and non-negative (the coupling term carries a single
    real amplitude). The rf and probe amplitudes come in pairs because the
    lower level is twice degenerate; they may be complex to encode field
    polarization phases.
    """

    delta: float = 0.0
    omega_c: float = 0.0
    omega_r: complex = 0.0
    omega_r_prime: complex = 0.0
    omega_p: complex = 0.0
    omega_p_prime: complex = 0.0

    def __post_init__(self):
        if isinstance(self.omega_c, complex):
            raise ValueError("omega_c must be real")
        if not math.isfinite(self.delta):
            raise ValueError(f"delta must be finite, got {self.delta!r}")
        if not math.isfinite(self.omega_c):
            raise ValueError(f"omega_c must be finite, got {self.omega_c!r}")
        if self.omega_c < 0:
            raise ValueError(f"omega_c must be non-negative, got {self.omega_c!r}")
        for name in ("omega_r", "omega_r_prime", "omega_p", "omega_p_prime"):
            _require_finite(name, complex(getattr(self, name)))

    def without_probe(self) -> "DriveConfig":
        return replace(self, omega_p=0.0, omega_p_prime=0.0)


def build_hamiltonian(cfg: DriveConfig) -> np.ndarray:
    """Full rotating-frame Hamiltonian as a 5x5 complex matrix.

    Diagonal: the probe detuning on |2> and |4>. Off-diagonal: -1/2 times
    each Rabi amplitude on its transition, plus Hermitian conjugates.
    Hermitian by construction.
    """
    h = np.zeros((DIM, DIM), dtype=complex)
    h[IDX_2, IDX_2] = cfg.delta
    h[IDX_4, IDX_4] = cfg.delta

    h[IDX_3, IDX_1] = -0.5 * cfg.omega_r
    h[IDX_3, IDX_1P] = -0.5 * cfg.omega_r_prime
    h[IDX_4, IDX_2] = -0.5 * cfg.omega_c
    h[IDX_4, IDX_1] = -0.5 * cfg.omega_p
    h[IDX_4, IDX_1P] = -0.5 * cfg.omega_p_prime

    lower = np.tril(h, k=-1)
    h += lower.conj().T
    return h


def build_h0(cfg: DriveConfig) -> np.ndarray:
    """Hamiltonian of atom + coupling field + rf field (probe dropped)."""
    return build_hamiltonian(cfg.without_probe())


def light_shift(cfg: DriveConfig) -> float:
    """rf-induced splitting of the degenerate level's dressed triplet."""
    return 0.5 * math.sqrt(abs(cfg.omega_r) ** 2 + abs(cfg.omega_r_prime) ** 2)


@dataclass(frozen=True)
class DressedBasis:
    """Eigenbasis of the atom + rf field block with probe couplings.

    ``minus``, ``zero`` and ``plus`` are orthonormal 3-vectors over
    (|1>, |1'>, |3>) with rf-block energies -sigma, 0 and +sigma. The sign
    convention (|-> below |+>) is a choice; see README. ``omega0`` couples
    the excited state to ``zero``, ``omega`` to the symmetric combination of
    ``plus`` and ``minus``; together they carry exactly the probe power:
    |omega0|^2 + |omega|^2 equals |omega_p|^2 + |omega_p_prime|^2.
    """

    sigma: float
    minus: np.ndarray
    zero: np.ndarray
    plus: np.ndarray
    omega0: complex
    omega: complex


def dressed_basis(cfg: DriveConfig) -> DressedBasis:
    """Diagonalize the rf block and project the probe onto it.

    Raises ``ValueError`` when the rf field is off (the triplet collapses
    and the basis is undefined).
    """
    sigma = light_shift(cfg)
    if sigma == 0.0:
        raise ValueError("dressed basis undefined without rf field")

    o_r = complex(cfg.omega_r)
    o_rp = complex(cfg.omega_r_prime)
    s8 = 2.0 * math.sqrt(2.0) * sigma
    minus = np.array([o_r.conjugate() / s8, o_rp.conjugate() / s8, 1.0 / math.sqrt(2.0)])
    zero = np.array([o_rp / (2.0 * sigma), -o_r / (2.0 * sigma), 0.0])
    plus = np.array([o_r.conjugate() / s8, o_rp.conjugate() / s8, -1.0 / math.sqrt(2.0)])

    # 2*sigma in the denominators keeps the probe -> dressed map unitary
    omega0 = (cfg.omega_p * o_rp - cfg.omega_p_prime * o_r) / (2.0 * sigma)
    omega = (cfg.omega_p * o_r.conjugate() + cfg.omega_p_prime * o_rp.conjugate()) / (2.0 * sigma)
    return DressedBasis(sigma=sigma, minus=minus, zero=zero, plus=plus,
                        omega0=omega0, omega=omega)


@dataclass(frozen=True)
class DarkStateRecord:
    eigenvalue: float
    eigenvector: np.ndarray
    excited_overlap: float
    kind: str


@dataclass(frozen=True)
class DarkStateReport:
    records: tuple[DarkStateRecord, ...]
    warning: str | None = None

    def dark_records(self) -> tuple[DarkStateRecord, ...]:
        return tuple(rec for rec in self.records if rec.kind != "bright")


def _concentrate_excited_amplitude(vecs: np.ndarray) -> np.ndarray:
    """Rotate a degenerate eigenvector block so at most one column couples
    to the excited state.

    ``vecs`` holds the orthonormal columns of one degenerate eigenspace. Any
    unitary recombination of them is still an eigenbasis, and a dark
    direction may hide inside the span; the rotation makes it explicit.
    Dark columns come first, the single bright column (if any) last.
    """
    c = vecs[IDX_4, :]
    norm_c = np.linalg.norm(c)
    if norm_c < 1e-15:
        return vecs
    m = vecs.shape[1]
    # orthonormal coefficient basis with conj(c) first: combinations built on
    # the remaining basis vectors have exactly zero excited amplitude
    seed = np.concatenate([(c.conj() / norm_c)[:, None], np.eye(m, dtype=complex)], axis=1)
    q, _ = np.linalg.qr(seed)
    rotated = vecs @ q
    # dark columns first, the single bright column last
    return np.concatenate([rotated[:, 1:], rotated[:, :1]], axis=1)


def _is_persistent_eigenvector(cfg: DriveConfig, vec: np.ndarray) -> bool:
    """Whether ``vec`` stays an eigenvector when the detuning is nudged."""
    for step in (+_DETUNING_PROBE_STEP, -_DETUNING_PROBE_STEP):
        h = build_hamiltonian(replace(cfg, delta=cfg.delta + step))
        hv = h @ vec
        energy = np.vdot(vec, hv)
        if np.linalg.norm(hv - energy * vec) > _PERSIST_RESIDUAL_TOL:
            return False
    return True


def find_dark_states(cfg: DriveConfig, dark_tolerance: float = 1e-10) -> DarkStateReport:
    """Diagonalize the full Hamiltonian and classify its dark states.

    A state is dark when its excited-state overlap |<4|v>| falls below
    ``dark_tolerance``. Dark states that survive nudging the probe detuning
    by +-0.1 are geometry-protected ("non_raman"); the rest exist only at
    the two-photon resonance that the current detuning satisfies ("raman").
    Degenerate eigenspaces are rotated first so a dark combination hiding
    inside a degenerate pair is not missed.
    """
    if dark_tolerance <= 0:
        raise ValueError("dark_tolerance must be positive")
    h = build_hamiltonian(cfg)
    evals, evecs = np.linalg.eigh(h)

    scale = max(1.0, float(np.max(np.abs(evals))))
    gap_tol = 1e-9 * scale
    start = 0
    while start < DIM:
        stop = start + 1
        while stop < DIM and evals[stop] - evals[stop - 1] < gap_tol:
            stop += 1
        if stop - start > 1:
            evecs[:, start:stop] = _concentrate_excited_amplitude(evecs[:, start:stop])
        start = stop

    records = []
    for k in range(DIM):
        vec = evecs[:, k].copy()
        overlap = float(abs(vec[IDX_4]))
        if overlap >= dark_tolerance:
            kind = "bright"
        elif _is_persistent_eigenvector(cfg, vec):
            kind = "non_raman"
        else:
            kind = "raman"
        records.append(DarkStateRecord(eigenvalue=float(evals[k]), eigenvector=vec,
                                       excited_overlap=overlap, kind=kind))

    warning = None
    if cfg.omega_p == 0 and cfg.omega_p_prime == 0:
        warning = ("probe fields are zero: every state outside the coupling "
                   "transition is trivially dark")
    return DarkStateReport(records=tuple(records), warning=warning)
