"""Entanglement observables: reduced densities, Bloch data, entropies,
concurrences, the Cayley hyperdeterminant, and the tangle."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, OutOfRange, ValidationError
from .qstate import PureState3

PAIRS = ("AB", "AC", "BC")

_REDUCE_SPEC = {"A": "ajk,bjk->ab", "B": "jak,jbk->ab", "C": "jka,jkb->ab"}
_PAIR_SPEC = {"AB": "ijc,klc->ijkl", "AC": "ibk,jbl->ikjl", "BC": "aik,ajl->ikjl"}

_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_SY, _SY).real


@dataclass(frozen=True, eq=False)
class Qubit1Density:
    """One-qubit reduced density matrix with its Bloch vector."""

    rho: np.ndarray
    bloch: np.ndarray

    @property
    def r(self) -> float:
        """Bloch norm; 1 iff the marginal is pure."""
        return min(float(np.linalg.norm(self.bloch)), 1.0)


@dataclass(frozen=True)
class BlochTriple:
    """The three Bloch norms (r_A, r_B, r_C), each in [0, 1]."""

    r_a: float
    r_b: float
    r_c: float

    def as_array(self) -> np.ndarray:
        return np.array([self.r_a, self.r_b, self.r_c])


def reduce_one(s: PureState3, qubit: str) -> Qubit1Density:
    """Partial trace down to the named qubit."""
    if qubit not in _REDUCE_SPEC:
        raise ValidationError(f"qubit must be one of A, B, C, got {qubit!r}")
    t = s.tensor
    rho = np.einsum(_REDUCE_SPEC[qubit], t, t.conj())
    bloch = np.array(
        [
            2.0 * rho[0, 1].real,
            -2.0 * rho[0, 1].imag,
            (rho[0, 0] - rho[1, 1]).real,
        ]
    )
    return Qubit1Density(rho=rho, bloch=bloch)


def bloch_triple(s: PureState3) -> BlochTriple:
    return BlochTriple(
        r_a=reduce_one(s, "A").r,
        r_b=reduce_one(s, "B").r,
        r_c=reduce_one(s, "C").r,
    )


def entropy_from_norm(r: float, bits: bool = False) -> float:
    """Von Neumann entropy of a qubit marginal with Bloch norm r.

    S = ((1+r)/2) log(2/(1+r)) + ((1-r)/2) log(2/(1-r)), natural log by
    default; pass bits=True for log base 2. The r = 1 endpoint is exact.
    """
    if r < -1e-12 or r > 1.0 + 1e-12:
        raise OutOfRange(f"Bloch norm {r} outside [0, 1]")
    r = min(max(float(r), 0.0), 1.0)
    p = 0.5 * (1.0 + r)
    q = 0.5 * (1.0 - r)
    s = p * np.log(2.0 / (1.0 + r))
    if q > 0.0:
        s += q * np.log(2.0 / (1.0 - r))
    return float(s / np.log(2.0)) if bits else float(s)


def concurrence_one_vs_rest(s: PureState3, qubit: str) -> float:
    """Concurrence of one qubit against the other two: sqrt(1 - r^2)."""
    r = reduce_one(s, qubit).r
    return float(np.sqrt(max(0.0, 1.0 - r * r)))


def _pair_rho(s: PureState3, pair: str) -> np.ndarray:
    t = s.tensor
    return np.einsum(_PAIR_SPEC[pair], t, t.conj()).reshape(4, 4)


_PAIR_AXES = {"AB": (0, 1, 2), "AC": (0, 2, 1), "BC": (1, 2, 0)}


def concurrence_pair(s: PureState3, pair: str) -> float:
    """Wootters concurrence of a two-qubit marginal.

    The complement of the pair is a single qubit, so the marginal has rank
    at most two. Writing the state as a 4 x 2 matrix F (pair rows,
    complement columns), the two Wootters eigenvalues are the singular
    values of the 2 x 2 matrix F^dagger (Y x Y) F^*, which keeps the
    concurrence accurate even when the smaller eigenvalue vanishes.
    """
    if pair not in PAIRS:
        raise ValidationError(f"pair must be one of {PAIRS}, got {pair!r}")
    f = np.transpose(s.tensor, _PAIR_AXES[pair]).reshape(4, 2)
    m = f.conj().T @ _YY @ f.conj()
    sv = np.linalg.svd(m, compute_uv=False)
    return float(max(sv[0] - sv[1], 0.0))


def _hdet(a: np.ndarray):
    """Cayley hyperdeterminant of (..., 8) amplitude arrays."""
    t000, t001, t010, t011, t100, t101, t110, t111 = (a[..., i] for i in range(8))
    s1 = (
        t000 ** 2 * t111 ** 2
        + t001 ** 2 * t110 ** 2
        + t010 ** 2 * t101 ** 2
        + t100 ** 2 * t011 ** 2
    )
    s2 = (
        t000 * t001 * t110 * t111
        + t000 * t010 * t101 * t111
        + t000 * t100 * t011 * t111
        + t001 * t010 * t101 * t110
        + t001 * t100 * t110 * t011
        + t010 * t100 * t101 * t011
    )
    s3 = t000 * t011 * t101 * t110 + t001 * t010 * t100 * t111
    return s1 - 2.0 * s2 + 4.0 * s3


def hyperdeterminant(s: PureState3) -> complex:
    """Degree-4 polynomial invariant of the 2x2x2 amplitude tensor."""
    return complex(_hdet(s.amp))


def tangle(s: PureState3, check: bool = True) -> float:
    """Tripartite tangle tau = 4 |Hdet|.

    With check=True (default) the value is cross-validated against the
    monogamy route C_A(BC)^2 - C_AB^2 - C_AC^2; a disagreement beyond 1e-9
    raises, since both routes are exact for pure states.
    """
    tau = 4.0 * abs(complex(_hdet(s.amp)))
    if check:
        r = reduce_one(s, "A").r
        alt = (
            max(0.0, 1.0 - r * r)
            - concurrence_pair(s, "AB") ** 2
            - concurrence_pair(s, "AC") ** 2
        )
        if abs(tau - alt) > 1e-9:
            raise NumericalError(
                f"tangle routes disagree: 4|Hdet| = {tau}, monogamy = {alt}"
            )
    return tau


# ---------------------------------------------------------------------------
# Vectorized helpers over (n, 8) amplitude arrays, used by the Monte Carlo
# verification passes. Semantics match the scalar functions above.


def _tangle_batch(amps: np.ndarray) -> np.ndarray:
    return 4.0 * np.abs(_hdet(amps))


def _bloch_norms_batch(amps: np.ndarray) -> np.ndarray:
    """(n, 3) Bloch norms via r^2 = 2 Tr rho^2 - 1."""
    t = amps.reshape(-1, 2, 2, 2)
    out = np.empty((t.shape[0], 3))
    for i, spec in enumerate(("najk,nbjk->nab", "njak,njbk->nab", "njka,njkb->nab")):
        rho = np.einsum(spec, t, t.conj())
        tr2 = np.einsum("nab,nba->n", rho, rho).real
        out[:, i] = np.sqrt(np.clip(2.0 * tr2 - 1.0, 0.0, 1.0))
    return out


def _concurrence_pairs_batch(amps: np.ndarray) -> np.ndarray:
    """(n, 3) pairwise concurrences in PAIRS order."""
    t = amps.reshape(-1, 2, 2, 2)
    out = np.empty((t.shape[0], 3))
    for i, pair in enumerate(PAIRS):
        axes = _PAIR_AXES[pair]
        f = np.transpose(t, (0, axes[0] + 1, axes[1] + 1, axes[2] + 1)).reshape(-1, 4, 2)
        m = np.einsum("njc,jk,nkd->ncd", f.conj(), _YY, f.conj())
        sv = np.linalg.svd(m, compute_uv=False)
        out[:, i] = np.clip(sv[:, 0] - sv[:, 1], 0.0, None)
    return out
