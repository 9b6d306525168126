"""Four exactly solvable 3-site spin chains with periodic boundaries.

Builds the Hamiltonians, diagonalizes them numerically, evaluates every
closed-form level energy, eigenstate, tangle and Bloch norm, labels states
by their symmetry eigenvalues, sweeps the coupling, and probes how robust
each level's tangle is under a symmetry-breaking perturbation.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .entanglement import BlochTriple, bloch_triple, tangle
from .errors import (
    ConvergenceFailure,
    CrossingPoint,
    NeedParams,
    NotDegenerate,
    NumericalError,
    OutOfDomain,
    UnknownModel,
    UnsupportedType,
    ValidationError,
)
from .qstate import PureState3

MODELS = ("tfim", "xx", "xxx", "xzx")

# couplings where two or more closed-form levels coincide
CROSSINGS = {
    "tfim": (0.0, 1.0),
    "xx": (0.0, 0.5, 1.0, 2.0, 3.0),
    "xxx": (-0.5, 1.0),
    "xzx": (0.0, 1.0),
}

GAP_TOL = 1e-9

_I2 = np.eye(2, dtype=complex)
_PAULI = {
    "I": _I2,
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def pauli_string(s: str) -> np.ndarray:
    """Kronecker product of three single-site Pauli or identity factors."""
    if len(s) != 3 or any(ch not in _PAULI for ch in s):
        raise ValidationError(f"expected a 3-letter string over I/X/Y/Z, got {s!r}")
    return np.kron(np.kron(_PAULI[s[0]], _PAULI[s[1]]), _PAULI[s[2]])


_TERMS = {
    "tfim": (
        ("unit", -1.0, "XXI"), ("unit", -1.0, "IXX"), ("unit", -1.0, "XIX"),
        ("delta", -1.0, "ZII"), ("delta", -1.0, "IZI"), ("delta", -1.0, "IIZ"),
    ),
    "xx": (
        ("unit", -1.0, "XXI"), ("unit", -1.0, "IXX"), ("unit", -1.0, "XIX"),
        ("unit", -1.0, "YYI"), ("unit", -1.0, "IYY"), ("unit", -1.0, "YIY"),
        ("delta", -1.0, "ZII"), ("delta", -1.0, "IZI"), ("delta", -1.0, "IIZ"),
    ),
    "xxx": (
        ("unit", 1.0, "XXI"), ("unit", 1.0, "IXX"), ("unit", 1.0, "XIX"),
        ("unit", 1.0, "YYI"), ("unit", 1.0, "IYY"), ("unit", 1.0, "YIY"),
        ("delta", 1.0, "ZZI"), ("delta", 1.0, "IZZ"), ("delta", 1.0, "ZIZ"),
    ),
    "xzx": (
        ("unit", -1.0, "XZX"), ("unit", -1.0, "XXZ"), ("unit", -1.0, "ZXX"),
        ("delta", -1.0, "ZII"), ("delta", -1.0, "IZI"), ("delta", -1.0, "IIZ"),
    ),
}


@dataclass(frozen=True)
class ChainModel:
    """A named 3-site chain at a fixed coupling delta."""

    name: str
    delta: float

    def __post_init__(self):
        if self.name not in MODELS:
            raise UnknownModel(f"model must be one of {MODELS}, got {self.name!r}")
        if self.name != "xxx" and self.delta < 0.0:
            raise OutOfDomain(f"{self.name} needs delta >= 0, got {self.delta}")

    @property
    def terms(self):
        return _TERMS[self.name]


def _as_model(model, delta) -> ChainModel:
    if isinstance(model, ChainModel):
        if delta is not None:
            raise ValidationError("delta is already part of the model")
        return model
    if delta is None:
        raise ValidationError("delta is required when the model is given by name")
    return ChainModel(str(model), float(delta))


def build_hamiltonian(model, delta: float | None = None) -> np.ndarray:
    """Assemble the 8 by 8 Hamiltonian from the model's Pauli terms."""
    cm = _as_model(model, delta)
    h = np.zeros((8, 8), dtype=complex)
    for role, sign, s in cm.terms:
        coeff = sign if role == "unit" else sign * cm.delta
        h += coeff * pauli_string(s)
    return h


def eigensystem(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian h.

    Each eigenvector's phase is fixed by making its largest-magnitude
    component real and positive, so repeated runs on the same machine give
    identical output.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (8, 8):
        raise ValidationError(f"expected an 8 x 8 matrix, got shape {h.shape}")
    if np.max(np.abs(h - h.conj().T)) > 1e-10:
        raise ValidationError("matrix is not Hermitian within 1e-10")
    try:
        evals, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigensolver did not converge: {exc}") from None
    vecs = np.array(vecs)
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        lead = col[int(np.argmax(np.abs(col)))]
        vecs[:, j] = col * (np.conj(lead) / abs(lead))
    return evals, vecs


def _ab(d: float) -> tuple[float, float]:
    return float(np.sqrt(1.0 + d + d * d)), float(np.sqrt(1.0 - d + d * d))


def closed_form_spectrum(model, delta: float | None = None) -> list[tuple[float, int]]:
    """Exact (energy, multiplicity) levels in their conventional listing order.

    The listing order is the stable label n used by the eigenstate and tangle
    formulas; it is ascending in energy for small coupling but levels may
    pass each other as delta grows. Multiplicities are the generic ones,
    valid away from crossings; use merge_levels to fold coincidences.
    """
    cm = _as_model(model, delta)
    d = cm.delta
    a, b = _ab(d)
    if cm.name == "tfim":
        rows = [(-d - 2 * b - 1, 1), (d - 2 * a - 1, 1), (-d + 2 * b - 1, 1),
                (1 - d, 2), (d + 1, 2), (d + 2 * a - 1, 1)]
    elif cm.name == "xx":
        rows = [(-d - 4, 1), (d - 4, 1), (-3 * d, 1), (3 * d, 1), (2 - d, 2), (2 + d, 2)]
    elif cm.name == "xxx":
        rows = [(3 * d, 2), (4 - d, 2), (-d - 2, 4)]
    else:
        rows = [(d - 2 * a - 1, 1), (-d - 2 * a + 1, 1), (-1 + d, 2),
                (1 - d, 2), (d + 2 * a - 1, 1), (-d + 2 * a + 1, 1)]
    return [(float(e), int(m)) for e, m in rows]


def merge_levels(levels, tol: float = GAP_TOL) -> list[tuple[float, int]]:
    """Ascending levels with coincident energies merged into one entry."""
    out: list[list] = []
    for e, m in sorted(levels, key=lambda em: em[0]):
        if out and abs(e - out[-1][0]) <= tol:
            out[-1][1] += m
        else:
            out.append([float(e), int(m)])
    return [(e, m) for e, m in out]


def _ket(index: int) -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    v[index] = 1.0
    return v


_SQRT3 = np.sqrt(3.0)
_OMEGA = np.exp(2j * np.pi / 3)

W_KET = (_ket(0b001) + _ket(0b010) + _ket(0b100)) / _SQRT3
X3W_KET = (_ket(0b110) + _ket(0b101) + _ket(0b011)) / _SQRT3
WT1_KET = (_ket(0b001) + _OMEGA * _ket(0b010) + _OMEGA ** 2 * _ket(0b100)) / _SQRT3
WT2_KET = (_ket(0b001) + _OMEGA ** 2 * _ket(0b010) + _OMEGA * _ket(0b100)) / _SQRT3
X3WT1_KET = (_ket(0b110) + _OMEGA * _ket(0b101) + _OMEGA ** 2 * _ket(0b011)) / _SQRT3
X3WT2_KET = (_ket(0b110) + _OMEGA ** 2 * _ket(0b101) + _OMEGA * _ket(0b011)) / _SQRT3

# the even combination completing the basis of the fused E = 0 subspace of
# the transverse-field chain at delta = 1
_FUSED_KET = 0.5 * (-_ket(0b000) + _ket(0b011) + _ket(0b101) + _ket(0b110))


@dataclass(frozen=True)
class SuperpositionParams:
    """Coefficients of a member of a degenerate eigenspace.

    Two-fold spaces use (alpha, beta); three- and four-fold spaces add gamma
    and delta. The total norm is 1 and beta carries no phase, since the
    global phase has already been spent making it real and non-negative.
    """

    alpha: complex
    beta: float
    gamma: complex | None = None
    delta: complex | None = None

    def __post_init__(self):
        if self.delta is not None and self.gamma is None:
            raise ValidationError("a four-component superposition also needs gamma")
        beta = self.beta
        if isinstance(beta, complex):
            if abs(beta.imag) > 1e-12:
                raise ValidationError("beta must be real; the free phase is spent")
            beta = beta.real
        if beta < 0.0:
            raise ValidationError(f"beta must be non-negative, got {beta}")
        total = abs(self.alpha) ** 2 + beta ** 2
        for extra in (self.gamma, self.delta):
            if extra is not None:
                total += abs(extra) ** 2
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"superposition norm squared is {total}, not 1")

    @property
    def n_components(self) -> int:
        return 2 + (self.gamma is not None) + (self.delta is not None)


def _require_components(params: SuperpositionParams, needed: int, where: str):
    if params.n_components != needed:
        raise ValidationError(
            f"{where} takes {needed}-component superposition params, "
            f"got {params.n_components}"
        )


# degenerate levels: basis kets in listing order and the parameter slot
# attached to each (conventions differ between models)
_DEG_FAMILY = {
    ("tfim", 3): ((WT1_KET, WT2_KET), ("alpha", "beta")),
    ("tfim", 4): ((X3WT1_KET, X3WT2_KET), ("alpha", "beta")),
    ("xx", 4): ((WT1_KET, WT2_KET), ("beta", "alpha")),
    ("xx", 5): ((X3WT1_KET, X3WT2_KET), ("beta", "alpha")),
    ("xxx", 0): ((_ket(0b000), _ket(0b111)), ("beta", "alpha")),
    ("xxx", 1): ((X3W_KET, W_KET), ("beta", "alpha")),
    ("xxx", 2): ((WT1_KET, X3WT1_KET, WT2_KET, X3WT2_KET),
                 ("alpha", "beta", "gamma", "delta")),
    ("xzx", 2): ((X3WT1_KET, X3WT2_KET), ("alpha", "beta")),
    ("xzx", 3): ((WT1_KET, WT2_KET), ("beta", "alpha")),
}


def _slot_values(params: SuperpositionParams, slots) -> list[complex]:
    table = {"alpha": params.alpha, "beta": params.beta,
             "gamma": params.gamma, "delta": params.delta}
    return [complex(table[s]) for s in slots]


def _tfim_fg(d: float) -> dict[int, tuple[float, float]]:
    a, b = _ab(d)
    f0 = -1.0 + 2.0 * d + 2.0 * b
    f1 = 2.0 * d + 2.0 * a + 1.0
    f2 = -2.0 * d + 1.0 + 2.0 * b
    f5 = -2.0 * d - 1.0 + 2.0 * a
    return {
        0: (f0, float(np.sqrt(f0 * f0 + 3.0))),
        1: (f1, float(_SQRT3 * np.sqrt(f1 * f1 + 3.0))),
        2: (f2, float(np.sqrt(f2 * f2 + 3.0))),
        5: (f5, float(_SQRT3 * np.sqrt(f5 * f5 + 3.0))),
    }


def _xzx_fg(d: float) -> dict[int, tuple[float, float]]:
    a, _ = _ab(d)
    f0 = 2.0 * d + 2.0 * a + 1.0
    f4 = -2.0 * d + 2.0 * a - 1.0
    return {
        0: (f0, float(_SQRT3 * np.sqrt(f0 * f0 + 3.0))),
        1: (f0, float(_SQRT3 * np.sqrt(f0 * f0 + 3.0))),
        4: (f4, float(_SQRT3 * np.sqrt(f4 * f4 + 3.0))),
        5: (f4, float(np.sqrt(f4 * f4 + 3.0))),
    }


def _nondeg_vector(name: str, n: int, d: float) -> np.ndarray | None:
    if name == "tfim":
        fg = _tfim_fg(d)
        if n == 0:
            f, g = fg[0]
            return (f * _ket(0b000) + _SQRT3 * X3W_KET) / g
        if n == 1:
            f, g = fg[1]
            return (f * _SQRT3 * W_KET + 3.0 * _ket(0b111)) / g
        if n == 2:
            f, g = fg[2]
            return (-f * _ket(0b000) + _SQRT3 * X3W_KET) / g
        if n == 5:
            f, g = fg[5]
            return (-f * _SQRT3 * W_KET + 3.0 * _ket(0b111)) / g
    elif name == "xx":
        return (W_KET, X3W_KET, _ket(0b000), _ket(0b111))[n] if n <= 3 else None
    elif name == "xzx":
        fg = _xzx_fg(d)
        if n == 0:
            f, g = fg[0]
            return (3.0 * _ket(0b111) - f * _SQRT3 * W_KET) / g
        if n == 1:
            f, g = fg[1]
            return (_SQRT3 * f * _ket(0b000) + 3.0 * X3W_KET) / g
        if n == 4:
            f, g = fg[4]
            return (3.0 * _ket(0b111) + _SQRT3 * f * W_KET) / g
        if n == 5:
            f, g = fg[5]
            return (-f * _ket(0b000) + _SQRT3 * X3W_KET) / g
    return None


def _check_level(name: str, n) -> int:
    count = {"tfim": 6, "xx": 6, "xxx": 3, "xzx": 6}[name]
    n = int(n)
    if not 0 <= n < count:
        raise ValidationError(f"{name} has levels 0..{count - 1}, got {n}")
    return n


def _at_fusion(name: str, n: int, d: float) -> bool:
    return name == "tfim" and n in (2, 3) and abs(d - 1.0) <= GAP_TOL


def closed_form_eigenstate(model, n: int, delta: float | None = None,
                           params: SuperpositionParams | None = None) -> PureState3:
    """Exact eigenstate of level n, as a normalized state.

    Degenerate levels describe a whole subspace, so a member must be picked
    with SuperpositionParams; non-degenerate levels take none. On the
    transverse-field chain at delta = 1 levels 2 and 3 fuse into a
    three-dimensional subspace whose members are reached with
    three-component params (gamma on the even basis ket).
    """
    cm = _as_model(model, delta)
    name, d = cm.name, cm.delta
    n = _check_level(name, n)
    if params is not None and params.n_components == 3:
        if name != "tfim" or n not in (2, 3):
            raise ValidationError(
                "three-component params only describe the fused subspace of "
                "the transverse-field chain, levels 2 and 3"
            )
        if abs(d - 1.0) > GAP_TOL:
            raise CrossingPoint(
                f"levels 2 and 3 only fuse at delta = 1, got delta = {d}"
            )
        g, al, be = params.gamma, params.alpha, params.beta
        return PureState3(g * _FUSED_KET + al * WT1_KET + be * WT2_KET)
    family = _DEG_FAMILY.get((name, n))
    if family is None:
        if params is not None:
            raise ValidationError(f"{name} level {n} is non-degenerate; params do not apply")
        return PureState3(_nondeg_vector(name, n, d))
    if params is None:
        raise NeedParams(f"{name} level {n} is degenerate; pass SuperpositionParams")
    basis, slots = family
    _require_components(params, len(basis), f"{name} level {n}")
    values = _slot_values(params, slots)
    vec = np.zeros(8, dtype=complex)
    for coeff, ket in zip(values, basis):
        vec += coeff * ket
    return PureState3(vec)


def closed_form_tangle(model, n: int, delta: float | None = None,
                       params: SuperpositionParams | None = None) -> float:
    """Exact tangle of level n, or of a chosen member of a degenerate level.

    Levels whose tangle is constant across the whole degenerate subspace
    (the single-excitation families) report it without params.
    """
    cm = _as_model(model, delta)
    name, d = cm.name, cm.delta
    n = _check_level(name, n)
    if params is not None and params.n_components == 3:
        if name != "tfim" or n not in (2, 3):
            raise ValidationError(
                "three-component params only describe the fused subspace of "
                "the transverse-field chain, levels 2 and 3"
            )
        if abs(d - 1.0) > GAP_TOL:
            raise CrossingPoint(
                f"levels 2 and 3 only fuse at delta = 1, got delta = {d}"
            )
        g, al, be = complex(params.gamma), complex(params.alpha), complex(params.beta)
        xi = al * _OMEGA.conjugate() + be * _OMEGA
        eta = al * _OMEGA + be * _OMEGA.conjugate()
        inner = g * g - ((al + be) - (xi - eta)) ** 2 / 3.0 + (4.0 * eta / 3.0) * (al + be)
        return float(abs(g) ** 2 * abs(inner))
    if name == "tfim":
        if n in (0, 2):
            f, g = _tfim_fg(d)[n]
            return float(16.0 * f / g ** 4)
        if n in (1, 5):
            f, g = _tfim_fg(d)[n]
            return float(48.0 * f ** 3 / g ** 4)
        if params is not None:
            _require_components(params, 2, f"tfim level {n}")
        return 0.0
    if name == "xx":
        if params is not None:
            if n not in (4, 5):
                raise ValidationError(f"xx level {n} is non-degenerate; params do not apply")
            _require_components(params, 2, f"xx level {n}")
        return 0.0
    if name == "xzx":
        fg = _xzx_fg(d)
        if n == 0:
            f, g = fg[0]
            return float(48.0 * f ** 3 / g ** 4)
        if n == 1:
            f, g = fg[1]
            return float(144.0 * f / g ** 4)
        if n == 4:
            f, g = fg[4]
            return float(48.0 * f ** 3 / g ** 4)
        if n == 5:
            f, g = fg[5]
            return float(16.0 * f / g ** 4)
        if params is not None:
            _require_components(params, 2, f"xzx level {n}")
        return 0.0
    # xxx: every level is degenerate and the tangle varies over each subspace
    if params is None:
        raise NeedParams(f"xxx level {n} tangle depends on the member; pass params")
    if n in (0, 1):
        _require_components(params, 2, f"xxx level {n}")
        b2 = float(params.beta) ** 2
        base = 4.0 * b2 * (1.0 - b2)
        return float(base if n == 0 else base / 3.0)
    _require_components(params, 4, "xxx level 2")
    al, be = complex(params.alpha), complex(params.beta)
    ga, de = complex(params.gamma), complex(params.delta)
    # pair the two k = 1, 2 kets of each magnetization sector
    s_ab = al + ga
    s_gd = be + de
    e_ab = al * _OMEGA + ga * _OMEGA.conjugate()
    e_ba = al * _OMEGA.conjugate() + ga * _OMEGA
    e_gd = be * _OMEGA + de * _OMEGA.conjugate()
    e_dg = be * _OMEGA.conjugate() + de * _OMEGA
    val = (s_ab * s_gd - (e_ba * e_dg - e_ab * e_gd)) ** 2 - 4.0 * s_ab * s_gd * e_ab * e_gd
    return float((4.0 / 9.0) * abs(val))


@dataclass(frozen=True)
class SymmetryLabels:
    """Eigenvalues of the chain symmetries, or None where not an eigenstate.

    k is the momentum under the cyclic site shift, p the spin-flip sign
    under X on every site, m_z the total magnetization, refl the site
    reversal sign, and zflip the sign under Z on every site.
    """

    k: int | None
    p: int | None
    m_z: int | None
    refl: int | None
    zflip: int | None


_MZ_DIAG = np.array([3, 1, 1, -1, 1, -1, -1, -3], dtype=float)
_ZFLIP_DIAG = np.array([1, -1, -1, 1, -1, 1, 1, -1], dtype=float)


def _sign_label(image: np.ndarray, amp: np.ndarray, tol: float) -> int | None:
    if np.linalg.norm(image - amp) <= tol:
        return 1
    if np.linalg.norm(image + amp) <= tol:
        return -1
    return None


def symmetry_labels(s: PureState3, tol: float = 1e-9) -> SymmetryLabels:
    amp = s.amp
    t = s.tensor
    shifted = np.transpose(t, (2, 0, 1)).reshape(8)
    k = None
    for kk in (0, 1, 2):
        if np.linalg.norm(shifted - np.exp(2j * np.pi * kk / 3.0) * amp) <= tol:
            k = kk
            break
    p = _sign_label(amp[::-1], amp, tol)
    refl = _sign_label(np.transpose(t, (2, 1, 0)).reshape(8), amp, tol)
    zflip = _sign_label(_ZFLIP_DIAG * amp, amp, tol)
    m_z = None
    for m in (3, 1, -1, -3):
        if np.linalg.norm(_MZ_DIAG * amp - m * amp) <= tol:
            m_z = m
            break
    return SymmetryLabels(k=k, p=p, m_z=m_z, refl=refl, zflip=zflip)


def degenerate_bloch_family(model, n: int, params: SuperpositionParams) -> BlochTriple:
    """Closed-form Bloch triple for a member of a degenerate level.

    Covers the two-fold single-excitation families of every model and the
    two-fold levels of the isotropic chain; its four-fold level has no
    closed Bloch form and is rejected.
    """
    name = model.name if isinstance(model, ChainModel) else str(model)
    if name not in MODELS:
        raise UnknownModel(f"model must be one of {MODELS}, got {name!r}")
    n = _check_level(name, n)
    family = _DEG_FAMILY.get((name, n))
    if family is None:
        raise NotDegenerate(f"{name} level {n} is non-degenerate")
    if name == "xxx" and n == 2:
        raise UnsupportedType("no closed Bloch form for the four-fold level")
    if params.gamma is not None:
        raise ValidationError("two-component params expected for this family")
    if name == "xxx":
        a2 = abs(complex(params.alpha)) ** 2
        b2 = float(params.beta) ** 2
        if n == 0:
            r = abs(a2 - b2)
        else:
            r = float(np.sqrt((a2 - b2) ** 2 + 16.0 * a2 * b2) / 3.0)
        return BlochTriple(r, r, r)
    _, slots = family
    c1, c2 = _slot_values(params, slots[:2])
    # rotate the member so the coefficient on the second basis ket is real,
    # which is the frame the closed triple is written in
    if abs(c2) > 1e-300:
        phase = np.conj(c2) / abs(c2)
        c1, c2 = c1 * phase, c2 * phase
    mag = abs(c1)
    th = np.angle(c1) if mag > 0 else 0.0
    b = abs(c2)
    ra = abs(1.0 + 2.0 * mag * b * (np.cos(th) + _SQRT3 * np.sin(th))) / 3.0
    rb = abs(1.0 + 2.0 * mag * b * (np.cos(th) - _SQRT3 * np.sin(th))) / 3.0
    rc = abs(1.0 - 4.0 * mag * b * np.cos(th)) / 3.0
    return BlochTriple(float(ra), float(rb), float(rc))


@dataclass(frozen=True)
class SweepRecord:
    """One output row of a coupling sweep."""

    delta: float
    n: int
    energy_numeric: float
    energy_closed: float | None
    multiplicity: int
    k: int | None
    p: int | None
    m_z: int | None
    tau_numeric: float
    tau_closed: float | None
    r_a: float
    r_b: float
    r_c: float
    crossing_flag: bool


SWEEP_FIELDS = ("delta", "n", "energy_numeric", "energy_closed", "multiplicity",
                "k", "p", "m_z", "tau_numeric", "tau_closed",
                "r_a", "r_b", "r_c", "crossing_flag")

_GRID_MAGS = (0.0, 0.25, 0.5, 0.75, 1.0)
_GRID_PHASES = 8
_MC_MEMBERS = 40


def _random_params(m: int, rng: np.random.Generator) -> SuperpositionParams:
    raw = rng.normal(size=m) + 1j * rng.normal(size=m)
    raw /= np.linalg.norm(raw)
    if abs(raw[1]) > 1e-12:
        raw *= np.conj(raw[1]) / abs(raw[1])
    fields = {"alpha": complex(raw[0]), "beta": float(raw[1].real)}
    if m >= 3:
        fields["gamma"] = complex(raw[2])
    if m == 4:
        fields["delta"] = complex(raw[3])
    return SuperpositionParams(**fields)


def _family_members(size: int, policy: str, rng: np.random.Generator):
    if policy == "grid" and size == 2:
        for mag in _GRID_MAGS:
            beta = float(np.sqrt(max(1.0 - mag * mag, 0.0)))
            for j in range(_GRID_PHASES):
                th = 2.0 * np.pi * j / _GRID_PHASES
                yield SuperpositionParams(alpha=mag * np.exp(1j * th), beta=beta)
    else:
        for _ in range(_MC_MEMBERS):
            yield _random_params(size, rng)


def _labels_of(state: PureState3) -> SymmetryLabels:
    return symmetry_labels(state)


def _sweep_point(name: str, d: float, policy: str, perturb: float,
                 seed: int, index: int) -> list[SweepRecord]:
    h = build_hamiltonian(name, d)
    spectrum = closed_form_spectrum(name, d)
    sorted_e = sorted(e for e, _ in spectrum)
    crossing = any(b - a <= GAP_TOL for a, b in zip(sorted_e, sorted_e[1:]))
    if perturb != 0.0:
        h = h + perturb * pauli_string("ZII")
        evals, vecs = eigensystem(h)
        records = []
        for j in range(8):
            group = int(np.sum(np.abs(evals - evals[j]) <= GAP_TOL))
            state = PureState3(vecs[:, j])
            lab = _labels_of(state)
            bt = bloch_triple(state)
            records.append(SweepRecord(
                delta=d, n=j, energy_numeric=float(evals[j]), energy_closed=None,
                multiplicity=group, k=lab.k, p=lab.p, m_z=lab.m_z,
                tau_numeric=tangle(state), tau_closed=None,
                r_a=bt.r_a, r_b=bt.r_b, r_c=bt.r_c, crossing_flag=crossing,
            ))
        return records
    evals, _ = eigensystem(h)
    rng = np.random.default_rng([seed, index])
    taken = np.zeros(8, dtype=bool)
    records = []
    for n, (e_closed, mult) in enumerate(spectrum):
        free = np.flatnonzero(~taken)
        order = free[np.argsort(np.abs(evals[free] - e_closed), kind="stable")]
        chosen = order[:mult]
        taken[chosen] = True
        worst = float(np.max(np.abs(evals[chosen] - e_closed)))
        if worst > GAP_TOL:
            raise NumericalError(
                f"{name} level {n} at delta = {d}: closed energy {e_closed} "
                f"misses the numeric spectrum by {worst:.3e}"
            )
        e_num = float(np.mean(evals[chosen]))
        family = _DEG_FAMILY.get((name, n))
        if family is None:
            members = [None]
        else:
            members = list(_family_members(len(family[0]), policy, rng))
        for params in members:
            state = closed_form_eigenstate(name, n, d, params)
            tau_cl = closed_form_tangle(name, n, d, params)
            lab = _labels_of(state)
            bt = bloch_triple(state)
            records.append(SweepRecord(
                delta=d, n=n, energy_numeric=e_num, energy_closed=e_closed,
                multiplicity=mult, k=lab.k, p=lab.p, m_z=lab.m_z,
                tau_numeric=tangle(state), tau_closed=tau_cl,
                r_a=bt.r_a, r_b=bt.r_b, r_c=bt.r_c, crossing_flag=crossing,
            ))
    return records


def sweep(model, delta_grid, params_policy: str = "grid", perturb: float = 0.0,
          seed: int = 0, threads: int = 1) -> list[SweepRecord]:
    """Evaluate every level over a coupling grid.

    Unperturbed sweeps pair each closed-form level with its numeric energy
    and report the closed and polynomial tangles side by side; degenerate
    levels are expanded into members per params_policy ("grid" walks a fixed
    magnitude-phase lattice for two-fold spaces, "mc" draws seeded random
    members, and four-fold spaces always draw randomly). With perturb set,
    the rows describe the eigenvectors of H + perturb * Z on site 0 instead
    and the closed-form columns are left empty.
    """
    name = model.name if isinstance(model, ChainModel) else str(model)
    if name not in MODELS:
        raise UnknownModel(f"model must be one of {MODELS}, got {name!r}")
    if params_policy not in ("grid", "mc"):
        raise ValidationError(f"params_policy must be grid or mc, got {params_policy!r}")
    grid = [float(d) for d in delta_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError("delta grid must be strictly increasing")
    args = [(name, d, params_policy, float(perturb), int(seed), i)
            for i, d in enumerate(grid)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            chunks = list(pool.map(lambda a: _sweep_point(*a), args))
    else:
        chunks = [_sweep_point(*a) for a in args]
    return [rec for chunk in chunks for rec in chunk]
