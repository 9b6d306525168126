"""Bloch-norm geometry: the bipyramid and its strata, R, the distance to the
main diagonal, the (R, tau) bound curves, the fibration surfaces, and the
geometric tangle ansatz."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import CanonicalForm, EntLabel
from .entanglement import BlochTriple
from .errors import (
    ComplexTau,
    NegativeRadicand,
    OutOfDomain,
    UnknownRegion,
    UnsupportedType,
    ValidationError,
)

SQRT3 = float(np.sqrt(3.0))
R_W = float(1.0 / np.sqrt(3.0))
R_STAR = float(np.sqrt(3.0 / 7.0))
# where the saturating-coefficient branch switches from the small-R root to
# the linear form; approximate by construction
CROSSOVER_R = 0.56

_DUST = 1e-12

# sign rows (s_A, s_B, s_C) of the plane family s_A r_A - s_B r_B - s_C r_C + 1 = 0:
# the three faces of the upper tetrahedron, then the common base r_A+r_B+r_C = 1
FACE_SIGNS = ((1, 1, 1), (-1, -1, 1), (-1, 1, -1), (-1, 1, 1))

REGION_KINDS = (
    "bipyramid",
    "upper-tetrahedron",
    "face",
    "diagonal",
    "triangle-12",
    "triangle-23",
    "triangle-13",
    "wedge-l2",
    "wedge-l3",
)

CURVE_KINDS = ("tau_max", "tau_star", "tau_up", "tau_down")


@dataclass(frozen=True)
class Region:
    """A stratum of the Bloch-norm bipyramid, with membership tolerance."""

    kind: str
    tol: float = 1e-9
    signs: tuple[int, int, int] | None = None

    def __post_init__(self):
        if self.kind not in REGION_KINDS:
            raise UnknownRegion(f"unknown region kind {self.kind!r}")
        if self.kind == "face":
            if self.signs is None or tuple(self.signs) not in FACE_SIGNS:
                raise UnknownRegion(
                    f"face signs must be one of {FACE_SIGNS}, got {self.signs!r}"
                )
        elif self.signs is not None:
            raise UnknownRegion(f"signs only apply to faces, not {self.kind!r}")


@dataclass(frozen=True)
class BoundCurve:
    """One of the named (R, tau) bound curves."""

    kind: str

    def __post_init__(self):
        if self.kind not in CURVE_KINDS:
            raise ValidationError(f"unknown bound curve {self.kind!r}")

    def at(self, r: float) -> float:
        return bound_curve(self.kind, r)


def big_r(bt: BlochTriple) -> float:
    """Euclidean norm of the Bloch triple, in [0, sqrt 3]."""
    return float(np.sqrt(bt.r_a ** 2 + bt.r_b ** 2 + bt.r_c ** 2))


def big_r_from_cf(cf: CanonicalForm) -> float:
    """R evaluated directly from canonical coefficients.

    R^2 = 3 - 4 l0^2 (3 - 3 l0^2 - 3 l1^2 - l2^2 - l3^2) - 8 D with
    D = l1^2 l4^2 + l2^2 l3^2 - 2 l1 l2 l3 l4 cos(phi). Agrees with the
    norm of the reconstructed state's Bloch triple to machine precision.
    """
    l0, l1, l2, l3, l4 = cf.lambdas
    d = l1 ** 2 * l4 ** 2 + l2 ** 2 * l3 ** 2 - 2.0 * l1 * l2 * l3 * l4 * np.cos(cf.phi)
    r2 = 3.0 - 4.0 * l0 ** 2 * (3.0 - 3.0 * l0 ** 2 - 3.0 * l1 ** 2 - l2 ** 2 - l3 ** 2) - 8.0 * d
    return float(np.sqrt(np.clip(r2, 0.0, 3.0)))


def dist_to_diagonal(bt: BlochTriple) -> float:
    """Distance from the Bloch triple to the main diagonal r_A = r_B = r_C."""
    ra, rb, rc = bt.r_a, bt.r_b, bt.r_c
    # sum-of-squared-differences form of r.r - sum of cross terms; the direct
    # expression cancels catastrophically for near-diagonal triples
    rad = 0.5 * ((ra - rb) ** 2 + (ra - rc) ** 2 + (rb - rc) ** 2)
    if rad < -_DUST:
        raise NegativeRadicand(f"diagonal-distance radicand {rad}")
    return float(np.sqrt(2.0 / 3.0) * np.sqrt(max(rad, 0.0)))


def membership(bt: BlochTriple, reg: Region) -> bool:
    """Whether a Bloch triple lies in the region, within its tolerance."""
    ra, rb, rc = bt.r_a, bt.r_b, bt.r_c
    tol = reg.tol
    if reg.kind == "face":
        sa, sb, sc = reg.signs
        return abs(sa * ra - sb * rb - sc * rc + 1.0) <= tol
    if reg.kind == "diagonal":
        return dist_to_diagonal(bt) <= tol
    if reg.kind == "triangle-12":
        return abs(ra - rb) <= tol and rc > ra + tol and rc > rb + tol
    if reg.kind == "triangle-23":
        return abs(rb - rc) <= tol and ra > rb + tol and ra > rc + tol
    if reg.kind == "triangle-13":
        return abs(ra - rc) <= tol and rb > ra + tol and rb > rc + tol
    if reg.kind == "wedge-l2":
        return rb + tol < min(ra, rc)
    if reg.kind == "wedge-l3":
        return rc + tol < min(ra, rb)
    in_box = all(-tol <= r <= 1.0 + tol for r in (ra, rb, rc))
    planes = (
        1.0 + ra - rb - rc >= -tol
        and 1.0 - ra + rb - rc >= -tol
        and 1.0 - ra - rb + rc >= -tol
    )
    if reg.kind == "bipyramid":
        return in_box and planes
    if reg.kind == "upper-tetrahedron":
        return in_box and planes and (ra + rb + rc >= 1.0 - tol)
    raise UnknownRegion(f"unknown region kind {reg.kind!r}")


def bound_curve(kind: str, r: float) -> float:
    """Evaluate one of the (R, tau) bound curves; nan outside its domain.

    tau_max = 1 - R^2/3 everywhere. tau_star is the piecewise saturating
    curve: 5 tau_max - 4 sqrt(tau_max) up to the crossover, 1 - R^2 to
    R = 1, then 0. tau_up and tau_down bound the two-branch region; they
    return nan where undefined (tau_up for R > R_star, tau_down outside
    [R_W, R_star]).
    """
    if kind not in CURVE_KINDS:
        raise ValidationError(f"unknown bound curve {kind!r}")
    if r < -_DUST or r > SQRT3 + _DUST:
        raise OutOfDomain(f"R = {r} outside [0, sqrt 3]")
    r = min(max(float(r), 0.0), SQRT3)
    tau_m = max(1.0 - r * r / 3.0, 0.0)
    if kind == "tau_max":
        return tau_m
    if kind == "tau_star":
        if r <= CROSSOVER_R:
            return 5.0 * tau_m - 4.0 * np.sqrt(tau_m)
        if r <= 1.0:
            return 1.0 - r * r
        return 0.0
    if kind == "tau_up":
        rad = 9.0 - 21.0 * r * r
        if abs(rad) < _DUST:
            rad = 0.0
        if rad < 0.0:
            return float("nan")
        return (17.0 / 49.0 - 5.0 * r * r / 21.0) - (32.0 / 147.0) * np.sqrt(rad)
    # tau_down
    if r < R_W - _DUST or r > R_STAR + _DUST:
        return float("nan")
    inner = (R_W + R_STAR) * (R_STAR - r) / (R_STAR ** 2 - R_W ** 2)
    return 0.25 * (1.0 - np.sqrt(max(inner, 0.0)))


def lambda3_star(r: float) -> float:
    """Saturating third coefficient along the l2 = 0 fibration.

    sqrt(3 - sqrt(9 - 3 R^2)) up to the crossover, R/sqrt(2) beyond it;
    defined for R in (0, 1] with the R -> 0 limit included.
    """
    if r < -_DUST or r > 1.0 + _DUST:
        raise OutOfDomain(f"R = {r} outside (0, 1]")
    r = min(max(float(r), 0.0), 1.0)
    if r <= CROSSOVER_R:
        return float(np.sqrt(3.0 - np.sqrt(9.0 - 3.0 * r * r)))
    return float(r / np.sqrt(2.0))


def tau_surface(r: float, l2: float, l3: float, branch: str = "plus") -> float:
    """Tangle on the constrained surface parametrized by (R, l2, l3).

    With s = l2^2 + l3^2 and u = l2^2 l3^2 the two branches read
    tau = tau_max + (4 s / 9)(s - 3 -+ q) - (8/3) u,
    q = sqrt(3 R^2 + s^2 - 6 s + 24 u). The default "plus" branch (taking
    -q) reduces to the single-coefficient fibration at l2 = 0 and puts its
    zero set at R^2 = 3 - 8 s + 8 s^2, whose minimum over s is R = 1; the
    "minus" branch (taking +q) is the variant containing the point
    (R, l2, l3) = (1/sqrt3, 1/sqrt3, 1/sqrt3) at tau = 0. A negative
    radicand beyond dust means the point is unreachable and raises.
    """
    if branch not in ("plus", "minus"):
        raise ValidationError(f"branch must be plus or minus, got {branch!r}")
    if r < -_DUST or r > SQRT3 + _DUST:
        raise OutOfDomain(f"R = {r} outside [0, sqrt 3]")
    if not (-_DUST <= l2 <= 1.0 + _DUST) or not (-_DUST <= l3 <= 1.0 + _DUST):
        raise OutOfDomain(f"coefficients ({l2}, {l3}) outside [0, 1]")
    s = l2 * l2 + l3 * l3
    u = (l2 * l2) * (l3 * l3)
    rad = 3.0 * r * r + s * s - 6.0 * s + 24.0 * u
    if abs(rad) < _DUST:
        rad = 0.0
    if rad < 0.0:
        raise ComplexTau(f"surface radicand {rad} is negative")
    q = float(np.sqrt(rad))
    tau_m = 1.0 - r * r / 3.0
    sign = -1.0 if branch == "plus" else 1.0
    return float(tau_m + (4.0 * s / 9.0) * (s - 3.0 + sign * q) - (8.0 / 3.0) * u)


def ansatz_tau(bt: BlochTriple, f_value: float) -> float:
    """Geometric tangle ansatz: tau_max(R) minus distance times the F factor."""
    if f_value < 0:
        raise ValidationError(f"F factor must be non-negative, got {f_value}")
    r = big_r(bt)
    return float(1.0 - r * r / 3.0 - dist_to_diagonal(bt) * f_value)


# Per-type F factors to lowest order. The two wedge kinds admit two role
# assignments of the Bloch norm entering the factor; "suppressed" pairs each
# kind with the wedge's smallest norm, which empirically tracks the tangle,
# and "swapped" is the transposed convention kept for comparison.
_F_TRIANGLE = {
    "3b-12": lambda bt: 2.0 * bt.r_c * np.sqrt(2.0 / 3.0),
    "3b-23": lambda bt: 2.0 * bt.r_a * np.sqrt(2.0 / 3.0),
    "3b-13": lambda bt: 2.0 * bt.r_b * np.sqrt(2.0 / 3.0),
}


def f_lowest_order(label: EntLabel | str, bt: BlochTriple, pairing: str = "suppressed") -> float:
    """Lowest-order F factor for the triangle and wedge types."""
    kind = label if isinstance(label, str) else label.kind
    if kind in _F_TRIANGLE:
        return float(_F_TRIANGLE[kind](bt))
    if kind in ("4b-l2", "4b-l3"):
        if pairing not in ("suppressed", "swapped"):
            raise ValidationError(f"pairing must be suppressed or swapped, got {pairing!r}")
        use_b = (kind == "4b-l2") == (pairing == "suppressed")
        return float(2.0 * np.sqrt(3.0) * (bt.r_b if use_b else bt.r_c))
    raise UnsupportedType(f"no lowest-order F factor for type {kind!r}")
