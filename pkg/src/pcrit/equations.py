"""Equation parameters ``zeta = (zeta_0, ..., zeta_n)`` and the invariant ``P_zeta``.

An equation ``sum_k zeta_k ∧ F^k = 0`` in the reduced curvature ``F`` is
recorded by the cohomology classes of its coefficients; ``zeta_k`` has
bidegree ``(n-k, n-k)``. The topological invariant of a bundle ``F`` is

    P_zeta(F) = sum_k k! ∫ zeta_k · ch_k(F).

Every builder in this module normalises ``zeta`` against a designated total
bundle ``E`` so that ``P_zeta(E) = 0``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import NamedTuple, Sequence

from .bundles import BundleTopology
from .cohomology import CohomologyClass, IntersectionRing, class_from_json
from .errors import (
    ConsistencyError,
    DegenerateEquationWarning,
    DegenerateVolume,
    DegreeMismatch,
    MalformedInput,
    PositivityViolated,
    RingMismatch,
    VanishingCharge,
    WrongDegree,
)
from .exact import Gaussian, I, Surd, as_fraction, format_rational, parse_rational, rational_sqrt

__all__ = [
    "CentralCharge",
    "EquationParams",
    "RescaledDHYM",
    "central_charge",
    "central_charge_params",
    "dhym_central_charge",
    "dhym_charge_data",
    "dhym_params",
    "dhym_surface_rescaled",
    "hym_params",
    "j_equation_params",
    "monge_ampere_params",
    "p_value",
    "params_from_json",
    "params_to_json",
]


@dataclass(frozen=True)
class EquationParams:
    """Coefficients ``zeta_k = zetas[k] + surd_zetas[k] / sqrt(radicand)``.

    The surd part is only present for phase-normalised equations, where
    ``radicand = |Z(E)|**2``.
    """

    ring: IntersectionRing
    zetas: tuple[CohomologyClass, ...]
    surd_zetas: tuple[CohomologyClass, ...] | None = None
    radicand: Fraction | None = None
    note: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.ring.dim
        object.__setattr__(self, "zetas", tuple(self.zetas))
        if (self.surd_zetas is None) != (self.radicand is None):
            raise ValueError("surd_zetas and radicand must be given together")
        parts = [self.zetas]
        if self.surd_zetas is not None:
            object.__setattr__(self, "surd_zetas", tuple(self.surd_zetas))
            object.__setattr__(self, "radicand", as_fraction(self.radicand))
            if self.radicand <= 0:
                raise ValueError("radicand must be positive")
            parts.append(self.surd_zetas)
        for part in parts:
            if len(part) != n + 1:
                raise DegreeMismatch(f"expected {n + 1} coefficients, got {len(part)}")
            for k, z in enumerate(part):
                if z.ring != self.ring:
                    raise RingMismatch("coefficient from another ring")
                if not z.is_homogeneous((n - k, n - k)):
                    raise DegreeMismatch(f"zeta_{k} must have bidegree ({n - k},{n - k}), got {z}")

    @classmethod
    def from_classes(cls, ring, classes: dict[int, CohomologyClass], note="") -> "EquationParams":
        zetas = tuple(classes.get(k, ring.zero()) for k in range(ring.dim + 1))
        return cls(ring, zetas, note=note)

    @property
    def is_rational(self) -> bool:
        return self.surd_zetas is None or all(z.is_zero() for z in self.surd_zetas)

    def _check(self, other: "EquationParams"):
        if other.ring != self.ring:
            raise RingMismatch("parameters over different rings")
        if (
            self.radicand is not None
            and other.radicand is not None
            and self.radicand != other.radicand
        ):
            raise ValueError("cannot combine parameters with different radicands")

    def __add__(self, other: "EquationParams") -> "EquationParams":
        if not isinstance(other, EquationParams):
            return NotImplemented
        self._check(other)
        zetas = tuple(a + b for a, b in zip(self.zetas, other.zetas))
        if self.surd_zetas is None and other.surd_zetas is None:
            return EquationParams(self.ring, zetas)
        zero = tuple(self.ring.zero() for _ in zetas)
        sa = self.surd_zetas or zero
        sb = other.surd_zetas or zero
        radicand = self.radicand if self.radicand is not None else other.radicand
        return EquationParams(self.ring, zetas, tuple(a + b for a, b in zip(sa, sb)), radicand)

    def __mul__(self, c) -> "EquationParams":
        c = as_fraction(c)
        surd = None if self.surd_zetas is None else tuple(c * z for z in self.surd_zetas)
        return EquationParams(
            self.ring, tuple(c * z for z in self.zetas), surd, self.radicand, self.note
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __str__(self):
        lines = []
        for k, z in enumerate(self.zetas):
            term = str(z)
            if self.surd_zetas is not None and not self.surd_zetas[k].is_zero():
                term = f"{term} + ({self.surd_zetas[k]})/sqrt({format_rational(self.radicand)})"
            lines.append(f"zeta_{k} = {term}")
        return "\n".join(lines)


def p_value(ring: IntersectionRing, zeta: EquationParams, F: BundleTopology):
    """``sum_k k! ∫ zeta_k · ch_k(F)``.

    Returns a :class:`~fractions.Fraction`, or a :class:`~pcrit.exact.Surd`
    when ``zeta`` carries a surd part.
    """
    if zeta.ring != ring or F.ring != ring:
        raise RingMismatch("zeta and F must live over the given ring")

    def pair(classes):
        total = Fraction(0)
        for k, z in enumerate(classes):
            if z.is_zero() or F.ch[k].is_zero():
                continue
            try:
                total += factorial(k) * ring.integrate(z * F.ch[k])
            except WrongDegree as exc:
                raise DegreeMismatch(str(exc)) from exc
        return total

    rational = pair(zeta.zetas)
    if zeta.surd_zetas is None:
        return rational
    return Surd(rational, pair(zeta.surd_zetas), zeta.radicand)


def _assert_normalized(ring, zeta: EquationParams, E: BundleTopology, who: str):
    if p_value(ring, zeta, E) != 0:
        raise ConsistencyError(f"{who} produced parameters with P(E) != 0")
    return zeta


def _volume(ring, omega) -> Fraction:
    return ring.integrate(ring.power(omega, ring.dim))


def _check_kahler_class(omega: CohomologyClass):
    if not omega.is_homogeneous((1, 1)):
        raise WrongDegree(f"the Kähler class must be a (1,1) class, got {omega}")


def hym_params(ring: IntersectionRing, omega: CohomologyClass, E: BundleTopology) -> EquationParams:
    """Hermitian Yang–Mills: ``omega^{n-1} ∧ F - c·omega^n·Id`` with the slope constant."""
    _check_kahler_class(omega)
    n = ring.dim
    vol = _volume(ring, omega)
    if vol == 0:
        raise DegenerateVolume("∫ omega^n vanishes")
    c = ring.integrate(ring.power(omega, n - 1) * E.c1()) / (E.rank * vol)
    zeta = EquationParams.from_classes(
        ring, {1: ring.power(omega, n - 1), 0: -c * ring.power(omega, n)}, note="hym"
    )
    return _assert_normalized(ring, zeta, E, "hym_params")


def monge_ampere_params(ring: IntersectionRing, E: BundleTopology) -> EquationParams:
    """Complex Monge–Ampère: ``F^n - eta·Id`` with ``rk(E)·[eta] = n!·ch_n(E)``."""
    n = ring.dim
    eta = factorial(n) * E.ch[n] / E.rank
    zeta = EquationParams.from_classes(ring, {n: ring.one(), 0: -eta}, note="monge-ampere")
    return _assert_normalized(ring, zeta, E, "monge_ampere_params")


def j_equation_params(ring: IntersectionRing, omega: CohomologyClass, E: BundleTopology):
    """J-equation ``c_J F^n - omega ∧ F^{n-1}``; returns ``(params, c_J)``.

    Requires ``∫ch_n(E) > 0`` and ``∫omega·ch_{n-1}(E) > 0``.
    """
    _check_kahler_class(omega)
    n = ring.dim
    if n < 1:
        raise WrongDegree("the J-equation needs a ring of positive dimension")
    top = ring.integrate(E.ch[n])
    mixed = ring.integrate(omega * E.ch[n - 1])
    if top <= 0 or mixed <= 0:
        raise PositivityViolated(
            f"J-equation needs ∫ch_n(E) > 0 and ∫omega·ch_(n-1)(E) > 0 (got {top}, {mixed})"
        )
    c_j = mixed / (n * top)
    zeta = EquationParams.from_classes(ring, {n: c_j * ring.one(), n - 1: -omega}, note="j")
    return _assert_normalized(ring, zeta, E, "j_equation_params"), c_j


def dhym_central_charge(ring: IntersectionRing, omega: CohomologyClass, E: BundleTopology) -> Gaussian:
    """``Z(E) = ∫ tr (omega + iF)^n = sum_k n!/(n-k)! i^k ∫ omega^{n-k} ch_k(E)``."""
    _check_kahler_class(omega)
    n = ring.dim
    Z = Gaussian(0)
    for k in range(n + 1):
        term = ring.integrate(ring.power(omega, n - k) * E.ch[k])
        Z = Z + (I ** k) * (Fraction(factorial(n), factorial(n - k)) * term)
    return Z


def _surd_params(ring, rational, surd, abs2: Fraction, note: str) -> EquationParams:
    """Package ``rational + surd/sqrt(abs2)``, folding perfect squares."""
    root = rational_sqrt(abs2)
    if root is not None:
        zetas = tuple(r + s / root for r, s in zip(rational, surd))
        return EquationParams(ring, zetas, note=note)
    return EquationParams(ring, tuple(rational), tuple(surd), abs2, note=note)


def dhym_params(ring: IntersectionRing, omega: CohomologyClass, E: BundleTopology) -> EquationParams:
    """Deformed Hermitian Yang–Mills ``Im(e^{-i phi}(omega + iF)^n)``.

    ``e^{-i phi} = conj(Z)/|Z|``, so ``zeta_k = C(n,k) Im(conj(Z) i^k) omega^{n-k} / |Z|``.
    """
    Z = dhym_central_charge(ring, omega, E)
    if not Z:
        raise VanishingCharge("Z_dHYM(E) = 0")
    n = ring.dim
    Zbar = Z.conjugate()
    surd = tuple(
        comb(n, k) * (Zbar * I ** k).im * ring.power(omega, n - k) for k in range(n + 1)
    )
    rational = tuple(ring.zero() for _ in range(n + 1))
    zeta = _surd_params(ring, rational, surd, Z.abs2(), note="dhym; phase conj(Z)/|Z|")
    return _assert_normalized(ring, zeta, E, "dhym_params")


@dataclass(frozen=True)
class CentralCharge:
    """Central charge data ``(rho, omega, U)`` with ``U_0 = 1``."""

    rho: tuple[Gaussian, ...]
    omega: CohomologyClass
    U: tuple[CohomologyClass, ...]

    def __post_init__(self):
        ring = self.omega.ring
        n = ring.dim
        rho = tuple(Gaussian.coerce(r) for r in self.rho)
        if len(rho) != n + 1:
            raise DegreeMismatch(f"rho needs {n + 1} entries")
        U = tuple(self.U) + tuple(ring.zero() for _ in range(n + 1 - len(self.U)))
        if len(U) != n + 1:
            raise DegreeMismatch(f"U has more than {n + 1} components")
        if U[0] != ring.one():
            raise ValueError("U_0 must be the unit class")
        for j, u in enumerate(U):
            if not u.is_homogeneous((j, j)):
                raise DegreeMismatch(f"U_{j} must have bidegree ({j},{j})")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "U", U)


def central_charge(ring: IntersectionRing, cc: CentralCharge, E: BundleTopology) -> Gaussian:
    """``Z(E) = (sum_d rho_d [omega]^d U ch(E))_(n,n)``."""
    n = ring.dim
    Z = Gaussian(0)
    for d in range(n + 1):
        wd = ring.power(cc.omega, d)
        for j in range(n + 1 - d):
            val = ring.integrate(wd * cc.U[j] * E.ch[n - d - j])
            if val:
                Z = Z + cc.rho[d] * val
    return Z


def central_charge_params(ring: IntersectionRing, cc: CentralCharge, E: BundleTopology) -> EquationParams:
    """Z-critical equation ``Im(e^{-i phi(E)} 𝒵)`` expanded in powers of ``F``.

    ``zeta_k = (1 / (k! |Z(E)|)) sum_l Im(conj(Z) rho_l) omega^l U_{n-k-l}``;
    the ``1/k!`` comes from ``ch = tr exp(F)``. Emits
    :class:`~pcrit.errors.DegenerateEquationWarning` when every coefficient
    vanishes.
    """
    Z = central_charge(ring, cc, E)
    if not Z:
        raise VanishingCharge("Z(E) = 0")
    n = ring.dim
    Zbar = Z.conjugate()
    surd = []
    for k in range(n + 1):
        acc = ring.zero()
        for l in range(n - k + 1):
            w = (Zbar * cc.rho[l]).im
            if w:
                acc = acc + w * ring.power(cc.omega, l) * cc.U[n - k - l]
        surd.append(acc / factorial(k))
    if all(s.is_zero() for s in surd):
        warnings.warn(
            "all coefficients of the Z-critical equation vanish", DegenerateEquationWarning, stacklevel=2
        )
    rational = tuple(ring.zero() for _ in range(n + 1))
    zeta = _surd_params(
        ring, rational, tuple(surd), Z.abs2(), note="central charge; normalised by 1/|Z(E)|"
    )
    return _assert_normalized(ring, zeta, E, "central_charge_params")


def dhym_charge_data(ring: IntersectionRing, omega: CohomologyClass) -> CentralCharge:
    """Central charge reproducing dHYM: ``rho_d = n! i^n (-i)^d / d!``, ``U = 1``."""
    n = ring.dim
    rho = tuple((I ** n) * (Gaussian(0, -1) ** d) * Fraction(factorial(n), factorial(d)) for d in range(n + 1))
    return CentralCharge(rho, omega, (ring.one(),))


class RescaledDHYM(NamedTuple):
    params: EquationParams
    c_j: Fraction
    c_hym: Fraction
    c_const: Fraction


def dhym_surface_rescaled(
    ring: IntersectionRing,
    omega_base: CohomologyClass,
    alpha: CohomologyClass,
    eps1,
    eps2,
    E: BundleTopology,
) -> RescaledDHYM:
    """dHYM on a surface for the Kähler class ``eps1·(omega_base + eps2·alpha)``, rescaled.

    The equation is ``c_J F² - w ∧ F + C eps1² (w ∧ F - c_HYM w² Id) = 0``
    with ``w = omega_base + eps2·alpha`` and

    * ``c_J = ∫w·ch_1(E) / (2 ∫ch_2(E))``
    * ``c_HYM = ∫w·ch_1(E) / (∫w² rk E)``
    * ``C = ∫w² rk E / (2 ∫ch_2(E))``

    It differs from the phase form by the positive factor ``1/(2 eps1 ch_2(E))``,
    so signs of ``P`` are unchanged. ``eps1 = 0`` gives the J-equation limit.
    """
    if ring.dim != 2:
        raise WrongDegree("dhym_surface_rescaled needs a surface (dimension 2)")
    _check_kahler_class(omega_base)
    _check_kahler_class(alpha)
    eps1, eps2 = as_fraction(eps1), as_fraction(eps2)
    if eps1 < 0:
        raise PositivityViolated("eps1 must be non-negative")
    w = omega_base + eps2 * alpha
    w2 = ring.integrate(w * w)
    wc1 = ring.integrate(w * E.ch[1])
    ch2 = ring.integrate(E.ch[2])
    if w2 <= 0 or wc1 <= 0 or ch2 <= 0:
        raise PositivityViolated(
            f"need ∫w² > 0, ∫w·ch_1(E) > 0, ∫ch_2(E) > 0 (got {w2}, {wc1}, {ch2})"
        )
    c_j = wc1 / (2 * ch2)
    c_hym = wc1 / (w2 * E.rank)
    c_const = w2 * E.rank / (2 * ch2)
    s = c_const * eps1 * eps1
    zeta = EquationParams.from_classes(
        ring,
        {2: c_j * ring.one(), 1: -(1 - s) * w, 0: -s * c_hym * (w * w)},
        note="dhym surface form, rescaled by 1/(2 eps1 ch2(E))",
    )
    _assert_normalized(ring, zeta, E, "dhym_surface_rescaled")
    return RescaledDHYM(zeta, c_j, c_hym, c_const)


# serialisation ------------------------------------------------------------------

def params_to_json(zeta: EquationParams) -> dict:
    out = {"zeta": {str(k): z.to_json() for k, z in enumerate(zeta.zetas)}}
    if zeta.surd_zetas is not None:
        out["surd"] = {
            "radicand": format_rational(zeta.radicand),
            "zeta": {str(k): z.to_json() for k, z in enumerate(zeta.surd_zetas)},
        }
    if zeta.note:
        out["normalization"] = zeta.note
    return out


def params_from_json(ring: IntersectionRing, obj) -> EquationParams:
    try:
        raw = obj["zeta"]
        zetas = tuple(
            class_from_json(ring, raw[str(k)]) if str(k) in raw else ring.zero()
            for k in range(ring.dim + 1)
        )
        surd = radicand = None
        if "surd" in obj:
            sraw = obj["surd"]["zeta"]
            surd = tuple(
                class_from_json(ring, sraw[str(k)]) if str(k) in sraw else ring.zero()
                for k in range(ring.dim + 1)
            )
            radicand = parse_rational(obj["surd"]["radicand"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedInput(f"malformed equation parameters: {exc}") from exc
    return EquationParams(ring, zetas, surd, radicand, note=obj.get("normalization", ""))
