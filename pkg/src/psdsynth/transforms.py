"""The covariance transformation group, acting on covariances and on omega.

With omega_t(y) = C * y**m * omega(y**n)**k, the covariance becomes
k * n**2 * V((x - m) / (k*n)). A negative ``m`` divides omega by y**|m|,
which needs the first |m| coefficients of omega to vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import covariance as cov
from . import fps, poly
from .covariance import CovarianceSpec
from .errors import ShiftUnderflow
from .expr import RationalFunction
from .fps import Series


@dataclass(frozen=True)
class TransformSpec:
    shift_m: int = 0
    power_k: int = 1
    argpow_n: int = 1
    scale_C: Fraction = Fraction(1)

    def __post_init__(self):
        if self.power_k < 1:
            raise ValueError("power_k must be a positive integer")
        if self.argpow_n < 1:
            raise ValueError("argpow_n must be a positive integer")
        if Fraction(self.scale_C) <= 0:
            raise ValueError("scale_C must be positive")

    @property
    def is_identity(self) -> bool:
        return self.shift_m == 0 and self.power_k == 1 and self.argpow_n == 1


def transform_covariance(spec: CovarianceSpec, t: TransformSpec) -> CovarianceSpec:
    """k*n^2 * V((x - m)/(k*n)), composed exactly."""
    kn = t.power_k * t.argpow_n
    factor = t.power_k * t.argpow_n**2
    if spec.kind == cov.SERIES:
        # about the new center m + c*k*n the argument is just u/(k*n)
        v = spec.numer.scale_argument(Fraction(1, kn)) * factor
        return cov.from_series(v, center=t.shift_m + spec.center * kn)
    inner = (Fraction(-t.shift_m, kn), Fraction(1, kn))
    numer = poly.scale(poly.compose(spec.numer_poly, inner), factor)
    denom = poly.compose(spec.denom_poly, inner)
    hint = None
    if spec.domain_hint is not None and t.shift_m == 0:
        hint = spec.domain_hint * kn
    return cov.from_rational_function(RationalFunction.of(numer, denom), hint)


def shift_omega(omega: Series, m: int) -> Series:
    if m >= 0:
        return omega.shift(m)
    head = omega.coeffs[:-m]
    if len(head) < -m or any(head):
        raise ShiftUnderflow(f"omega does not vanish to order {-m} at 0")
    return omega.shift(m)


def transform_omega(omega: Series, t: TransformSpec, order: int, apply_scale: bool = False) -> Series:
    """C * y^m * omega(y^n)^k to at most ``order`` coefficients.

    C is left out unless ``apply_scale``: it never changes a normalized table.
    """
    out = omega
    if t.argpow_n > 1:
        out = fps.compose(out, Series.monomial(t.argpow_n, max(order, t.argpow_n + 1)))
    if t.power_k > 1:
        out = fps.power(out, t.power_k)
    out = shift_omega(out, t.shift_m)
    if out.order > order:
        out = out.truncate(order)
    if apply_scale:
        out = out * Fraction(t.scale_C)
    return out


def normalize_omega(omega: Series) -> Series:
    """Divide by the lowest nonzero coefficient."""
    v = omega.valuation()
    return omega if v is None else omega / omega.coeffs[v]


def roundtrip_pair(omega: Series, t: TransformSpec, order: int, base: CovarianceSpec | None = None) -> tuple[Series, Series]:
    """(omega path, covariance path), both expanded about the valuation of the transformed omega.

    The omega path recovers V from the transformed omega. The covariance path
    transforms ``base`` (default: the covariance recovered from ``omega``).
    """
    transformed = transform_omega(omega, t, order)
    via_omega = cov.covariance_from_omega(transformed)
    center, _ = cov.omega_structure(transformed)
    if base is None:
        base = cov.covariance_spec_from_omega(omega)
    via_cov = cov.expand_about(transform_covariance(base, t), center, via_omega.order)
    return via_omega, via_cov


def verify_roundtrip(omega: Series, t: TransformSpec, order: int, base: CovarianceSpec | None = None) -> bool:
    a, b = roundtrip_pair(omega, t, order, base)
    return fps.agrees(a, b)
