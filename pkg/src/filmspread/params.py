"""Rheology exponent bookkeeping.

Everything downstream is parametrized by the power-law exponent lambda of an
Ostwald-de Waele fluid (shear-thinning for lambda > 1).  This module holds
lambda together with every derived exponent and amplitude so the other modules
never recompute them ad hoc.  Pure values, no I/O, no integration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = ["Rheology", "make_rheology", "gamma_to_kappa", "kappa_to_gamma"]


@dataclass(frozen=True)
class Rheology:
    """Power-law exponent and the constants derived from it.

    Attributes
    ----------
    lam : float
        Rheology exponent lambda > 0 (dimensionless).
    a : float
        1/lambda; interfaces of spreading drops exist only for a < 1.
    beta_planar : float
        Time exponent of the planar source solution, 1/(5*lam + 2).
    beta_radial : float
        Time exponent of the radially symmetric source solution, 1/(7*lam + 3).
    amp_A : float
        Height amplitude A fixed by A**(2*lam + 1) = 1/(5*lam + 2).
    tw_alpha, tw_beta : float
        Traveling-wave phase-space exponents (lam-1)/(3*lam) and (lam+2)/(3*lam).
    p_front : float
        Zero-contact-angle interface exponent 3*lam/(2*lam + 1) == 3/(2 + a).
    """

    lam: float
    a: float
    beta_planar: float
    beta_radial: float
    amp_A: float
    tw_alpha: float
    tw_beta: float
    p_front: float


def make_rheology(lam: float) -> Rheology:
    """Build a Rheology from the power-law exponent.

    Accepts the full range lam > 0: nonexistence of interfaces for lam <= 1
    is demonstrated downstream, so the parameters must be constructible here.

    Raises
    ------
    DomainError
        If lam is not a positive finite number.
    """
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0.0:
        raise DomainError(f"rheology exponent must be positive and finite, got {lam!r}")
    return Rheology(
        lam=lam,
        a=1.0 / lam,
        beta_planar=1.0 / (5.0 * lam + 2.0),
        beta_radial=1.0 / (7.0 * lam + 3.0),
        # closed form, no root-finding: A = (5 lam + 2)^(-1/(2 lam + 1))
        amp_A=math.exp(-math.log(5.0 * lam + 2.0) / (2.0 * lam + 1.0)),
        tw_alpha=(lam - 1.0) / (3.0 * lam),
        tw_beta=(lam + 2.0) / (3.0 * lam),
        p_front=3.0 * lam / (2.0 * lam + 1.0),
    )


def gamma_to_kappa(gamma: float, r: Rheology) -> float:
    """Initial-curvature parameter kappa from the shooting parameter gamma.

    Inverts gamma = kappa**(-(3 + a)/2), i.e. kappa = gamma**(-2*lam/(3*lam + 1)).
    Strictly decreasing in gamma; kappa(1) == 1 for every lam.
    """
    if not (gamma > 0.0) or not math.isfinite(gamma):
        raise DomainError(f"gamma must be positive for the kappa rescaling, got {gamma!r}")
    return gamma ** (-2.0 * r.lam / (3.0 * r.lam + 1.0))


def kappa_to_gamma(kappa: float, r: Rheology) -> float:
    """Inverse of :func:`gamma_to_kappa`: gamma = kappa**(-(3*lam + 1)/(2*lam))."""
    if not (kappa > 0.0) or not math.isfinite(kappa):
        raise DomainError(f"kappa must be positive, got {kappa!r}")
    return kappa ** (-(3.0 * r.lam + 1.0) / (2.0 * r.lam))
