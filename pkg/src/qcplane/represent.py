"""Covariant matrix representation, norm estimation, and bounded transforms.

An algebra element sum f_k U**k acts on a truncated operator model as
sum spectral_function(f_k) * u**k.  The norm estimator sweeps a family of
growing windows of one fixed faithful model and reports the largest singular
value per window; this stands in for the universal norm (the acting group Z
is amenable, an assumption recorded in the report, never verified here).

The bounded transform z(T) = T(1 + T*T)^(-1/2) and its inverse live here too,
together with the factorization identity that moves shift powers u**k into
powers of the transformed operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import matrixops as mo
from .algebra import (AlgebraElement, Classification, ClosureCoefficient,
                      CoefficientFunction, classify)
from .errors import ConfigurationError, DomainError, SingularityError
from .qnormal import (TruncatedQNormal, TruncationWindow, build,
                      spectral_function)
from .qspace import QInvariantMeasure, SpectralSet
from .scalars import format_rational

REL_CONVERGENCE_TOL = 1e-8
NONDECREASING_SLACK = 1e-12
EIGENVALUE_CLAMP = 1e-14
UNIT_NORM_GUARD = 1e-10


@dataclass(frozen=True)
class NormReport:
    """Singular-value estimates over a nested window sweep."""

    window_sizes: tuple[int, ...]
    estimates: tuple[float, ...]
    converged: bool
    final: float

    def __post_init__(self):
        for a, b in zip(self.estimates, self.estimates[1:]):
            if b < a - NONDECREASING_SLACK * max(1.0, a):
                raise DomainError("estimates must be nondecreasing in window size")

    def to_json(self, element_label: str) -> dict:
        return {
            "element": element_label,
            "windows": list(self.window_sizes),
            "estimates": list(self.estimates),
            "converged": self.converged,
            "final": self.final,
        }


@dataclass(frozen=True, eq=False)
class ZTransformPair:
    original: np.ndarray
    z: np.ndarray


def represent(a: AlgebraElement, T: TruncatedQNormal) -> np.ndarray:
    """Matrix of sum_k f_k(modulus) u**k; exact when T and all f_k are."""
    if a.q != T.q:
        raise DomainError("element and model have different ratios")
    out = mo.zeros(T.dim, T.exact)
    for k, f in a.terms:
        out = out + spectral_function(T, f) @ mo.shift_power(T.u, k)
    return out


def represent_with_kernel(a: AlgebraElement, T: TruncatedQNormal) -> np.ndarray:
    """As represent, with the kernel slot guaranteed to act as f_0(0)."""
    if classify(a) is Classification.FULL:
        raise DomainError("kernel extension needs vanishing nonzero modes")
    if T.kernel_dim != 1:
        raise DomainError("model carries no kernel slot")
    return represent(a, T)


def psi_check(a: AlgebraElement, T: TruncatedQNormal) -> float:
    """Norm gap between the kernel-extended and kernel-free representations.

    The kernel slot acts as the scalar f_0(0), which the grid block already
    approaches along levels n -> +infinity, so the gap shrinks as the window
    grows upward.
    """
    M = represent_with_kernel(a, T.as_float())
    grid_idx = list(range(len(T.grid)))
    full = float(np.linalg.norm(M, 2)) if M.size else 0.0
    part = mo.defect_norm(mo.compress(M, grid_idx))
    return abs(full - part)


def norm_estimate(a: AlgebraElement, windows, mu: QInvariantMeasure,
                  X: SpectralSet | None = None) -> NormReport:
    """Largest singular value of the represented element per window."""
    windows = list(windows)
    if not windows:
        raise DomainError("need at least one window")
    sizes = [w.size for w in windows]
    if sizes != sorted(sizes):
        raise DomainError("windows must be increasing")
    estimates = []
    for w in windows:
        T = build(mu, X, w, exact=False)
        M = represent(a, T)
        estimates.append(float(np.linalg.norm(M, 2)) if M.size else 0.0)
    converged = (len(estimates) >= 2 and
                 abs(estimates[-1] - estimates[-2]) <= REL_CONVERGENCE_TOL * max(1.0, estimates[-1]))
    return NormReport(tuple(sizes), tuple(estimates), converged, estimates[-1])


def _hermitian_inv_sqrt(H: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(H)
    if not np.all(np.isfinite(vals)):
        raise ArithmeticError("eigendecomposition produced non-finite values")
    vals = np.clip(vals, EIGENVALUE_CLAMP, None)
    return (vecs * (vals ** -0.5)) @ vecs.conj().T


def z_transform(M: np.ndarray) -> ZTransformPair:
    """Bounded transform M (1 + M*M)^(-1/2), always of norm < 1."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError("bounded transform needs a square matrix")
    if not np.all(np.isfinite(M)):
        raise ArithmeticError("matrix has non-finite entries")
    H = np.eye(M.shape[0], dtype=complex) + M.conj().T @ M
    return ZTransformPair(M, M @ _hermitian_inv_sqrt(H))


def pi_image(z: np.ndarray) -> np.ndarray:
    """Inverse transform z (1 - z*z)^(-1/2); defined only strictly inside the ball."""
    z = np.asarray(z, dtype=complex)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise DomainError("inverse transform needs a square matrix")
    if z.size == 0:
        return z
    norm = float(np.linalg.norm(z, 2))
    if norm >= 1.0 - UNIT_NORM_GUARD:
        raise SingularityError(f"operator norm {norm} too close to 1; image unbounded")
    G = np.eye(z.shape[0], dtype=complex) - z.conj().T @ z
    return z @ _hermitian_inv_sqrt(G)


def scalar_z(tau: float) -> float:
    return tau / math.sqrt(1.0 + tau * tau)


def rapid_decay_family(n: int, q) -> CoefficientFunction:
    """Smooth compactly-decaying approximate unit exp(-q**n (t + 1/t)).

    Vanishes with all orders at t = 0 and at infinity; pointwise nondecreasing
    in n with limit 1 on (0, inf).
    """
    if n < 1:
        raise DomainError("family index starts at 1")
    qn = float(Fraction(q) ** n)

    def phi(t: float) -> float:
        if t <= 0.0:
            return 0.0
        return math.exp(-qn * (t + 1.0 / t))

    return ClosureCoefficient(phi, 0.0, True, label=f"rapid_decay_{n}")


def verify_z_factorization(T: TruncatedQNormal, f: CoefficientFunction,
                           k: int, n: int) -> float:
    """Interior defect of the shift-power factorization through z(zeta).

    For k > 0 compares phi_n(|zeta|) f(|zeta|) u**k with
    phi_n(|zeta|) (prod_{j=1..k} z(q**j |zeta|)^{-1}) f(|zeta|) z_zeta**k,
    and the mirrored product for k < 0 with powers of z_zeta*.
    """
    if k == 0:
        raise DomainError("factorization is about nonzero shift powers")
    if f.value_at_zero != 0:
        raise DomainError("coefficient must vanish at the origin")
    Tf = T.as_float()
    q = float(T.q)
    phi = spectral_function(Tf, rapid_decay_family(n, T.q))
    F = spectral_function(Tf, f)
    Z = z_transform(Tf.zeta).z

    def z_inverse_diag(exponents) -> np.ndarray:
        out = np.zeros((Tf.dim, Tf.dim), dtype=complex)
        for i, gp in enumerate(Tf.grid):
            prod = 1.0
            for j in exponents:
                prod *= scalar_z((q ** j) * float(gp.value))
            out[i, i] = 1.0 / prod
        # kernel slot: phi vanishes at 0, so the factor there is irrelevant
        return out

    if k > 0:
        lhs = phi @ F @ mo.shift_power(Tf.u, k)
        rhs = phi @ z_inverse_diag(range(1, k + 1)) @ F @ np.linalg.matrix_power(Z, k)
    else:
        m = -k
        lhs = phi @ F @ mo.shift_power(Tf.u, k)
        rhs = (phi @ z_inverse_diag(range(0, -m, -1)) @ F
               @ np.linalg.matrix_power(Z.conj().T, m))
    pad = max(abs(k), 1)
    if not T.window.interior_levels(pad):
        raise ConfigurationError("window too small for the requested shift power")
    return mo.defect_norm(mo.compress(lhs - rhs, Tf.interior_indices(pad)))


def norm_report_label(literals) -> str:
    return " + ".join(literals)


def window_span_label(w: TruncationWindow) -> str:
    return f"[{w.n_min}, {w.n_max}]"


def format_ratio(q: Fraction) -> str:
    return format_rational(q)
