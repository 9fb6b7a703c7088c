"""Finite matrix truncations of q-normal operators built from invariant measures.

The L2 space of a q-invariant atomic measure has an orthonormal basis of
normalized atom indicators e_{j,n}, one per generator j and scaling level n
(value t_{j,n} = q**n * x_j), plus one kernel vector when the origin carries
mass.  On a finite window of levels the deformed coordinate acts as
zeta = u * modulus with modulus diagonal and u the downward level shift,
truncated to a partial isometry.  All defining identities then hold exactly
away from the window boundary, and the verification ops below compress to
that interior before measuring defects.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import matrixops as mo
from .algebra import CoefficientFunction
from .errors import ConfigurationError, DomainError, EvaluationError
from .qspace import QInvariantMeasure, SpectralSet
from .scalars import format_rational, parse_rational


@dataclass(frozen=True)
class TruncationWindow:
    """Range of scaling levels n_min..n_max kept by the truncation."""

    n_min: int
    n_max: int

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise ConfigurationError(f"window [{self.n_min}, {self.n_max}] out of order")

    @property
    def levels(self) -> range:
        return range(self.n_min, self.n_max + 1)

    @property
    def size(self) -> int:
        return self.n_max - self.n_min + 1

    def interior_levels(self, pad: int = 1) -> range:
        """Levels at distance >= pad from both window ends.

        The shift truncation is defective at both boundary levels (the top
        loses u*u = 1, the bottom loses uu* = 1), so interior compressions
        drop pad levels from each side.
        """
        return range(self.n_min + pad, self.n_max - pad + 1)


@dataclass(frozen=True)
class GridPoint:
    gen: int
    level: int
    value: Fraction
    weight: Fraction


@dataclass(frozen=True)
class RelationReport:
    interior_defect: object
    boundary_defect: object


@dataclass(frozen=True)
class PolarReport:
    reconstruction_defect: object
    kernel_defect: object


@dataclass(frozen=True, eq=False)
class TruncatedQNormal:
    """Matrix model of zeta = u * modulus on a level window, kernel slot last."""

    q: Fraction
    window: TruncationWindow
    grid: tuple[GridPoint, ...]
    kernel_dim: int
    exact: bool
    zeta: np.ndarray
    u: np.ndarray
    modulus: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.grid) + self.kernel_dim

    @property
    def kernel_index(self) -> int | None:
        return len(self.grid) if self.kernel_dim else None

    def grid_indices(self) -> range:
        return range(len(self.grid))

    def interior_indices(self, pad: int = 1) -> list[int]:
        keep = set(self.window.interior_levels(pad))
        return [i for i, gp in enumerate(self.grid) if gp.level in keep]

    def as_float(self) -> "TruncatedQNormal":
        if not self.exact:
            return self
        return TruncatedQNormal(self.q, self.window, self.grid, self.kernel_dim, False,
                                mo.to_float(self.zeta), mo.to_float(self.u),
                                mo.to_float(self.modulus))


def _validate_generators(q: Fraction, generators: Sequence[Fraction]) -> tuple[Fraction, ...]:
    gens = tuple(Fraction(g) for g in generators)
    low = q if q < 1 else Fraction(0)
    for g in gens:
        if not low < g <= 1:
            raise DomainError(f"generator {g} outside ({low}, 1]")
    return gens


def build_from_generators(q, generators, window: TruncationWindow, weights=None,
                          zero_mass=0, exact: bool = False) -> TruncatedQNormal:
    """Assemble the truncation directly from generator values.

    Accepts q = 1 (classical mode), where every level carries the same values
    and the model is an ordinary normal operator.
    """
    q = parse_rational(q)
    if not 0 < q <= 1:
        raise DomainError(f"q must lie in (0, 1], got {q}")
    gens = _validate_generators(q, generators)
    zero_mass = parse_rational(zero_mass)
    if zero_mass < 0:
        raise DomainError("zero_mass must be nonnegative")
    if weights is None:
        weights = [Fraction(1)] * len(gens)
    weights = [parse_rational(w) for w in weights]
    if len(weights) != len(gens):
        raise DomainError("one weight per generator required")
    if any(w <= 0 for w in weights):
        raise DomainError("weights must be positive")
    if gens and window.size < 3:
        raise ConfigurationError("window too small: need at least 3 levels")
    if not gens and zero_mass == 0:
        # support {0} carries unit mass by convention
        zero_mass = Fraction(1)

    grid = tuple(GridPoint(j, n, q ** n * x, weights[j])
                 for n in window.levels for j, x in enumerate(gens))
    kernel_dim = 1 if zero_mass > 0 else 0
    n_gens = len(gens)
    dim = len(grid) + kernel_dim

    u = mo.zeros(dim, exact)
    modulus = mo.zeros(dim, exact)
    zeta = mo.zeros(dim, exact)
    one = Fraction(1) if exact else 1.0 + 0j
    for i, gp in enumerate(grid):
        modulus[i, i] = gp.value if exact else complex(gp.value)
        if gp.level > window.n_min:
            # e_{j,n} -> e_{j,n-1}; levels are enumerated in ascending blocks
            u[i - n_gens, i] = one
            zeta[i - n_gens, i] = gp.value if exact else complex(gp.value)
    return TruncatedQNormal(q, window, grid, kernel_dim, exact, zeta, u, modulus)


def build(mu: QInvariantMeasure, X: SpectralSet | None, window: TruncationWindow,
          q=None, exact: bool = False) -> TruncatedQNormal:
    """Build the truncated model of the measure's L2 multiplication-shift pair."""
    if q is not None and parse_rational(q) != mu.q:
        raise DomainError("explicit q disagrees with the measure")
    if X is not None:
        if X.q != mu.q:
            raise DomainError("spectral set ratio disagrees with the measure")
        support = mu.support()
        if X.generators != support.generators or X.includes_zero != support.includes_zero:
            raise DomainError("spectral set does not match the measure support")
    if mu.is_trivial:
        raise DomainError("measure has empty support")
    gens = [p for p, _ in mu.base_atoms]
    weights = [w for _, w in mu.base_atoms]
    return build_from_generators(mu.q, gens, window, weights, mu.zero_mass, exact)


def verify_relation(T: TruncatedQNormal, pad: int = 1) -> RelationReport:
    """Defect of zeta zeta* = q**2 zeta* zeta, interior and full-window."""
    zs = mo.adjoint(T.zeta)
    q2 = T.q * T.q if T.exact else float(T.q) ** 2
    D = T.zeta @ zs - mo.scale(zs @ T.zeta, q2)
    interior = mo.defect_norm(mo.compress(D, T.interior_indices(pad)))
    boundary = mo.defect_norm(D)
    return RelationReport(interior, boundary)


def spectral_function(T: TruncatedQNormal, f: CoefficientFunction) -> np.ndarray:
    """Diagonal matrix f(modulus): f(t_{j,n}) on the grid, f(0) on the kernel."""
    out = mo.zeros(T.dim, T.exact)
    try:
        for i, gp in enumerate(T.grid):
            out[i, i] = f.eval_exact(gp.value) if T.exact else complex(f(float(gp.value)))
        if T.kernel_dim:
            k = T.kernel_index
            out[k, k] = f.value_at_zero if T.exact else complex(f.value_at_zero)
    except (ArithmeticError, OverflowError) as exc:
        raise EvaluationError(f"coefficient undefined on the grid: {exc}") from exc
    return out


def _scaled_spectral_function(T: TruncatedQNormal, f: CoefficientFunction) -> np.ndarray:
    """Diagonal matrix f(q * modulus)."""
    out = mo.zeros(T.dim, T.exact)
    for i, gp in enumerate(T.grid):
        tq = T.q * gp.value
        out[i, i] = f.eval_exact(tq) if T.exact else complex(f(float(tq)))
    if T.kernel_dim:
        k = T.kernel_index
        out[k, k] = f.value_at_zero if T.exact else complex(f.value_at_zero)
    return out


def verify_covariance(T: TruncatedQNormal, f: CoefficientFunction, pad: int = 1):
    """Interior defect of u f(modulus) u* = f(q modulus)."""
    lhs = T.u @ spectral_function(T, f) @ mo.adjoint(T.u)
    rhs = _scaled_spectral_function(T, f)
    return mo.defect_norm(mo.compress(lhs - rhs, T.interior_indices(pad)))


def polar_check(T: TruncatedQNormal) -> PolarReport:
    """zeta = u modulus holds by construction; u must kill the kernel slot."""
    rec = mo.defect_norm(T.zeta - T.u @ T.modulus)
    if T.kernel_dim:
        kd = mo.defect_norm(T.u[:, [T.kernel_index]])
    else:
        kd = Fraction(0) if T.exact else 0.0
    return PolarReport(rec, kd)


def matrix_to_csv(M: np.ndarray, stream) -> None:
    """Dump a matrix as rows of (row, col, re, im)."""
    writer = csv.writer(stream)
    writer.writerow(["row", "col", "re", "im"])
    for i in range(M.shape[0]):
        for j in range(M.shape[1]):
            v = complex(M[i, j])
            writer.writerow([i, j, repr(v.real), repr(v.imag)])


def matrix_csv_text(M: np.ndarray) -> str:
    buf = io.StringIO()
    matrix_to_csv(M, buf)
    return buf.getvalue()


def spectra_to_csv(T: TruncatedQNormal, stream) -> None:
    """Dump grid values as rows of (level, generator, value)."""
    writer = csv.writer(stream)
    writer.writerow(["level", "generator", "value"])
    for gp in T.grid:
        writer.writerow([gp.level, gp.gen, format_rational(gp.value)])
    if T.kernel_dim:
        writer.writerow(["kernel", "-", "0/1"])


def spectral_summary(T: TruncatedQNormal, defects: dict | None = None) -> dict:
    data = {
        "q": format_rational(T.q),
        "window": [T.window.n_min, T.window.n_max],
        "dimension": T.dim,
        "kernel_dim": T.kernel_dim,
        "mode": "exact" if T.exact else "float",
        "grid": [{"level": gp.level, "generator": gp.gen,
                  "value": format_rational(gp.value), "float": float(gp.value)}
                 for gp in T.grid],
    }
    if defects is not None:
        data["defects"] = defects
    return data


def quadrature_atoms(density, q, nodes: int) -> tuple[tuple[Fraction, Fraction], ...]:
    """Midpoint discretization of a density on (q, 1] into measure atoms."""
    q = parse_rational(q)
    if not 0 < q < 1:
        raise DomainError("quadrature needs q in (0, 1)")
    if nodes < 1:
        raise DomainError("need at least one quadrature node")
    width = (1 - q) / nodes
    atoms = []
    for i in range(nodes):
        mid = q + width * Fraction(2 * i + 1, 2)
        dens = density(float(mid))
        if dens < 0:
            raise DomainError("density must be nonnegative")
        if dens > 0:
            atoms.append((mid, Fraction(dens) * width))
    return tuple(atoms)
