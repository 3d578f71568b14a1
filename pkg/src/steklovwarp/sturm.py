"""Weighted 1D Steklov/Neumann boundary problems on a collar interval.

The separated form of the auxiliary base problem is a weighted equation
-(w a')' + q a = 0 on [0, L] with a spectral (Steklov) condition at one or
both endpoints; its Dirichlet-to-Neumann eigenvalues feed the warped
product assembly. Discretization is by piecewise-linear elements with
midpoint quadrature for the gradient weight and trapezoidal (lumped)
quadrature for the zeroth-order term, which keeps the system symmetric
positive and second-order accurate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CompletenessError, DomainError, MeshResolutionError
from .linalg import PartitionedSystem, dtn_matrix, harmonic_extension, sym_eig
from .profiles import CoefficientFn
from .provenance import EigenSource, SpectrumWithProvenance, merge_tagged
from .spectra import ClosedSpectrum, iter_entries

_NEG_EIG_TOL = 1e-9


@dataclass(frozen=True)
class SteklovEnd:
    """Spectral endpoint; weight is the boundary measure density there."""

    weight: float = 1.0

    def __post_init__(self) -> None:
        if self.weight <= 0.0:
            raise DomainError("Steklov boundary weight must be positive")


@dataclass(frozen=True)
class NeumannEnd:
    """Natural endpoint, absorbed into the weak form."""


BoundaryCondition = SteklovEnd | NeumannEnd


@dataclass(frozen=True, eq=False)
class SturmProblem:
    """Weighted 1D problem -(w a')' + q a = 0 with endpoint conditions and a mesh.

    grad_weight w must be positive and potential q nonnegative on [0, length].
    transition_spans lists intervals that the mesh must resolve with at
    least 8 elements each (coefficient plateaus changing by orders of
    magnitude live there).
    """

    length: float
    grad_weight: CoefficientFn
    potential: CoefficientFn
    left_bc: BoundaryCondition
    right_bc: BoundaryCondition
    nodes: np.ndarray
    transition_spans: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self) -> None:
        if self.length <= 0.0:
            raise DomainError("interval length must be positive")
        if not isinstance(self.left_bc, SteklovEnd) and not isinstance(
            self.right_bc, SteklovEnd
        ):
            raise DomainError("at least one endpoint must carry a Steklov condition")
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or len(nodes) < 2:
            raise DomainError("mesh must contain at least two nodes")
        if abs(nodes[0]) > 1e-14 or abs(nodes[-1] - self.length) > 1e-12 * max(self.length, 1.0):
            raise DomainError("mesh must span exactly [0, length]")
        if np.any(np.diff(nodes) <= 0.0):
            raise DomainError("mesh nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @property
    def n_elements(self) -> int:
        return len(self.nodes) - 1

    @property
    def steklov_side(self) -> str:
        left = isinstance(self.left_bc, SteklovEnd)
        right = isinstance(self.right_bc, SteklovEnd)
        return "both" if left and right else ("left" if left else "right")


@dataclass(frozen=True)
class BaseGeometry:
    """Collar base: cross-section spectrum, collar length, and endpoint roles.

    steklov_ends is "both", "left" or "right"; the remaining end, if any,
    carries the Neumann condition. component_count records the number of
    Steklov boundary components when known (informational).
    """

    cross_section: ClosedSpectrum
    collar_length: float
    steklov_ends: str = "both"
    component_count: int | None = None

    def __post_init__(self) -> None:
        if self.collar_length <= 0.0:
            raise DomainError("collar length must be positive")
        if self.steklov_ends not in ("both", "left", "right"):
            raise DomainError(
                f"steklov_ends must be 'both', 'left' or 'right', got {self.steklov_ends!r}"
            )


def graded_mesh(
    length: float,
    n_elements: int,
    spans: tuple[tuple[float, float], ...] = (),
    min_per_span: int = 8,
) -> np.ndarray:
    """Mesh of [0, length] refined so each span gets at least min_per_span elements.

    Elements are distributed across the segments cut by the span endpoints
    in proportion to segment length, with the per-span minimum enforced, and
    are uniform within each segment.
    """
    if length <= 0.0:
        raise DomainError("length must be positive")
    if n_elements < 1:
        raise DomainError("element count must be positive")
    cuts = {0.0, length}
    for a, b in spans:
        if not 0.0 <= a < b <= length:
            raise DomainError(f"span ({a}, {b}) outside [0, {length}]")
        cuts.add(a)
        cuts.add(b)
    breaks = sorted(cuts)
    span_set = {(a, b) for a, b in spans}
    nodes = [0.0]
    for a, b in zip(breaks[:-1], breaks[1:]):
        seg = max(1, round(n_elements * (b - a) / length))
        if (a, b) in span_set:
            seg = max(seg, min_per_span)
        step = (b - a) / seg
        for i in range(1, seg):
            nodes.append(a + i * step)
        nodes.append(b)
    return np.array(nodes)


def elements_inside(nodes: np.ndarray, a: float, b: float) -> int:
    tol = 1e-12 * max(nodes[-1], 1.0)
    left = nodes[:-1]
    right = nodes[1:]
    return int(np.count_nonzero((left >= a - tol) & (right <= b + tol)))


def assemble(p: SturmProblem) -> PartitionedSystem:
    """Discrete bilinear form of the problem, partitioned onto Steklov endpoints.

    Stiffness entries come from the gradient weight at element midpoints,
    the potential is lumped at the nodes with trapezoidal weights, and
    Neumann endpoints are treated as interior unknowns (natural condition).
    """
    if p.n_elements < 16:
        raise DomainError(f"mesh must have at least 16 elements, got {p.n_elements}")
    for a, b in p.transition_spans:
        inside = elements_inside(p.nodes, a, b)
        if inside < 8:
            raise MeshResolutionError(
                f"transition interval ({a:.6g}, {b:.6g}) resolved by only "
                f"{inside} elements, need at least 8"
            )
    t = p.nodes
    n = len(t)
    dt = np.diff(t)
    mid = 0.5 * (t[:-1] + t[1:])
    w_mid = np.array([p.grad_weight(x) for x in mid])
    if np.any(w_mid <= 0.0):
        raise DomainError("gradient weight must be positive on the interval")
    q_node = np.array([p.potential(x) for x in t])
    if np.any(q_node < 0.0):
        raise DomainError("potential must be nonnegative on the interval")

    cond = w_mid / dt
    lump = np.zeros(n)
    lump[:-1] += 0.5 * dt
    lump[1:] += 0.5 * dt

    diag = np.zeros(n)
    diag[:-1] += cond
    diag[1:] += cond
    diag += q_node * lump
    off = -cond  # coupling between consecutive nodes

    boundary: list[int] = []
    weights: list[float] = []
    if isinstance(p.left_bc, SteklovEnd):
        boundary.append(0)
        weights.append(p.left_bc.weight)
    if isinstance(p.right_bc, SteklovEnd):
        boundary.append(n - 1)
        weights.append(p.right_bc.weight)
    interior = [i for i in range(n) if i not in boundary]

    n_i = len(interior)
    ab = np.zeros((2, n_i))
    ab[0] = diag[interior]
    inter = np.array(interior)
    consecutive = inter[1:] - inter[:-1] == 1
    ab[1, : n_i - 1][consecutive] = off[inter[:-1][consecutive]]

    a_ib = np.zeros((n_i, len(boundary)))
    for col, bnode in enumerate(boundary):
        for drow, inode in ((0, bnode - 1), (0, bnode + 1)):
            if 0 <= inode < n and inode in interior:
                a_ib[interior.index(inode), col] = off[min(inode, bnode)]
    a_bb = np.diag(diag[boundary])
    return PartitionedSystem(ab, a_ib, a_bb, np.array(weights))


def dtn_eigenvalues(p: SturmProblem) -> np.ndarray:
    """Ascending Dirichlet-to-Neumann eigenvalues: one per Steklov endpoint."""
    system = assemble(p)
    values, _ = sym_eig(dtn_matrix(system))
    scale = max(abs(values).max(), 1.0)
    clipped = np.where((values < 0.0) & (values > -_NEG_EIG_TOL * scale), 0.0, values)
    return np.sort(clipped)


def rayleigh_quotient(p: SturmProblem, samples: np.ndarray) -> float:
    """Discrete energy quotient of nodal values against the Steklov boundary mass.

    Always at least the smallest Dirichlet-to-Neumann eigenvalue up to
    roundoff; equality holds for the discrete energy-minimizing extension
    of the minimizing boundary data.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != p.nodes.shape:
        raise DomainError("samples must match mesh nodes")
    system = assemble(p)
    boundary = [0] if isinstance(p.left_bc, SteklovEnd) else []
    if isinstance(p.right_bc, SteklovEnd):
        boundary.append(len(p.nodes) - 1)
    interior = [i for i in range(len(p.nodes)) if i not in boundary]
    x_b = samples[boundary]
    x_i = samples[interior]
    denom = float(x_b @ (system.b_bb * x_b))
    if denom <= 0.0:
        raise DomainError("test function vanishes on all Steklov nodes")
    a_ii = system.interior_dense()
    num = float(
        x_i @ (a_ii @ x_i) + 2.0 * x_i @ (system.a_ib @ x_b) + x_b @ (system.a_bb @ x_b)
    )
    return num / denom


def minimizing_extension(p: SturmProblem, boundary_values: np.ndarray) -> np.ndarray:
    """Nodal values of the discrete energy-minimizing extension of endpoint data."""
    system = assemble(p)
    boundary = [0] if isinstance(p.left_bc, SteklovEnd) else []
    if isinstance(p.right_bc, SteklovEnd):
        boundary.append(len(p.nodes) - 1)
    interior = [i for i in range(len(p.nodes)) if i not in boundary]
    full = np.zeros(len(p.nodes))
    full[boundary] = boundary_values
    full[interior] = harmonic_extension(system, np.asarray(boundary_values, float))
    return full


def base_dtn_spectrum(
    geom: BaseGeometry,
    grad_weight: CoefficientFn,
    fiber_eigenvalue: float,
    inv_sq_weight: CoefficientFn,
    top: float,
    *,
    n_elements: int = 400,
    boundary_weights: tuple[float, float] = (1.0, 1.0),
    transition_spans: tuple[tuple[float, float], ...] = (),
) -> SpectrumWithProvenance:
    """Mixed Steklov-Neumann spectrum of one auxiliary base operator, up to `top`.

    Each cross-section mode mu reduces the base problem to a 1D problem with
    potential q = mu * w + fiber_eigenvalue * inv_sq_weight. Modes are
    consumed in ascending mu; since every eigenvalue is nondecreasing in mu,
    iteration stops once the smallest eigenvalue of a mode exceeds top, and
    the collected union is then complete below top.
    """
    if top <= 0.0:
        raise DomainError("top must be positive")
    if fiber_eigenvalue < 0.0:
        raise DomainError("fiber eigenvalue must be nonnegative")
    nodes = graded_mesh(geom.collar_length, n_elements, transition_spans)
    left: BoundaryCondition = (
        SteklovEnd(boundary_weights[0]) if geom.steklov_ends in ("both", "left") else NeumannEnd()
    )
    right: BoundaryCondition = (
        SteklovEnd(boundary_weights[1]) if geom.steklov_ends in ("both", "right") else NeumannEnd()
    )

    tagged: list[tuple[float, EigenSource]] = []
    mode_iter = iter_entries(geom.cross_section)
    while True:
        try:
            mu, cross_mult = next(mode_iter)
        except StopIteration:
            break  # complete stream (point cross-section): union is finished
        problem = SturmProblem(
            length=geom.collar_length,
            grad_weight=grad_weight,
            potential=_mode_potential(grad_weight, mu, fiber_eigenvalue, inv_sq_weight),
            left_bc=left,
            right_bc=right,
            nodes=nodes,
            transition_spans=transition_spans,
        )
        values = dtn_eigenvalues(problem)
        if values[0] > top:
            break
        for branch, value in enumerate(values):
            if value <= top:
                tagged.append(
                    (
                        float(value),
                        EigenSource(
                            fiber_value=fiber_eigenvalue,
                            fiber_mult=1,
                            cross_value=float(mu),
                            cross_mult=int(cross_mult),
                            branch=branch,
                        ),
                    )
                )
    return merge_tagged(tagged)


def _mode_potential(
    grad_weight: CoefficientFn,
    mu: float,
    fiber_eigenvalue: float,
    inv_sq_weight: CoefficientFn,
) -> CoefficientFn:
    if mu == 0.0 and fiber_eigenvalue == 0.0:
        return lambda t: 0.0
    return lambda t: mu * grad_weight(t) + fiber_eigenvalue * inv_sq_weight(t)
