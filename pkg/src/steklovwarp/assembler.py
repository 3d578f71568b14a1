"""Steklov spectra of warped products assembled from auxiliary base problems.

The mixed Steklov-Neumann spectrum of the warped product equals the union
over fiber eigenvalues of the spectra of auxiliary base operators, one per
fiber eigenvalue. For a collar base every auxiliary operator reduces to 1D
problems over cross-section modes, so the whole spectrum comes from small
endpoint Schur complements. Multiplicities follow the tensor basis count:
fiber multiplicity times cross-section multiplicity per source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, HypothesisViolationError, NumericError
from .profiles import CoefficientFn, WarpedMetricSpec, power_fn, transition_spans, value_fn
from .provenance import EigenSource, SpectrumWithProvenance, merge_tagged
from .spectra import extend, iter_entries
from .sturm import base_dtn_spectrum

ZERO_EIGENVALUE_TOL = 1e-8


@dataclass(frozen=True)
class MetricRecipes:
    """Coefficient closures of the auxiliary base problems for one metric."""

    grad_weight: CoefficientFn
    inv_sq_weight: CoefficientFn
    boundary_weights: tuple[float, float]
    spans: tuple[tuple[float, float], ...]


def metric_recipes(spec: WarpedMetricSpec) -> MetricRecipes:
    """Auxiliary problem coefficients for the given warped metric.

    Plain warp g_B + h^2 g_F: gradient and measure weight h^k, fiber term
    lambda * h^(k-2), endpoint measure h^k. Volume-preserving form
    h^(-2k/n) g_B + h^2 g_F, written in the unwarped base coordinates:
    gradient weight h^(2k/n), fiber term lambda * h^(-2) against the plain
    measure, endpoint measure h^(k/n).
    """
    n = float(spec.base_dim)
    k = float(spec.fiber_dim)
    if spec.mode == "plain_warp":
        grad_p, inv_p, bw_p = k, k - 2.0, k
    else:
        grad_p, inv_p, bw_p = 2.0 * k / n, -2.0, k / n
    h_pow = power_fn(spec.warp, bw_p)
    ell = spec.base.collar_length
    return MetricRecipes(
        grad_weight=power_fn(spec.warp, grad_p),
        inv_sq_weight=power_fn(spec.warp, inv_p),
        boundary_weights=(h_pow(0.0), h_pow(ell)),
        spans=transition_spans(spec.warp),
    )


def steklov_spectrum_warped(
    spec: WarpedMetricSpec, top: float, *, n_elements: int = 400
) -> SpectrumWithProvenance:
    """All warped-product Steklov eigenvalues <= top, with multiplicity and sources.

    Fiber eigenvalues are consumed in ascending order; since the smallest
    auxiliary eigenvalue is nondecreasing in the fiber eigenvalue, iteration
    stops at the first fiber branch whose spectrum starts above top, and the
    union collected so far is complete below top.
    """
    if top <= 0.0:
        raise DomainError("top must be positive")
    recipes = metric_recipes(spec)
    tagged: list[tuple[float, EigenSource]] = []
    for fiber_value, fiber_mult in iter_entries(spec.fiber):
        branch = base_dtn_spectrum(
            spec.base,
            recipes.grad_weight,
            float(fiber_value),
            recipes.inv_sq_weight,
            top,
            n_elements=n_elements,
            boundary_weights=recipes.boundary_weights,
            transition_spans=recipes.spans,
        )
        if len(branch) == 0:
            break  # smallest eigenvalue of this and every later branch exceeds top
        for entry in branch.entries:
            for source in entry.sources:
                tagged.append(
                    (
                        entry.value,
                        EigenSource(
                            fiber_value=source.fiber_value,
                            fiber_mult=int(fiber_mult),
                            cross_value=source.cross_value,
                            cross_mult=source.cross_mult,
                            branch=source.branch,
                        ),
                    )
                )
    return merge_tagged(tagged)


def first_eigenvalues(
    spec: WarpedMetricSpec,
    count: int,
    *,
    n_elements: int = 400,
    start_top: float = 1.0,
    max_doublings: int = 60,
):
    """First `count` eigenvalues (with multiplicity), found by doubling the cutoff.

    Returns (values, spectrum) where values has length `count`; the cutoff
    grows until at least count + 1 eigenvalues are certified below it.
    """
    if count < 1:
        raise DomainError("count must be positive")
    top = start_top
    for _ in range(max_doublings):
        spectrum = steklov_spectrum_warped(spec, top, n_elements=n_elements)
        if spectrum.total_multiplicity >= count + 1:
            return spectrum.flatten()[:count], spectrum
        top *= 2.0
    raise NumericError(f"could not certify {count} eigenvalues below top={top}")


@dataclass(frozen=True)
class Sigma1Result:
    """First nonzero eigenvalue of the construction and the branch attaining it."""

    value: float
    active_branch: str  # "lambda0" or "lambda1"
    branch_lambda0: float
    branch_lambda1: float


def sigma1_construction(
    spec: WarpedMetricSpec, *, n_elements: int = 400, zero_tol: float = ZERO_EIGENVALUE_TOL
) -> Sigma1Result:
    """Spectral gap of the warped metric as the minimum over the two candidate branches.

    The gap is min of (a) the first nonzero eigenvalue of the fiber-constant
    branch and (b) the smallest eigenvalue of the first-fiber-mode branch.
    Branch (a) needs only the zero cross-section mode's nonzero eigenvalue
    and the first positive mode's smallest one; branch (b) only the zero
    mode of the fiber eigenvalue, because eigenvalues are nondecreasing in
    both mode parameters.
    """
    if spec.mode != "volume_preserving":
        raise DomainError("sigma1_construction expects a volume_preserving metric")
    recipes = metric_recipes(spec)
    fiber = extend(spec.fiber, 2)
    lambda1 = float(fiber.entries[1][0])

    def aux(fiber_value: float, top: float) -> SpectrumWithProvenance:
        return base_dtn_spectrum(
            spec.base,
            recipes.grad_weight,
            fiber_value,
            recipes.inv_sq_weight,
            top,
            n_elements=n_elements,
            boundary_weights=recipes.boundary_weights,
            transition_spans=recipes.spans,
        )

    def first_above(fiber_value: float, floor: float) -> float:
        top = 1.0
        for _ in range(60):
            for entry in aux(fiber_value, top).entries:
                if entry.value > floor:
                    return entry.value
            top *= 2.0
        raise NumericError(
            f"no eigenvalue above {floor} found below top={top} "
            f"for fiber eigenvalue {fiber_value}"
        )

    # branch (a): first nonzero of the fiber-constant auxiliary spectrum; an
    # interval base with a single Steklov end has only the zero eigenvalue there
    degenerate = spec.base.cross_section.kind == "point" and spec.base.steklov_ends != "both"
    branch_a = math.inf if degenerate else first_above(0.0, zero_tol)
    # branch (b): smallest eigenvalue of the first-fiber-mode auxiliary spectrum
    branch_b = first_above(lambda1, -math.inf)

    if branch_a <= branch_b:
        return Sigma1Result(branch_a, "lambda0", branch_a, branch_b)
    return Sigma1Result(branch_b, "lambda1", branch_a, branch_b)


def lower_bound_C(
    epsilon: float, delta: float, n: int, k: int, lambda1_fiber: float
) -> float:
    """Divergent lower-bound constant min(eps^(delta-1)/8, lambda1 * eps^(1-delta*n/k)/4).

    Requires k/n < delta < 1 and n > k >= 1; below delta = k/n the second
    exponent is nonnegative and the bound no longer diverges as eps -> 0.
    """
    if epsilon <= 0.0:
        raise DomainError("epsilon must be positive")
    if not n > k >= 1:
        raise HypothesisViolationError(f"need n > k >= 1, got n={n}, k={k}")
    if lambda1_fiber <= 0.0:
        raise DomainError("lambda1 of the fiber must be positive")
    if delta >= 1.0:
        raise DomainError("delta must be below 1")
    if delta <= k / n:
        raise HypothesisViolationError(
            f"delta must exceed k/n = {k}/{n}; got delta={delta}"
        )
    first = epsilon ** (delta - 1.0) / 8.0
    second = lambda1_fiber * epsilon ** (1.0 - delta * n / k) / 4.0
    return min(first, second)
