"""Wigner pictures of the evolving wave packets.

The same states that ``states`` evaluates pointwise in x have strikingly
simple phase-space portraits: every displaced squeezed packet is a rigid
Gaussian hill, every number state a ringed Laguerre profile, and the whole
picture just *rotates* about the origin at unit angular speed.  This module
evaluates those portraits three ways and checks them against each other:

* closed forms -- a Gaussian expression for the coherent-squeezed packet
  (written equivalently through the displacement eigenvalue, through the
  centroid, or through the covariance matrix; all three are computed and
  compared on every call), and a Laguerre-polynomial expression for the
  cross function of a pair of number states;
* a direct Fourier quadrature of the defining transform

      W(x, p) = (1/2 pi) Integral psi*(x + y/2) psi(x - y/2) e^{i p y} dy,

  which takes an arbitrary wavefunction callable and serves as the
  module's independent oracle;
* superpositions, assembled as double sums of the cross functions, with
  the imaginary residual asserted small before it is dropped.

Conventions.  Phase-space grids store ``values[i, j] = W(x_range[i],
p_range[j])`` -- row index is position, column index is momentum -- and
the serialisers below write rows in that (row-major) order.  The rotated
coordinates used throughout are

    Q = beta x + epsilon,      P = (p - 2 alpha x - delta) / beta,

with the parameters evolved to the requested time; the area element is
preserved, dQ dP = dx dp, which is what makes the normalisation and
purity integrals below come out grid-independent.

One printed sign deserves a comment: the Laguerre form of the cross
function carries a factor 2^{(n-m)/2} (so each unit of n - m contributes
sqrt(2) (Q - iP)).  With the opposite exponent the m=0, n=1 function
disagrees with the defining quadrature by a factor of 2 and the pair
integral Integral |W_01|^2 dx dp lands at 1/(8 pi) instead of 1/(2 pi);
both checks pin the convention used here.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .ermakov import ErmakovParameters, classical_trajectory, evolve
from .specfun import MAX_DEGREE, laguerre_assoc
from .states import TCSState, covariance

__all__ = [
    "PhaseSpacePoint",
    "PhaseSpaceGrid",
    "tcs_center",
    "wigner_tcs",
    "wigner_numeric",
    "moyal",
    "wigner_superposition",
    "rotate_evolution_check",
    "default_grid",
    "tcs_grid",
    "superposition_grid",
    "grid_normalization",
    "position_marginal",
    "momentum_marginal",
    "purity",
    "grid_to_dict",
    "grid_from_dict",
    "grid_to_json",
    "write_grid_csv",
]

#: Convergence flag threshold for the Fourier quadrature: the run is
#: rejected when the combined discretisation + truncation estimate
#: exceeds this value.
QUADRATURE_TOL = 1e-8


@dataclass(frozen=True)
class PhaseSpacePoint:
    """A single (x, p) argument of the Wigner function.

    Attributes
    ----------
    x, p : float
        Position and momentum; both must be finite.
    """

    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise ValueError("phase-space point must be finite, got (%r, %r)"
                             % (self.x, self.p))


@dataclass(frozen=True, eq=False)
class PhaseSpaceGrid:
    """Wigner data sampled on a rectangular, uniformly spaced mesh.

    Attributes
    ----------
    x_range, p_range : ndarray
        Strictly increasing, uniformly spaced 1D meshes.
    values : ndarray
        Samples with ``values[i, j] = W(x_range[i], p_range[j])``; real
        for state Wigner functions, complex for cross functions.  The
        row index runs over position.
    """

    x_range: np.ndarray
    p_range: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x_range, dtype=float)
        p = np.asarray(self.p_range, dtype=float)
        v = np.asarray(self.values)
        for name, mesh in (("x_range", x), ("p_range", p)):
            if mesh.ndim != 1 or mesh.size < 2:
                raise ValueError("%s must be a 1D mesh with >= 2 points" % name)
            steps = np.diff(mesh)
            if np.any(steps <= 0.0):
                raise ValueError("%s must be strictly increasing" % name)
            if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
                raise ValueError("%s must be uniformly spaced" % name)
        if v.shape != (x.size, p.size):
            raise ValueError(
                "values shape %r does not match (len(x_range), len(p_range))"
                " = (%d, %d)" % (v.shape, x.size, p.size))
        for field, arr in (("x_range", x), ("p_range", p), ("values", v)):
            arr.setflags(write=False)
            object.__setattr__(self, field, arr)

    @property
    def dx(self) -> float:
        return float(self.x_range[1] - self.x_range[0])

    @property
    def dp(self) -> float:
        return float(self.p_range[1] - self.p_range[0])


# ----------------------------------------------------------------------
# shared coordinate helpers
# ----------------------------------------------------------------------

def _rotated_coords(p: ErmakovParameters, x, mom):
    """Return (Q, P) = (beta x + epsilon, (p - 2 alpha x - delta)/beta)."""
    q = p.beta * x + p.epsilon
    pp = (mom - 2.0 * p.alpha * x - p.delta) / p.beta
    return q, pp


def _displacement_eigenvalue(s: TCSState, p: ErmakovParameters) -> complex:
    """The rotating displacement label eta at the instant described by p."""
    return complex(s.zeta) * cmath.exp(2j * p.gamma)


def _tcs_values(s: TCSState, p: ErmakovParameters, x, mom):
    """Vectorised Gaussian form of the packet Wigner function.

    Evaluates the displacement-eigenvalue form only; the scalar
    `wigner_tcs` additionally cross-checks the centroid and covariance
    forms on every call, so grid evaluation can skip the redundancy.
    """
    q, pp = _rotated_coords(p, x, mom)
    eta = _displacement_eigenvalue(s, p)
    dq = q - math.sqrt(2.0) * eta.real
    dp_ = pp - math.sqrt(2.0) * eta.imag
    return np.exp(-(dq * dq + dp_ * dp_)) / math.pi


def tcs_center(s: TCSState, t: float) -> tuple[float, float]:
    """Centroid (<x>, <p>) of the displaced packet at time t.

    The displacement label shifts the bare classical orbit of the
    underlying parameters: the Gaussian hill peaks where both rotated
    coordinates match the label, Q = sqrt(2) Re eta and
    P = sqrt(2) Im eta.
    """
    p = evolve(s.params0, t)
    eta = _displacement_eigenvalue(s, p)
    x_mean = (math.sqrt(2.0) * eta.real - p.epsilon) / p.beta
    p_mean = p.beta * math.sqrt(2.0) * eta.imag + 2.0 * p.alpha * x_mean + p.delta
    return x_mean, p_mean


def wigner_tcs(s: TCSState, pt: PhaseSpacePoint, t: float) -> float:
    """Closed-form Wigner function of the displaced squeezed packet.

    Three algebraically equivalent expressions are evaluated -- through
    the displacement eigenvalue in the rotated coordinates, through the
    centroid, and through the covariance matrix -- and any disagreement
    beyond roundoff raises, since it would mean the coordinate or
    covariance bookkeeping has drifted.

    Parameters
    ----------
    s : TCSState
        Displacement label and initial parameters.
    pt : PhaseSpacePoint
        Evaluation point.
    t : float
        Time; the parameters are evolved internally.

    Returns
    -------
    float
        W(x, p; t), a positive Gaussian of total integral 1.
    """
    p = evolve(s.params0, t)

    # form 1: displacement eigenvalue in rotated coordinates
    w1 = float(_tcs_values(s, p, pt.x, pt.p))

    # form 2: centroid form, exponent collecting the cross term
    x_mean, p_mean = tcs_center(s, t)
    du, dv = pt.x - x_mean, pt.p - p_mean
    bsq = p.beta * p.beta
    expo2 = (dv * dv - 4.0 * p.alpha * dv * du
             + (4.0 * p.alpha * p.alpha + bsq * bsq) * du * du) / bsq
    w2 = math.exp(-expo2) / math.pi

    # form 3: covariance form (det of the second-moment matrix is 1/4)
    cov = covariance(p)
    expo3 = 2.0 * (cov.sigma_x * dv * dv - 2.0 * cov.sigma_px * dv * du
                   + cov.sigma_p * du * du)
    w3 = math.exp(-expo3) / math.pi

    spread = max(abs(w1 - w2), abs(w1 - w3))
    if spread > 1e-10 * (1.0 + abs(w1)):
        raise ArithmeticError(
            "equivalent Wigner forms disagree by %.3e at (x=%g, p=%g, t=%g)"
            % (spread, pt.x, pt.p, t))
    return w1


# ----------------------------------------------------------------------
# defining transform, by quadrature
# ----------------------------------------------------------------------

def wigner_numeric(psi: Callable, pt: PhaseSpacePoint,
                   psi2: Optional[Callable] = None,
                   extent: float = 12.0, nodes: int = 1281):
    """Fourier quadrature of the defining Wigner transform.

    Computes (1/2 pi) Integral psi*(x + y/2) phi(x - y/2) e^{i p y} dy by
    the trapezoid rule on [-extent, extent], where phi defaults to psi
    (ordinary Wigner function) or may be a second wavefunction (cross
    function).  Serves as the module's independent oracle: it knows
    nothing about the closed forms.

    Parameters
    ----------
    psi : callable
        Wavefunction of a single array argument x, returning complex
        values with Gaussian decay.
    pt : PhaseSpacePoint
        Evaluation point.
    psi2 : callable, optional
        Second wavefunction for a cross transform.
    extent : float, optional
        Half-width of the y window.  The integrand decays like
        exp(-beta^2 y^2 / 4) for packets of scale parameter beta, so
        strongly spread states (small beta) need a proportionally wider
        window -- pass something like 12/beta.
    nodes : int, optional
        Number of quadrature nodes (at least 1024; forced odd so that
        the half-resolution error estimate reuses the same samples).

    Returns
    -------
    float or complex
        Real for the single-wavefunction transform (the imaginary part
        of the quadrature is roundoff and is dropped), complex for a
        cross transform.

    Raises
    ------
    ArithmeticError
        When the combined discretisation + window-truncation estimate
        exceeds 1e-8, i.e. the quadrature cannot vouch for the value.
    """
    if nodes < 1024:
        raise ValueError("nodes must be >= 1024, got %d" % nodes)
    if nodes % 2 == 0:
        nodes += 1
    if not (extent > 0.0 and math.isfinite(extent)):
        raise ValueError("extent must be positive and finite")
    other = psi if psi2 is None else psi2
    y, step = np.linspace(-extent, extent, nodes, retstep=True)
    integrand = (np.conj(psi(pt.x + 0.5 * y)) * other(pt.x - 0.5 * y)
                 * np.exp(1j * pt.p * y))
    total = np.trapezoid(integrand, dx=step) / (2.0 * math.pi)
    coarse = np.trapezoid(integrand[::2], dx=2.0 * step) / (2.0 * math.pi)
    # trapezoid error is O(h^2): Richardson difference /3 estimates the
    # fine-grid discretisation error; edge magnitudes estimate the mass
    # cut off by the finite window, assuming no slower-than-linear decay
    discretisation = abs(total - coarse) / 3.0
    truncation = (abs(integrand[0]) + abs(integrand[-1])) * extent / (2.0 * math.pi)
    estimate = discretisation + truncation
    if estimate > QUADRATURE_TOL:
        raise ArithmeticError(
            "Wigner quadrature did not converge: error estimate %.3e "
            "(discretisation %.3e, window truncation %.3e); increase "
            "extent and/or nodes" % (estimate, discretisation, truncation))
    if psi2 is None:
        return float(total.real)
    return complex(total)


# ----------------------------------------------------------------------
# number-state cross functions
# ----------------------------------------------------------------------

def _moyal_values(m: int, n: int, p: ErmakovParameters, x, mom):
    """Vectorised cross function for m <= n at fixed evolved parameters."""
    q, pp = _rotated_coords(p, x, mom)
    rsq = q * q + pp * pp
    order = n - m
    log_amp = 0.5 * (math.lgamma(m + 1) - math.lgamma(n + 1)) \
        + 0.5 * order * math.log(2.0)
    phase = cmath.exp(2j * order * p.gamma) * (-1.0) ** m / math.pi
    core = np.exp(-rsq + log_amp) * laguerre_assoc(m, order, 2.0 * rsq)
    if order == 0:
        return phase * core
    return phase * core * (q - 1j * pp) ** order


def moyal(m: int, n: int, p0: ErmakovParameters, pt: PhaseSpacePoint,
          t: float) -> complex:
    """Cross Wigner function of the m-th and n-th number states.

    The value is the Laguerre closed form in the rotated coordinates,
    with the relative phase 2(n - m) gamma(t) carried explicitly.  Only
    m <= n is evaluated directly; the opposite order follows from the
    Hermitian symmetry W_mn = conj(W_nm) of the defining transform,
    which also sidesteps the negative upper Laguerre index the printed
    form would otherwise request.

    Parameters
    ----------
    m, n : int
        Basis labels, each between 0 and 512.
    p0 : ErmakovParameters
        Initial parameters of the evolving basis.
    pt : PhaseSpacePoint
        Evaluation point.
    t : float
        Time.

    Returns
    -------
    complex
        W_mn(x, p; t); real when m == n.
    """
    for label, k in (("m", m), ("n", n)):
        if not isinstance(k, (int, np.integer)) or k < 0 or k > MAX_DEGREE:
            raise ValueError("%s must be an integer in [0, %d], got %r"
                             % (label, MAX_DEGREE, k))
    if m > n:
        return complex(np.conj(moyal(n, m, p0, pt, t)))
    p = evolve(p0, t)
    return complex(_moyal_values(int(m), int(n), p, pt.x, pt.p))


def _check_coeffs(coeffs) -> list[tuple[complex, int]]:
    """Validate a (coefficient, level) list and its normalisation."""
    pairs = []
    total = 0.0
    for item in coeffs:
        c, n = item
        n = int(n)
        if n < 0 or n > MAX_DEGREE:
            raise ValueError("basis label %d out of range [0, %d]"
                             % (n, MAX_DEGREE))
        c = complex(c)
        pairs.append((c, n))
        total += abs(c) ** 2
    if not pairs:
        raise ValueError("superposition needs at least one term")
    if len({n for _, n in pairs}) != len(pairs):
        raise ValueError("duplicate basis labels in superposition")
    if abs(total - 1.0) > 1e-12:
        raise ValueError("coefficients are not normalized: sum |c|^2 = %.17g"
                         % total)
    return pairs


def _superposition_values(pairs, p: ErmakovParameters, x, mom):
    """Double sum of cross functions at fixed evolved parameters."""
    acc = np.zeros(np.broadcast(x, mom).shape, dtype=complex)
    for cj, nj in pairs:
        for ck, nk in pairs:
            if nj <= nk:
                w = _moyal_values(nj, nk, p, x, mom)
            else:
                w = np.conj(_moyal_values(nk, nj, p, x, mom))
            acc += np.conj(cj) * ck * w
    return acc


def wigner_superposition(coeffs: Sequence, p0: ErmakovParameters,
                         pt: PhaseSpacePoint, t: float) -> float:
    """Wigner function of a finite superposition of number states.

    Parameters
    ----------
    coeffs : sequence of (complex, int)
        Coefficient/label pairs; sum |c|^2 must equal 1 (1e-12) and the
        labels must be distinct.
    p0 : ErmakovParameters
        Initial parameters.
    pt : PhaseSpacePoint
        Evaluation point.
    t : float
        Time.

    Returns
    -------
    float
        The (real) Wigner value; the cross terms combine conjugately, so
        the imaginary residual is pure roundoff -- it is checked against
        1e-10 and dropped.
    """
    pairs = _check_coeffs(coeffs)
    p = evolve(p0, t)
    w = complex(_superposition_values(pairs, p, pt.x, pt.p))
    if abs(w.imag) > 1e-10 * (1.0 + abs(w)):
        raise ArithmeticError(
            "superposition Wigner value has imaginary residual %.3e" % w.imag)
    return w.real


def rotate_evolution_check(coeffs: Sequence, p0: ErmakovParameters,
                           grid: PhaseSpaceGrid, t: float) -> float:
    """Largest violation of the rigid-rotation evolution law on a grid.

    The whole phase-space portrait revolves clockwise at unit angular
    speed: W(x, p; t) = W(x cos t - p sin t, x sin t + p cos t; 0).
    This evaluates both sides of that identity for a superposition state
    over the grid's mesh (the grid's stored values are ignored; it only
    supplies the sampling domain) and returns the maximum absolute
    difference.

    Returns
    -------
    float
        max |W(x, p; t) - W(rotated; 0)| over the mesh.
    """
    pairs = _check_coeffs(coeffs)
    xg, pg = np.meshgrid(grid.x_range, grid.p_range, indexing="ij")
    now = _superposition_values(pairs, evolve(p0, t), xg, pg)
    c, s = math.cos(t), math.sin(t)
    back = _superposition_values(pairs, evolve(p0, 0.0),
                                 xg * c - pg * s, xg * s + pg * c)
    return float(np.max(np.abs(now - back)))


# ----------------------------------------------------------------------
# grids, integrals, serialisation
# ----------------------------------------------------------------------

def default_grid(p0: ErmakovParameters, t: float = 0.0,
                 levels: Sequence[int] = (0,), points: int = 201,
                 spread: float = 5.0,
                 center: Optional[tuple] = None) -> PhaseSpaceGrid:
    """Build a mesh that captures essentially all of a state's mass.

    Centred on the classical centroid at time t (or on an explicit
    ``center`` -- displaced packets peak away from the bare orbit, see
    `tcs_center`), extending ``spread`` packet standard deviations on
    each side, inflated by sqrt(2 n + 1) for the highest populated
    level n (number states widen with the square root of the level).
    Values are zero-filled; pass the grid to an evaluator to populate it.
    """
    if points < 2:
        raise ValueError("points must be >= 2")
    nmax = max(int(n) for n in levels)
    if nmax < 0:
        raise ValueError("levels must be non-negative")
    x_mean, p_mean = (classical_trajectory(p0, t) if center is None
                      else (float(center[0]), float(center[1])))
    cov = covariance(evolve(p0, t))
    scale = math.sqrt(2.0 * nmax + 1.0)
    half_x = spread * math.sqrt(cov.sigma_x) * scale
    half_p = spread * math.sqrt(cov.sigma_p) * scale
    return PhaseSpaceGrid(
        np.linspace(x_mean - half_x, x_mean + half_x, points),
        np.linspace(p_mean - half_p, p_mean + half_p, points),
        np.zeros((points, points)))


def tcs_grid(s: TCSState, grid: PhaseSpaceGrid, t: float) -> PhaseSpaceGrid:
    """Evaluate the packet Wigner function over a grid's mesh."""
    p = evolve(s.params0, t)
    xg, pg = np.meshgrid(grid.x_range, grid.p_range, indexing="ij")
    return PhaseSpaceGrid(grid.x_range, grid.p_range, _tcs_values(s, p, xg, pg))


def superposition_grid(coeffs: Sequence, p0: ErmakovParameters,
                       grid: PhaseSpaceGrid, t: float) -> PhaseSpaceGrid:
    """Evaluate a superposition Wigner function over a grid's mesh.

    The imaginary residual of the double sum is checked against 1e-10
    (relative to the largest value) and dropped, as in the scalar
    evaluator.
    """
    pairs = _check_coeffs(coeffs)
    p = evolve(p0, t)
    xg, pg = np.meshgrid(grid.x_range, grid.p_range, indexing="ij")
    vals = _superposition_values(pairs, p, xg, pg)
    top = float(np.max(np.abs(vals))) if vals.size else 0.0
    worst = float(np.max(np.abs(vals.imag)))
    if worst > 1e-10 * (1.0 + top):
        raise ArithmeticError(
            "superposition Wigner grid has imaginary residual %.3e" % worst)
    return PhaseSpaceGrid(grid.x_range, grid.p_range, vals.real)


def grid_normalization(grid: PhaseSpaceGrid):
    """Integral of the stored values over the whole grid (trapezoid)."""
    inner = np.trapezoid(grid.values, dx=grid.dp, axis=1)
    total = np.trapezoid(inner, dx=grid.dx)
    if np.iscomplexobj(grid.values):
        return complex(total)
    return float(total)


def position_marginal(grid: PhaseSpaceGrid) -> np.ndarray:
    """Integrate over momentum: the position density |psi(x)|^2."""
    return np.trapezoid(grid.values, dx=grid.dp, axis=1)


def momentum_marginal(grid: PhaseSpaceGrid) -> np.ndarray:
    """Integrate over position: the momentum density |psi-hat(p)|^2."""
    return np.trapezoid(grid.values, dx=grid.dx, axis=0)


def purity(grid: PhaseSpaceGrid) -> float:
    """Phase-space purity integral of a real Wigner grid.

    For every pure state the squared Wigner function integrates to
    1/(2 pi); mixtures fall below.  The real part of the stored values
    is used (state grids are real; feeding a cross-function grid here
    is a caller error this routine cannot detect).
    """
    v = np.real(grid.values)
    inner = np.trapezoid(v * v, dx=grid.dp, axis=1)
    return float(np.trapezoid(inner, dx=grid.dx))


def grid_to_dict(grid: PhaseSpaceGrid) -> dict:
    """JSON-ready dict: {x_range, p_range, values} with row-major values.

    ``values[i][j]`` corresponds to ``(x_range[i], p_range[j])`` -- the
    outer list runs over position.  Complex grids store each entry as a
    two-element [real, imag] list.
    """
    v = grid.values
    if np.iscomplexobj(v):
        rows = [[[float(z.real), float(z.imag)] for z in row] for row in v]
    else:
        rows = [[float(z) for z in row] for row in v]
    return {
        "x_range": [float(u) for u in grid.x_range],
        "p_range": [float(u) for u in grid.p_range],
        "values": rows,
    }


def grid_from_dict(payload: dict) -> PhaseSpaceGrid:
    """Inverse of `grid_to_dict`."""
    raw = payload["values"]
    if raw and raw[0] and isinstance(raw[0][0], (list, tuple)):
        values = np.array([[complex(a, b) for a, b in row] for row in raw])
    else:
        values = np.array(raw, dtype=float)
    return PhaseSpaceGrid(np.asarray(payload["x_range"], dtype=float),
                          np.asarray(payload["p_range"], dtype=float),
                          values)


def grid_to_json(grid: PhaseSpaceGrid) -> str:
    """Serialise a grid to a JSON string (row-major values)."""
    return json.dumps(grid_to_dict(grid))


def write_grid_csv(path, grid: PhaseSpaceGrid) -> None:
    """Write (x, p, W) rows, position-major, with 17 significant digits.

    Rows iterate x first (outer), p second (inner), matching the
    row-major ``values`` layout.  Complex grids gain a fourth column
    with the imaginary part.
    """
    complex_vals = bool(np.iscomplexobj(grid.values))
    lines = ["x,p,W_real,W_imag" if complex_vals else "x,p,W"]
    for i, xv in enumerate(grid.x_range):
        for j, pv in enumerate(grid.p_range):
            z = grid.values[i, j]
            if complex_vals:
                lines.append("%.17g,%.17g,%.17g,%.17g"
                             % (xv, pv, z.real, z.imag))
            else:
                lines.append("%.17g,%.17g,%.17g" % (xv, pv, z))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
