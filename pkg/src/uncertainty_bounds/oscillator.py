"""One-dimensional function-space examples.

Two unit conventions are used and kept apart:

* harmonic oscillator ``H = p^2 + x^2`` (hbar = 1, m = 1/2, K = 2) whose
  eigenfunctions are the orthonormal Hermite functions ``phi_n`` with
  energies ``2n + 1``;
* anharmonic oscillator ``H = -d^2/dx^2 + lam x^4`` with a scaled Gaussian
  trial state ``(k/pi)^(1/4) exp(-k x^2 / 2)``.

Integrals use composite Gauss-Legendre panels. Panel edges always include
``-pi, 0, pi`` so the truncated trial state and half-line integrals carry
no straddling-panel error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import EvennessViolated, PreconditionViolated
from .hilbert import Observable

DEFAULT_HALF_WIDTH = 10.0
DEFAULT_PANEL = 0.5
DEFAULT_ORDER = 24
NORM_DEFICIT_TOL = 1e-6
EVEN_TOL = 1e-8


@lru_cache(maxsize=None)
def _reference_panel(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    # barycentric differentiation matrix on the Legendre nodes
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    bw = 1.0 / np.prod(diff, axis=1)
    D = (bw[None, :] / bw[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    for arr in (x, w, D):
        arr.setflags(write=False)
    return x, w, D


@dataclass(frozen=True, eq=False)
class Grid:
    """Composite Gauss-Legendre rule: ``order`` nodes on each panel."""

    edges: np.ndarray
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def interval(self) -> tuple[float, float]:
        return float(self.edges[0]), float(self.edges[-1])

    @property
    def is_symmetric(self) -> bool:
        return bool(np.allclose(self.nodes, -self.nodes[::-1], rtol=0, atol=1e-13))

    def integrate(self, values) -> complex | float:
        out = np.dot(self.weights, values)
        return out if np.iscomplexobj(out) else float(out)

    def derivative(self, samples: np.ndarray) -> np.ndarray:
        """Spectral derivative of piecewise-smooth samples, panel by panel."""
        _, _, D = _reference_panel(self.order)
        h = np.diff(self.edges)
        s = np.asarray(samples).reshape(len(h), self.order)
        return ((s @ D.T) * (2.0 / h)[:, None]).reshape(-1)

    def refined(self) -> "Grid":
        """Same interval with every panel split in two."""
        mids = 0.5 * (self.edges[:-1] + self.edges[1:])
        edges = np.sort(np.concatenate([self.edges, mids]))
        return _grid_from_edges(edges, self.order)


def _grid_from_edges(edges: np.ndarray, order: int) -> Grid:
    x, w, _ = _reference_panel(order)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (b - a) * x[None, :] + 0.5 * (a + b)).reshape(-1)
    weights = (0.5 * (b - a) * w[None, :]).reshape(-1)
    return Grid(edges=edges, order=order, nodes=nodes, weights=weights)


def make_grid(half_width: float = DEFAULT_HALF_WIDTH, panel: float = DEFAULT_PANEL,
              order: int = DEFAULT_ORDER, breakpoints: Sequence[float] = (-math.pi, 0.0, math.pi)) -> Grid:
    """Symmetric grid on ``[-half_width, half_width]``.

    Panels are at most ``panel`` wide and never straddle a breakpoint.
    """
    if half_width <= 0 or panel <= 0 or order < 2:
        raise ValueError("half_width and panel must be positive, order >= 2")
    cuts = [-half_width, half_width] + [float(p) for p in breakpoints if -half_width < p < half_width]
    cuts = np.unique(np.round(np.array(cuts), 15))
    edges = [cuts[0]]
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        n = max(1, math.ceil((hi - lo) / panel - 1e-12))
        edges.extend(lo + (hi - lo) * np.arange(1, n + 1) / n)
    edges = np.array(edges)
    # exact mirror symmetry keeps parity checks meaningful
    edges = 0.5 * (edges - edges[::-1])
    return _grid_from_edges(edges, order)


@lru_cache(maxsize=8)
def default_grid() -> Grid:
    return make_grid()


@dataclass(frozen=True, eq=False)
class FunctionState:
    grid: Grid
    samples: np.ndarray
    support: tuple[float, float]
    label: str = ""

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.complex128)
        if s.shape != self.grid.nodes.shape:
            raise ValueError("samples do not match the grid")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def norm2(self) -> float:
        return float(self.grid.integrate(np.abs(self.samples) ** 2))

    def inner(self, other: "FunctionState") -> complex:
        """``<self|other>`` by quadrature."""
        return complex(self.grid.integrate(np.conj(self.samples) * other.samples))

    def scaled(self, c: complex) -> "FunctionState":
        return FunctionState(self.grid, c * self.samples, self.support, self.label)


# ---------------------------------------------------------------------------
# harmonic oscillator H = p^2 + x^2


def hermite_functions(nmax: int, x: np.ndarray) -> np.ndarray:
    """Rows ``phi_0 .. phi_nmax`` evaluated at ``x`` (stable three-term recurrence)."""
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1, x.size))
    out[0] = math.pi**-0.25 * np.exp(-0.5 * x**2)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, nmax):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_derivative(n: int, x: np.ndarray) -> np.ndarray:
    """``phi_n' = sqrt(n/2) phi_{n-1} - sqrt((n+1)/2) phi_{n+1}``."""
    phi = hermite_functions(n + 1, x)
    d = -math.sqrt((n + 1) / 2) * phi[n + 1]
    if n > 0:
        d = d + math.sqrt(n / 2) * phi[n - 1]
    return d


def hermite_state(n: int, grid: Grid | None = None) -> FunctionState:
    """Normalized eigenfunction ``phi_n`` of ``p^2 + x^2`` (energy ``2n + 1``)."""
    grid = grid or default_grid()
    if n < 0:
        raise ValueError("n must be non-negative")
    st = FunctionState(grid, hermite_functions(n, grid.nodes)[n], grid.interval, f"phi_{n}")
    deficit = abs(1.0 - st.norm2)
    if deficit > NORM_DEFICIT_TOL:
        raise PreconditionViolated(f"grid too narrow for phi_{n}: norm deficit {deficit:.2e}")
    return st


def _ground_moments(grid: Grid):
    phi0 = hermite_functions(0, grid.nodes)[0]
    return phi0, float(grid.integrate(grid.nodes**2 * phi0**2))


def deviation_function(kind: str, grid: Grid | None = None) -> FunctionState:
    """``(X - <X>) phi_0`` for X in {x_squared, p, p_squared, x}.

    Momentum is ``-i d/dx`` applied through the Hermite derivative
    recurrence; means come from quadrature.
    """
    grid = grid or default_grid()
    x = grid.nodes
    phi0 = hermite_functions(0, x)[0]
    if kind == "x_squared":
        act = x**2 * phi0
    elif kind == "x":
        act = x * phi0
    elif kind == "p":
        act = -1j * hermite_derivative(0, x)
    elif kind == "p_squared":
        # phi_0'' = (x^2 - 1) phi_0
        act = -(x**2 - 1.0) * phi0
    else:
        raise ValueError(f"unknown kind {kind!r}")
    mean = grid.integrate(phi0 * act)
    dev = act - mean * phi0
    return FunctionState(grid, dev, grid.interval, f"dev[{kind}]")


def trial_state(eta: float, grid: Grid | None = None) -> FunctionState:
    """``(sin x + eta cos(3x/2)) / sqrt((1 + eta^2) pi)`` on [-pi, pi], zero outside.

    ``eta = inf`` gives the pure ``cos(3x/2)`` limit.
    """
    grid = grid or default_grid()
    lo, hi = grid.interval
    if lo > -math.pi or hi < math.pi:
        raise PreconditionViolated("grid must cover [-pi, pi]")
    x = grid.nodes
    inside = np.abs(x) <= math.pi
    if math.isinf(eta):
        vals = np.cos(1.5 * x) / math.sqrt(math.pi)
    else:
        vals = (np.sin(x) + eta * np.cos(1.5 * x)) / math.sqrt((1 + eta**2) * math.pi)
    return FunctionState(grid, np.where(inside, vals, 0.0), (-math.pi, math.pi), f"trial({eta:g})")


def _box_state(fn, grid: Grid, label: str) -> FunctionState:
    x = grid.nodes
    vals = np.where(np.abs(x) <= math.pi, fn(x) / math.sqrt(math.pi), 0.0)
    return FunctionState(grid, vals, (-math.pi, math.pi), label)


def bound17_eta(eta: float, grid: Grid | None = None) -> float:
    """``2 |<Psi_A|Psi_N>| |<Psi_B|Psi_N>|`` for A = x^2, B = p on phi_0."""
    grid = grid or default_grid()
    aux = trial_state(eta, grid)
    dA = deviation_function("x_squared", grid)
    dB = deviation_function("p", grid)
    return 2 * abs(dA.inner(aux)) * abs(dB.inner(aux))


def bound17_closed(eta: float, grid: Grid | None = None) -> float:
    """Parity-reduced form ``eta |I1 I2| / ((1 + eta^2) pi)``.

    ``I1 = int phi_1 sin x`` and ``I2 = int phi_2 cos(3x/2)`` over [-pi, pi].
    """
    grid = grid or default_grid()
    I1, I2 = overlap_integrals(grid)
    return abs(eta * I1 * I2) / ((1 + eta**2) * math.pi)


def overlap_integrals(grid: Grid | None = None) -> tuple[float, float]:
    grid = grid or default_grid()
    x = grid.nodes
    phi = hermite_functions(2, x)
    inside = np.abs(x) <= math.pi
    I1 = grid.integrate(np.where(inside, phi[1] * np.sin(x), 0.0))
    I2 = grid.integrate(np.where(inside, phi[2] * np.cos(1.5 * x), 0.0))
    return float(I1), float(I2)


def eta_scan(etas: Sequence[float], grid: Grid | None = None) -> np.ndarray:
    grid = grid or default_grid()
    return np.array([bound17_eta(float(e), grid) for e in etas])


def split_aux_bound(grid: Grid | None = None, swap: bool = False) -> float:
    """Two-state product bound with the two halves of the trial state.

    ``N1 = cos(3x/2)/sqrt(pi)`` pairs with ``x^2``, ``N2 = sin(x)/sqrt(pi)``
    with ``p``; ``swap=True`` exchanges them.
    """
    grid = grid or default_grid()
    n1 = _box_state(lambda x: np.cos(1.5 * x), grid, "N1")
    n2 = _box_state(np.sin, grid, "N2")
    if swap:
        n1, n2 = n2, n1
    dA = deviation_function("x_squared", grid)
    dB = deviation_function("p", grid)
    return abs(dA.inner(n1)) * abs(dB.inner(n2))


def exact_product(kind: str = "x_squared,p") -> float:
    """Exact ``d(x^2) dp`` (or ``d(p^2) dx``) on the ground state: 1/2."""
    if kind not in ("x_squared,p", "p_squared,x"):
        raise ValueError(kind)
    return 0.5


def _mirror(samples: np.ndarray) -> np.ndarray:
    return samples[::-1]


def half_line_product_bound(devA: FunctionState, devB: FunctionState, tol: float = EVEN_TOL) -> float:
    """Cauchy-Schwarz restricted to x > 0, lifted back to full-line spreads.

    Requires ``|devA|^2`` and ``|devB|^2`` to be even. Then each half-line
    norm is half the full norm, so ``dA dB >= 2 |int_0^inf conj(devA) devB|``.
    """
    grid = devA.grid
    if devB.grid is not grid:
        raise ValueError("deviation functions must share a grid")
    if not grid.is_symmetric:
        raise EvennessViolated("grid is not mirror-symmetric; parity cannot be checked")
    for name, d in (("devA", devA), ("devB", devB)):
        sq = np.abs(d.samples) ** 2
        err = np.max(np.abs(sq - _mirror(sq)))
        if err > tol:
            raise EvennessViolated(f"|{name}|^2 is not even (max asymmetry {err:.2e})")
    pos = grid.nodes > 0
    half = np.dot(grid.weights[pos], np.conj(devA.samples[pos]) * devB.samples[pos])
    return float(2 * abs(half))


def half_line_fraction(dev: FunctionState) -> float:
    """``int_0^inf |dev|^2`` divided by the full-line norm squared."""
    pos = dev.grid.nodes > 0
    return float(np.dot(dev.grid.weights[pos], np.abs(dev.samples[pos]) ** 2) / dev.norm2)


def oscillator_matrices(nlevels: int) -> dict[str, Observable]:
    """T = p^2, V = x^2 and H = T + V in the lowest ``nlevels`` Hermite functions.

    Squares are formed in a larger space before truncation so every retained
    matrix element is exact.
    """
    n = nlevels + 2
    a = np.diag(np.sqrt(np.arange(1, n)), k=1).astype(np.complex128)
    x = (a + a.conj().T) / math.sqrt(2)
    p = 1j * (a.conj().T - a) / math.sqrt(2)
    T = (p @ p)[:nlevels, :nlevels]
    V = (x @ x)[:nlevels, :nlevels]
    return {"T": Observable(T, "T"), "V": Observable(V, "V"), "H": Observable(T + V, "H"),
            "x": Observable(x[:nlevels, :nlevels], "x"), "p": Observable(p[:nlevels, :nlevels], "p")}


# ---------------------------------------------------------------------------
# anharmonic oscillator H = -d^2/dx^2 + lam x^4, scaled Gaussian trial state


@dataclass(frozen=True)
class ScaledGaussianReport:
    lam: float
    k: float
    meanT: float
    meanV: float
    deltaT: float
    deltaV: float
    virial_satisfied: bool

    @property
    def gap(self) -> float:
        return abs(self.deltaT - self.deltaV)


def gaussian_energy(k: float, lam: float) -> float:
    """Closed-form ``<T> + <V> = k/2 + 3 lam / (4 k^2)``."""
    return k / 2 + 3 * lam / (4 * k**2)


def virial_optimal_k(lam: float) -> float:
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam!r}")
    return (3 * lam) ** (1 / 3)


def _gaussian_grid(k: float) -> Grid:
    # psi^2 ~ exp(-k x^2); x^8 moments need the tail below ~1e-25
    half = max(DEFAULT_HALF_WIDTH, math.sqrt(60.0 / k))
    panel = min(DEFAULT_PANEL, 2.0 / math.sqrt(k))
    return make_grid(half, panel, DEFAULT_ORDER, breakpoints=(0.0,))


def scaled_gaussian_report(lam: float, k: float, virial_tol: float = 1e-8) -> ScaledGaussianReport:
    """Means and spreads of T and V for the scaled Gaussian, by quadrature."""
    if not (lam > 0 and k > 0):
        raise ValueError("lambda and k must be positive")
    grid = _gaussian_grid(k)
    x = grid.nodes
    psi = (k / math.pi) ** 0.25 * np.exp(-0.5 * k * x**2)
    t_psi = -(k**2 * x**2 - k) * psi  # -psi''
    v_psi = lam * x**4 * psi
    meanT = grid.integrate(psi * t_psi)
    meanV = grid.integrate(psi * v_psi)
    dT = math.sqrt(max(grid.integrate(t_psi**2) - meanT**2, 0.0))
    dV = math.sqrt(max(grid.integrate(v_psi**2) - meanV**2, 0.0))
    return ScaledGaussianReport(lam, k, meanT, meanV, dT, dV, abs(meanT - 2 * meanV) <= virial_tol)


def gaussian_state(k: float, grid: Grid | None = None) -> FunctionState:
    grid = grid or _gaussian_grid(k)
    psi = (k / math.pi) ** 0.25 * np.exp(-0.5 * k * grid.nodes**2)
    return FunctionState(grid, psi, grid.interval, f"gauss({k:g})")


def stationarity_diagnostic(psi: FunctionState, potential) -> float:
    """``|dT - dV|`` with ``T = -d^2/dx^2`` and ``V`` given by its samples.

    Zero for eigenstates of ``T + V``. The kinetic operator is applied with
    the grid's spectral derivative.
    """
    grid = psi.grid
    v = np.asarray(potential, dtype=float)
    if v.shape != grid.nodes.shape:
        raise ValueError("potential samples do not match the grid")
    s = psi.samples
    t_s = -grid.derivative(grid.derivative(s))
    v_s = v * s

    def spread(o):
        mean = grid.integrate(np.conj(s) * o).real
        return math.sqrt(max(grid.integrate(np.abs(o) ** 2) - mean**2, 0.0))

    return abs(spread(t_s) - spread(v_s))
