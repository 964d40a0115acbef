"""Forward solvers and endpoint data sweeps.

The primary path evaluates u(x, omega) = int_{-1}^{1} g(x, y) f(y) dy by
composite Gauss-Legendre quadrature (so u solves u'' + kappa^2 u = -f
with the outgoing endpoint conditions).  ``fd_oracle`` is an independent
second-order finite-difference discretization of the same boundary value
problem used to cross-check the quadrature path.  ``interface_traces``
and ``check_radiation`` verify the exact interface and radiation
identities that the multi-frequency data analysis rests on.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .model import FrequencyGrid, split_source, wavenumbers
from .greens import green_eval, green_dx
from .quadrature import cell_rule, composite_rule

__all__ = [
    "BoundaryData",
    "TraceReport",
    "source_rule",
    "forward_field",
    "forward_field_dx",
    "boundary_sweep",
    "fd_oracle",
    "interface_traces",
    "check_radiation",
    "write_boundary_csv",
    "read_boundary_csv",
]


@dataclass(frozen=True)
class BoundaryData:
    """Complex endpoint fields u(-1, omega) and u(+1, omega) over a grid."""

    grid: FrequencyGrid
    u_minus: np.ndarray
    u_plus: np.ndarray

    def __post_init__(self):
        um = np.asarray(self.u_minus, dtype=complex)
        up = np.asarray(self.u_plus, dtype=complex)
        if len(um) != len(self.grid) or len(up) != len(self.grid):
            raise ValueError("boundary data length must match the frequency grid")
        um.setflags(write=False)
        up.setflags(write=False)
        object.__setattr__(self, "u_minus", um)
        object.__setattr__(self, "u_plus", up)


def source_rule(f, omega_scale, medium, extra_breaks=(), nodes=16, base_panels=8):
    """Quadrature rule over the support of f resolving kernels that
    oscillate at most like exp(i c_max omega_scale y).

    Splits at the interface, at the source's own breakpoints, and at any
    extra points (e.g. the kink of |x - y|).  Grid sources integrate
    cell by cell instead of with blanket panel counts.
    """
    sup = f.support
    if sup is None:
        return np.empty(0), np.empty(0)
    lo, hi = sup
    rate = medium.c_max * omega_scale
    kind = getattr(f, "kind", None) or getattr(f.parent, "kind", None)
    breaks = set(f.breakpoints)
    breaks.update(t for t in extra_breaks if lo < t < hi)
    if 0.0 > lo and 0.0 < hi:
        breaks.add(0.0)
    if kind == "grid":
        edges = np.unique(np.concatenate([[lo, hi], sorted(breaks)]))
        return cell_rule(edges, osc_rate=rate, nodes=max(4, nodes // 2))
    return composite_rule(lo, hi, sorted(breaks), osc_rate=rate,
                          base_panels=base_panels, nodes=nodes)


def forward_field(f, medium, omega, x, nodes=16, base_panels=8):
    """u(x, omega) for a single evaluation point x in [-1, 1]."""
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if abs(x) > 1.0:
        raise ValueError("evaluation point outside [-1, 1]")
    y, w = source_rule(f, omega, medium, extra_breaks=(x,), nodes=nodes,
                       base_panels=base_panels)
    if len(y) == 0:
        return 0.0 + 0.0j
    return complex(np.sum(w * green_eval(x, y, medium, omega) * f(y)))


def forward_field_dx(f, medium, omega, x, nodes=16, base_panels=8):
    """Analytic derivative u'(x, omega), differentiating g under the integral."""
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    y, w = source_rule(f, omega, medium, extra_breaks=(x,), nodes=nodes,
                       base_panels=base_panels)
    if len(y) == 0:
        return 0.0 + 0.0j
    return complex(np.sum(w * green_dx(x, y, medium, omega) * f(y)))


def _endpoint_kernel(sign, omegas, y, medium):
    # g(sign*1, y; omega) broadcast over omegas (column) and y (row)
    k1 = medium.c1 * omegas[:, None]
    k2 = medium.c2 * omegas[:, None]
    y = y[None, :]
    if sign > 0:
        same = 1j * (k1 - k2) / (2.0 * k1 * (k1 + k2)) * np.exp(1j * k1 * (1.0 + y)) \
            + 1j / (2.0 * k1) * np.exp(1j * k1 * (1.0 - y))
        other = 1j / (k1 + k2) * np.exp(1j * (-k2 * y + k1))
        return np.where(y > 0, same, other)
    same = 1j * (k2 - k1) / (2.0 * k2 * (k1 + k2)) * np.exp(-1j * k2 * (-1.0 + y)) \
        + 1j / (2.0 * k2) * np.exp(1j * k2 * (1.0 + y))
    other = 1j / (k1 + k2) * np.exp(1j * (k1 * y + k2))
    return np.where(y > 0, other, same)


def boundary_sweep(f, medium, grid, nodes=16, base_panels=8, chunk=4096):
    """Endpoint data u(+-1, omega) for every frequency of the grid.

    One quadrature rule resolved at the largest frequency serves the
    whole sweep; frequencies are independent (evaluated in blocks to
    bound the kernel matrix) and assembled in grid order.
    """
    om = grid.omegas
    y, w = source_rule(f, float(om[-1]), medium, nodes=nodes, base_panels=base_panels)
    if len(y) == 0:
        z = np.zeros(len(om), dtype=complex)
        return BoundaryData(grid, z, z.copy())
    fw = w * f(y)
    u_minus = np.empty(len(om), dtype=complex)
    u_plus = np.empty(len(om), dtype=complex)
    for i in range(0, len(om), chunk):
        blk = om[i:i + chunk]
        u_minus[i:i + chunk] = _endpoint_kernel(-1, blk, y, medium) @ fw
        u_plus[i:i + chunk] = _endpoint_kernel(+1, blk, y, medium) @ fw
    return BoundaryData(grid, u_minus, u_plus)


def fd_oracle(f, medium, omega, nodes):
    """Second-order finite-difference solve of u'' + kappa^2 u = -f.

    ``nodes`` counts intervals of the uniform grid on [-1, 1] and must be
    even so x = 0 is a grid node (the interface node uses the mean of the
    one-sided kappa^2 values).  The outgoing conditions are closed with
    one-sided second-order stencils; the banded complex system is solved
    directly.  Returns (x, u).
    """
    if nodes < 64:
        raise ValueError("need at least 64 intervals")
    if nodes % 2:
        raise ValueError("interval count must be even so x = 0 is a node")
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    k1, k2 = wavenumbers(medium, omega)
    x = np.linspace(-1.0, 1.0, nodes + 1)
    h = 2.0 / nodes
    ksq = np.where(x > 0, k1 ** 2, k2 ** 2).astype(complex)
    ksq[nodes // 2] = 0.5 * (k1 ** 2 + k2 ** 2)

    n_pts = nodes + 1
    ab = np.zeros((5, n_pts), dtype=complex)  # two bands each side
    rhs = np.zeros(n_pts, dtype=complex)
    idx = np.arange(1, nodes)
    ab[2, idx] = ksq[idx] - 2.0 / h ** 2
    ab[1, idx + 1] = 1.0 / h ** 2
    ab[3, idx - 1] = 1.0 / h ** 2
    rhs[idx] = -f(x[idx])
    # u'(-1) + i k2 u(-1) = 0
    ab[2, 0] = -3.0 / (2.0 * h) + 1j * k2
    ab[1, 1] = 4.0 / (2.0 * h)
    ab[0, 2] = -1.0 / (2.0 * h)
    # u'(1) - i k1 u(1) = 0
    ab[2, n_pts - 1] = 3.0 / (2.0 * h) - 1j * k1
    ab[3, n_pts - 2] = -4.0 / (2.0 * h)
    ab[4, n_pts - 3] = 1.0 / (2.0 * h)
    try:
        u = solve_banded((2, 2), ab, rhs)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"singular finite-difference system at omega={omega}, nodes={nodes}") from exc
    return x, u


@dataclass(frozen=True)
class TraceReport:
    """Field and derivative traces at the interface against their
    half-line transform predictions.

    ``z_measured`` holds the four impedance combinations
    u'(0) - i*k1*u(0), u'(0) + i*k2*u(0), u'(0) + i*k1*u(0),
    u'(0) - i*k2*u(0) formed from the quadrature traces;
    ``z_predicted`` the same combinations expressed through the
    half-line transforms of the split source.
    """

    u0: complex
    du0: complex
    u0_predicted: complex
    du0_predicted: complex
    z_measured: tuple
    z_predicted: tuple
    residuals: np.ndarray  # |measured - predicted| for u0, du0, z1..z4

    @property
    def max_residual(self):
        return float(np.max(self.residuals))


def interface_traces(f, medium, omega, nodes=16, base_panels=8):
    """Quadrature traces u(0), u'(0) and their transform predictions."""
    from .fourier import halfline_ft

    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    k1, k2 = wavenumbers(medium, omega)
    u0 = forward_field(f, medium, omega, 0.0, nodes=nodes, base_panels=base_panels)
    du0 = forward_field_dx(f, medium, omega, 0.0, nodes=nodes, base_panels=base_panels)

    pair = split_source(f)
    f1m = halfline_ft(pair, "right", -k1, nodes=nodes, base_panels=base_panels)
    f2p = halfline_ft(pair, "left", k2, nodes=nodes, base_panels=base_panels)

    u0_pred = 1j / (k1 + k2) * (f1m + f2p)
    du0_pred = (k2 * f1m - k1 * f2p) / (k1 + k2)
    z_meas = (
        du0 - 1j * k1 * u0,
        du0 + 1j * k2 * u0,
        du0 + 1j * k1 * u0,
        du0 - 1j * k2 * u0,
    )
    z_pred = (
        f1m,
        -f2p,
        ((k2 - k1) * f1m - 2.0 * k1 * f2p) / (k1 + k2),
        (2.0 * k2 * f1m + (k2 - k1) * f2p) / (k1 + k2),
    )
    res = np.array(
        [abs(u0 - u0_pred), abs(du0 - du0_pred)]
        + [abs(m - p) for m, p in zip(z_meas, z_pred)]
    )
    return TraceReport(u0, du0, u0_pred, du0_pred, z_meas, z_pred, res)


def check_radiation(f, medium, omega, nodes=16, base_panels=8):
    """Outgoing-condition residuals (|u'(-1) + i k2 u(-1)|, |u'(1) - i k1 u(1)|)."""
    k1, k2 = wavenumbers(medium, omega)
    um = forward_field(f, medium, omega, -1.0, nodes=nodes, base_panels=base_panels)
    dum = forward_field_dx(f, medium, omega, -1.0, nodes=nodes, base_panels=base_panels)
    up = forward_field(f, medium, omega, 1.0, nodes=nodes, base_panels=base_panels)
    dup = forward_field_dx(f, medium, omega, 1.0, nodes=nodes, base_panels=base_panels)
    return abs(dum + 1j * k2 * um), abs(dup - 1j * k1 * up)


CSV_HEADER = ["omega", "re_u_minus", "im_u_minus", "re_u_plus", "im_u_plus"]


def write_boundary_csv(data, path):
    """Endpoint data as CSV, full double precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for om, um, up in zip(data.grid.omegas, data.u_minus, data.u_plus):
            writer.writerow([f"{v:.17g}" for v in (om, um.real, um.imag, up.real, up.imag)])


def read_boundary_csv(path, K=None):
    """Read endpoint data written by ``write_boundary_csv``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r} in {path}")
        rows = [[float(v) for v in row] for row in reader if row]
    arr = np.asarray(rows, dtype=float)
    if arr.size == 0:
        raise ValueError(f"no data rows in {path}")
    om = arr[:, 0]
    grid = FrequencyGrid(om, K if K is not None else float(om[-1]))
    return BoundaryData(grid, arr[:, 1] + 1j * arr[:, 2], arr[:, 3] + 1j * arr[:, 4])
