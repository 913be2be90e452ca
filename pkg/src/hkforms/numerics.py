"""Shared numerical machinery: finite differences, quadrature, linear algebra.

Everything here is dimension-agnostic plumbing used by the geometry modules:
high-order finite-difference stencils (Fornberg weights), Richardson-extrapolated
partial derivatives, adaptive Simpson quadrature with endpoint substitutions for
improper integrals, SVD nullspaces and subspace distances, and pointwise Hodge
duality for 2-forms on 4-dimensional coordinate patches.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

def fd_weights(x0: float, xs: Sequence[float], m: int) -> np.ndarray:
    """Fornberg weights for the m-th derivative at x0 from nodes xs."""
    xs = np.asarray(xs, dtype=float)
    n = len(xs)
    if m >= n:
        raise ValueError("need more nodes than derivative order")
    c = np.zeros((n, m + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = xs[0] - x0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


def grid_derivative(values: np.ndarray, h: float, order: int = 6) -> np.ndarray:
    """First derivative along axis 0 of uniformly gridded values.

    Uses centered stencils of accuracy `order` in the interior and skewed
    stencils of the same width near the edges, so the error is O(h^order)
    uniformly.  Works on arrays of matrices (derivative taken entrywise).
    """
    npts = values.shape[0]
    width = order + 1
    if npts < width:
        raise ValueError(f"grid too coarse: need at least {width} nodes")
    half = order // 2
    out = np.zeros_like(values)
    # interior: centered stencil applied by shifted slices
    w = fd_weights(0.0, np.arange(-half, half + 1) * h, 1)
    acc = np.zeros_like(values[half:npts - half])
    for j, wj in enumerate(w):
        acc = acc + wj * values[j:npts - 2 * half + j]
    out[half:npts - half] = acc
    # edges: skewed stencils of the same width
    for i in range(half):
        w = fd_weights(i * h, np.arange(width) * h, 1)
        out[i] = np.tensordot(w, values[:width], axes=(0, 0))
        w = fd_weights((npts - 1 - i) * h, (npts - width + np.arange(width)) * h, 1)
        out[npts - 1 - i] = np.tensordot(w, values[npts - width:], axes=(0, 0))
    return out


def partial_derivative(f: Callable[[np.ndarray], float], x: np.ndarray, axis: int,
                       h: float = 1e-4) -> float:
    """Richardson-extrapolated central difference of a scalar function."""
    e = np.zeros_like(x, dtype=float)
    e[axis] = 1.0

    def central(step):
        return (f(x + step * e) - f(x - step * e)) / (2.0 * step)

    d1 = central(h)
    d2 = central(h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def exterior_derivative_at(components: Callable[[np.ndarray], dict], x: np.ndarray,
                           ncoords: int, h: float = 1e-4) -> dict:
    """Finite-difference exterior derivative of a form field on R^ncoords.

    `components` maps a point to {sorted index tuple: coefficient}.  Returns
    the (p+1)-form components at x, each partial Richardson-extrapolated.
    """
    base = components(np.asarray(x, dtype=float))
    keys = sorted(base.keys())
    out: dict = {}
    for key in keys:
        for mu in range(ncoords):
            if mu in key:
                continue
            dmu = partial_derivative(lambda p, k=key: components(p)[k], np.asarray(x, float), mu, h)
            pos = sum(1 for idx in key if idx < mu)
            merged = tuple(sorted(key + (mu,)))
            out[merged] = out.get(merged, 0.0) + (-1.0) ** pos * dmu
    return out


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-10, max_depth: int = 48,
                     rel: float = 0.0) -> float:
    """Adaptive Simpson quadrature with the usual Richardson correction.

    `tol` is absolute; when `rel` is nonzero the effective tolerance is
    floored at rel * |initial estimate| so that large integrals do not force
    full-depth recursion.
    """
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        if depth <= 0:
            return left + right
        if abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (recurse(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(m, b, fm, frm, fb, right, tol / 2.0, depth - 1))

    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    if rel > 0.0:
        tol = max(tol, rel * abs(whole))
    return recurse(a, b, fa, fm, fb, whole, tol, max_depth)


def integrate_endpoint_singular(f: Callable[[float], float], a: float, b: float,
                                singular_at: float | None = None,
                                tol: float = 1e-10) -> float:
    """Integrate f over (a, b) with a power-law singularity at one finite end.

    Substitutes t = log(x - a) (or log(b - x)), which turns integrable
    power laws into smooth exponentially-weighted integrands.
    """
    if singular_at is None:
        return adaptive_simpson(f, a, b, tol)
    if not (math.isclose(singular_at, a) or math.isclose(singular_at, b)):
        raise ValueError("singular endpoint must be a or b")
    # the cutoff truncates delta^{p+1}-size mass for integrable powers p > -1
    lo, hi = math.log(1e-30 * (b - a)), math.log(b - a)
    if math.isclose(singular_at, a):
        return adaptive_simpson(lambda t: f(a + math.exp(t)) * math.exp(t), lo, hi, tol)
    return adaptive_simpson(lambda t: f(b - math.exp(t)) * math.exp(t), lo, hi, tol)


def integrate_to_infinity(f: Callable[[float], float], a: float, scale: float = 1.0,
                          tol: float = 1e-10) -> float:
    """Integrate f over (a, inf) via the rational substitution x = a + s*u/(1-u)."""
    def g(u):
        if u >= 1.0:
            return 0.0
        x = a + scale * u / (1.0 - u)
        return f(x) * scale / (1.0 - u) ** 2

    return adaptive_simpson(g, 0.0, 1.0 - 1e-14, tol)


def composite_simpson(values: np.ndarray, h: float) -> complex:
    """Composite Simpson rule on a uniform grid (odd node count required)."""
    n = values.shape[0]
    if n < 3 or n % 2 == 0:
        raise ValueError("composite Simpson needs an odd number of nodes")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return (h / 3.0) * np.tensordot(w, values, axes=(0, 0))


# ---------------------------------------------------------------------------
# fits and linear algebra
# ---------------------------------------------------------------------------

def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log|y| against log x."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.abs(np.asarray(ys, dtype=float)))
    A = np.vstack([lx, np.ones_like(lx)]).T
    slope, _ = np.linalg.lstsq(A, ly, rcond=None)[0]
    return float(slope)


def nullspace(A: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (columns) of the nullspace of A, by SVD."""
    A = np.atleast_2d(A)
    _, s, vt = np.linalg.svd(A)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * max(smax, 1.0)))
    return vt[rank:].conj().T


def subspace_distance(U: np.ndarray, V: np.ndarray) -> float:
    """Operator-norm distance between the orthogonal projectors onto col(U), col(V)."""
    qu, _ = np.linalg.qr(U)
    qv, _ = np.linalg.qr(V)
    pu = qu @ qu.conj().T
    pv = qv @ qv.conj().T
    return float(np.linalg.norm(pu - pv, 2))


def orthonormal_projector(rows: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Orthogonal projector onto the nullspace of the given row constraints."""
    N = nullspace(rows, rtol)
    return N @ N.conj().T


# ---------------------------------------------------------------------------
# pointwise Hodge duality on 4-dimensional patches
# ---------------------------------------------------------------------------

_EPS4 = np.zeros((4, 4, 4, 4))
for _perm in [(0, 1, 2, 3), (0, 2, 3, 1), (0, 3, 1, 2), (1, 0, 3, 2), (1, 2, 0, 3),
              (1, 3, 2, 0), (2, 0, 1, 3), (2, 1, 3, 0), (2, 3, 0, 1), (3, 0, 2, 1),
              (3, 1, 0, 2), (3, 2, 1, 0)]:
    _EPS4[_perm] = 1.0
for _perm in [(0, 1, 3, 2), (0, 2, 1, 3), (0, 3, 2, 1), (1, 0, 2, 3), (1, 2, 3, 0),
              (1, 3, 0, 2), (2, 0, 3, 1), (2, 1, 0, 3), (2, 3, 1, 0), (3, 0, 1, 2),
              (3, 1, 2, 0), (3, 2, 0, 1)]:
    _EPS4[_perm] = -1.0


def hodge_star_2form(beta: np.ndarray, g: np.ndarray, orientation: float = 1.0) -> np.ndarray:
    """Hodge dual of a 2-form (antisymmetric 4x4 coefficient matrix).

    `g` is the metric in the same coordinates; `orientation` is the sign of
    the coordinate frame against the chosen volume orientation.
    """
    ginv = np.linalg.inv(g)
    beta_up = ginv @ beta @ ginv.T
    vol = orientation * math.sqrt(abs(np.linalg.det(g)))
    return 0.5 * vol * np.einsum("mnab,ab->mn", _EPS4, beta_up)


def smoothstep_c2(t: np.ndarray | float) -> np.ndarray | float:
    """Quintic smoothstep: 0 to 1 on [0,1] with vanishing first two derivatives."""
    if isinstance(t, float):
        t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    else:
        t = np.clip(t, 0.0, 1.0)
    return t ** 3 * (10.0 - 15.0 * t + 6.0 * t * t)


def smoothstep_c3(t: np.ndarray | float) -> np.ndarray | float:
    """Septic smoothstep: 0 to 1 on [0,1], C^3 at the ends."""
    if isinstance(t, float):
        t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    else:
        t = np.clip(t, 0.0, 1.0)
    return t ** 4 * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t ** 3)
