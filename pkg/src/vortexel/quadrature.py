"""Deterministic adaptive cubature.

One engine serves every integral in the package: Gauss-Kronrod 15(7) panels in
one dimension, Genz-Malik degree-7(5) rules in two or more.  Regions are
processed worst-error-first from a heap with an insertion counter as the tie
breaker, so the subdivision path (and hence every digit of the result) is a
pure function of the integrand and the configuration.  No randomization is
used anywhere.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

__all__ = ["CubatureResult", "NonConvergenceError", "integrate"]

# Gauss-Kronrod 15(7) abscissae and weights on [-1, 1].
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_GK_NODES = np.concatenate([-_XGK[:7], _XGK[::-1]])          # 15 ascending nodes
_GK_WEIGHTS = np.concatenate([_WGK[:7], _WGK[::-1]])
# Gauss-7 lives on nodes 1,3,5,7,9,11,13 of the Kronrod set.
_G_INDEX = np.array([1, 3, 5, 7, 9, 11, 13])
_G_WEIGHTS = np.concatenate([_WG[:3], _WG[::-1]])


class NonConvergenceError(RuntimeError):
    """Raised when an integral cannot reach tolerance within its budget.

    The best estimate is carried in ``result``.
    """

    def __init__(self, message: str, result: "CubatureResult"):
        super().__init__(message)
        self.result = result


@dataclass
class CubatureResult:
    value: complex
    error: float
    neval: int
    converged: bool


def _genz_malik_rule(d: int):
    """Points (npts, d) and the paired degree-7 / degree-5 weights for [-1,1]^d."""
    l2 = np.sqrt(9.0 / 70.0)
    l3 = np.sqrt(9.0 / 10.0)
    l4 = np.sqrt(9.0 / 10.0)
    l5 = np.sqrt(9.0 / 19.0)
    pts = [np.zeros(d)]
    w7 = [(12824.0 - 9120.0 * d + 400.0 * d * d) / 19683.0]
    w5 = [(729.0 - 950.0 * d + 50.0 * d * d) / 729.0]
    for i in range(d):
        for s in (+1.0, -1.0):
            p = np.zeros(d)
            p[i] = s * l2
            pts.append(p)
            w7.append(980.0 / 6561.0)
            w5.append(245.0 / 486.0)
    for i in range(d):
        for s in (+1.0, -1.0):
            p = np.zeros(d)
            p[i] = s * l3
            pts.append(p)
            w7.append((1820.0 - 400.0 * d) / 19683.0)
            w5.append((265.0 - 100.0 * d) / 1458.0)
    for i in range(d):
        for j in range(i + 1, d):
            for si in (+1.0, -1.0):
                for sj in (+1.0, -1.0):
                    p = np.zeros(d)
                    p[i] = si * l4
                    p[j] = sj * l4
                    pts.append(p)
                    w7.append(200.0 / 19683.0)
                    w5.append(25.0 / 729.0)
    n_corner = 2**d
    for c in range(n_corner):
        p = np.array([l5 if (c >> i) & 1 else -l5 for i in range(d)])
        pts.append(p)
        w7.append(6859.0 / 19683.0 / n_corner)
        w5.append(0.0)
    return np.array(pts), np.array(w7), np.array(w5), l2, l3


_RULE_CACHE: dict[int, tuple] = {}


def _rule(d: int):
    if d not in _RULE_CACHE:
        _RULE_CACHE[d] = _genz_malik_rule(d)
    return _RULE_CACHE[d]


def _eval_regions_nd(f, los, his, d):
    """Apply the Genz-Malik pair to a batch of regions in one integrand call.

    Returns per-region (value, error, split_dim).
    """
    pts, w7, w5, l2, l3 = _rule(d)
    npts = pts.shape[0]
    nreg = los.shape[0]
    centers = 0.5 * (los + his)
    half = 0.5 * (his - los)
    all_pts = centers[:, None, :] + half[:, None, :] * pts[None, :, :]
    vals = np.asarray(f(all_pts.reshape(-1, d))).reshape(nreg, npts)
    vol = np.prod(his - los, axis=1)
    i7 = vals @ w7 * vol
    i5 = vals @ w5 * vol
    err = np.abs(i7 - i5)
    # Fourth-divided-difference along each axis picks the split dimension.
    f0 = vals[:, 0]
    ratio = (l2 / l3) ** 2
    split = np.zeros(nreg, dtype=int)
    best = np.full(nreg, -1.0)
    for i in range(d):
        a = vals[:, 1 + 2 * i] + vals[:, 2 + 2 * i] - 2.0 * f0
        b = vals[:, 1 + 2 * d + 2 * i] + vals[:, 2 + 2 * d + 2 * i] - 2.0 * f0
        diff = np.abs(a - ratio * b) * half[:, i]
        take = diff > best * (1.0 + 1e-14)
        split[take] = i
        best = np.maximum(best, diff)
    return i7, err, split, nreg * npts


def _eval_regions_1d(f, los, his):
    nreg = los.shape[0]
    centers = 0.5 * (los + his)
    half = 0.5 * (his - los)
    all_pts = centers[:, None, :] + half[:, None, :] * _GK_NODES[None, :, None]
    vals = np.asarray(f(all_pts.reshape(-1, 1))).reshape(nreg, 15)
    hw = half[:, 0]
    k = (vals @ _GK_WEIGHTS) * hw
    g = (vals[:, _G_INDEX] @ _G_WEIGHTS) * hw
    err = np.abs(k - g)
    return k, err, np.zeros(nreg, dtype=int), nreg * 15


def integrate(
    f,
    lo,
    hi,
    *,
    rel_tol: float = 1e-8,
    abs_tol: float = 1e-14,
    max_evals: int = 1_000_000,
    initial_splits=None,
    batch_regions: int = 32,
    raise_on_fail: bool = False,
) -> CubatureResult:
    """Adaptively integrate ``f`` over the box [lo, hi].

    ``f`` takes an (npts, d) array and returns (npts,) values (real or
    complex).  ``initial_splits`` optionally pre-divides each axis into a
    uniform number of panels, which helps oscillatory integrands converge
    without deep bisection.  Stops once the summed error estimate drops below
    max(abs_tol, rel_tol * |integral|); if the evaluation budget runs out the
    best estimate is returned with ``converged=False`` (or raised inside a
    NonConvergenceError when ``raise_on_fail``).
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    d = lo.size
    if np.any(hi <= lo):
        raise ValueError("integration box must have positive extent")
    if rel_tol <= 0 or abs_tol < 0 or max_evals <= 0:
        raise ValueError("tolerances must be positive and max_evals > 0")

    splits = np.ones(d, dtype=int) if initial_splits is None else np.asarray(initial_splits, dtype=int)
    edges = [np.linspace(lo[i], hi[i], splits[i] + 1) for i in range(d)]
    los0, his0 = [], []
    idx = np.zeros(d, dtype=int)
    while True:
        los0.append([edges[i][idx[i]] for i in range(d)])
        his0.append([edges[i][idx[i] + 1] for i in range(d)])
        for i in range(d - 1, -1, -1):
            idx[i] += 1
            if idx[i] < splits[i]:
                break
            idx[i] = 0
        else:
            break
    los0 = np.array(los0)
    his0 = np.array(his0)

    evaluate = _eval_regions_1d if d == 1 else lambda fn, a, b: _eval_regions_nd(fn, a, b, d)
    vals, errs, sdims, neval = evaluate(f, los0, his0)

    heap: list[tuple] = []
    counter = 0
    total_val = complex(0.0)
    total_err = 0.0
    for i in range(los0.shape[0]):
        total_val += complex(vals[i])
        total_err += float(errs[i])
        heapq.heappush(heap, (-float(errs[i]), counter, los0[i], his0[i], complex(vals[i]), int(sdims[i])))
        counter += 1

    while True:
        if total_err <= max(abs_tol, rel_tol * abs(total_val)):
            return CubatureResult(total_val, total_err, neval, True)
        if neval >= max_evals or not heap:
            result = CubatureResult(total_val, total_err, neval, False)
            if raise_on_fail:
                raise NonConvergenceError(
                    f"cubature used {neval} evaluations without reaching tolerance "
                    f"(err={total_err:.3e}, value={abs(total_val):.6e})",
                    result,
                )
            return result

        los_b, his_b = [], []
        for _ in range(min(batch_regions, len(heap))):
            nerr, _, rlo, rhi, rval, rdim = heapq.heappop(heap)
            total_val -= rval
            total_err -= -nerr
            mid = 0.5 * (rlo[rdim] + rhi[rdim])
            for half_id in (0, 1):
                a = rlo.copy()
                b = rhi.copy()
                if half_id == 0:
                    b[rdim] = mid
                else:
                    a[rdim] = mid
                los_b.append(a)
                his_b.append(b)
        vals, errs, sdims, used = evaluate(f, np.array(los_b), np.array(his_b))
        neval += used
        for i in range(len(los_b)):
            total_val += complex(vals[i])
            total_err += float(errs[i])
            heapq.heappush(heap, (-float(errs[i]), counter, los_b[i], his_b[i], complex(vals[i]), int(sdims[i])))
            counter += 1
