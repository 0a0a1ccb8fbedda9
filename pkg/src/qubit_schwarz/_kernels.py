"""Hot loops of the numerical oracles, in numba and pure-numpy flavours.

Superoperators are 4x4 complex matrices acting on the row-major
vectorisation ``[X00, X01, X10, X11]`` of a 2x2 matrix ``X``.

Backend selection: ``QUBIT_SCHWARZ_BACKEND=numpy`` forces the numpy path;
otherwise numba is used when importable.  Both flavours are always exposed
through :data:`IMPLEMENTATIONS` so they can be compared directly.
"""
from __future__ import annotations

import math

import numpy as np

from ._config import requested_backend

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


# ---------------------------------------------------------------------------
# parameter-vector -> matrix conversions (shared, cheap)
# ---------------------------------------------------------------------------

def traceless_from_params(v):
    """Map real ``(..., 6)`` vectors ``(Re c, Im c)`` to vec(sum_k c_k sigma_k)."""
    v = np.asarray(v, dtype=float)
    c = v[..., :3] + 1j * v[..., 3:6]
    out = np.empty(v.shape[:-1] + (4,), dtype=complex)
    out[..., 0] = c[..., 2]
    out[..., 1] = c[..., 0] - 1j * c[..., 1]
    out[..., 2] = c[..., 0] + 1j * c[..., 1]
    out[..., 3] = -c[..., 2]
    return out


def full_from_params(v):
    """Map real ``(..., 8)`` vectors to vec(X) with ``X = (v[:4] + i v[4:]).reshape(2, 2)``."""
    v = np.asarray(v, dtype=float)
    return v[..., :4] + 1j * v[..., 4:8]


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def _mats(xs):
    return np.asarray(xs, dtype=complex).reshape(-1, 2, 2)


def _apply(superop, mats):
    return (mats.reshape(-1, 4) @ superop.T).reshape(-1, 2, 2)


def _min_eig_batch(d):
    a = d[:, 0, 0].real
    b = d[:, 1, 1].real
    off = 0.5 * (d[:, 0, 1] + np.conj(d[:, 1, 0]))
    return 0.5 * (a + b) - np.hypot(0.5 * (a - b), np.abs(off))


def gen_defect_min_eig_numpy(dual, xs):
    """lambda_min of L(X^+X) - L(X^+)X - X^+L(X) for each row of ``xs``."""
    x = _mats(xs)
    xd = np.conj(np.swapaxes(x, -1, -2))
    lxx = _apply(dual, xd @ x)
    lx = _apply(dual, x)
    lxd = _apply(dual, xd)
    return _min_eig_batch(lxx - lxd @ x - xd @ lx)


def map_defect_min_eig_numpy(phi, xs):
    """lambda_min of Phi(X^+X) - Phi(X)^+Phi(X) for each row of ``xs``."""
    x = _mats(xs)
    xd = np.conj(np.swapaxes(x, -1, -2))
    px = _apply(phi, x)
    return _min_eig_batch(_apply(phi, xd @ x) - np.conj(np.swapaxes(px, -1, -2)) @ px)


def bloch_quadratic_numpy(g, c, ns):
    """``(n.G n - c.n) / 2`` per unit Bloch direction, i.e. tr[Q L(P) Q]."""
    ns = np.asarray(ns, dtype=float).reshape(-1, 3)
    return 0.5 * (np.einsum("ni,ij,nj->n", ns, g, ns) - ns @ c)


def gen_objective_numpy(dual, v):
    v = np.asarray(v, dtype=float)
    return float(gen_defect_min_eig_numpy(dual, traceless_from_params(v / np.linalg.norm(v)))[0])


def map_objective_numpy(phi, v):
    v = np.asarray(v, dtype=float)
    return float(map_defect_min_eig_numpy(phi, full_from_params(v / np.linalg.norm(v)))[0])


def bloch_objective_numpy(g, c, v):
    v = np.asarray(v, dtype=float)
    return float(bloch_quadratic_numpy(g, c, v / np.linalg.norm(v))[0])


_NUMPY_IMPL = {
    "gen_defect_min_eig": gen_defect_min_eig_numpy,
    "map_defect_min_eig": map_defect_min_eig_numpy,
    "bloch_quadratic": bloch_quadratic_numpy,
    "gen_objective": gen_objective_numpy,
    "map_objective": map_objective_numpy,
    "bloch_objective": bloch_objective_numpy,
}


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

def _build_numba_impl():
    njit = numba.njit(cache=True, nogil=True)

    @njit
    def apply4(s, v0, v1, v2, v3):
        return (
            s[0, 0] * v0 + s[0, 1] * v1 + s[0, 2] * v2 + s[0, 3] * v3,
            s[1, 0] * v0 + s[1, 1] * v1 + s[1, 2] * v2 + s[1, 3] * v3,
            s[2, 0] * v0 + s[2, 1] * v1 + s[2, 2] * v2 + s[2, 3] * v3,
            s[3, 0] * v0 + s[3, 1] * v1 + s[3, 2] * v2 + s[3, 3] * v3,
        )

    @njit
    def min_eig(d00, d01, d10, d11):
        a = d00.real
        b = d11.real
        off = 0.5 * (d01 + d10.conjugate())
        return 0.5 * (a + b) - math.hypot(0.5 * (a - b), abs(off))

    @njit
    def gen_point(s, x0, x1, x2, x3):
        # X^+ entries
        h0 = x0.conjugate()
        h1 = x2.conjugate()
        h2 = x1.conjugate()
        h3 = x3.conjugate()
        y0 = h0 * x0 + h1 * x2
        y1 = h0 * x1 + h1 * x3
        y2 = h2 * x0 + h3 * x2
        y3 = h2 * x1 + h3 * x3
        ly0, ly1, ly2, ly3 = apply4(s, y0, y1, y2, y3)
        lx0, lx1, lx2, lx3 = apply4(s, x0, x1, x2, x3)
        lh0, lh1, lh2, lh3 = apply4(s, h0, h1, h2, h3)
        # L(X^+) X and X^+ L(X)
        a0 = lh0 * x0 + lh1 * x2
        a1 = lh0 * x1 + lh1 * x3
        a2 = lh2 * x0 + lh3 * x2
        a3 = lh2 * x1 + lh3 * x3
        b0 = h0 * lx0 + h1 * lx2
        b1 = h0 * lx1 + h1 * lx3
        b2 = h2 * lx0 + h3 * lx2
        b3 = h2 * lx1 + h3 * lx3
        return min_eig(ly0 - a0 - b0, ly1 - a1 - b1, ly2 - a2 - b2, ly3 - a3 - b3)

    @njit
    def map_point(s, x0, x1, x2, x3):
        h0 = x0.conjugate()
        h1 = x2.conjugate()
        h2 = x1.conjugate()
        h3 = x3.conjugate()
        y0 = h0 * x0 + h1 * x2
        y1 = h0 * x1 + h1 * x3
        y2 = h2 * x0 + h3 * x2
        y3 = h2 * x1 + h3 * x3
        py0, py1, py2, py3 = apply4(s, y0, y1, y2, y3)
        p0, p1, p2, p3 = apply4(s, x0, x1, x2, x3)
        q0 = p0.conjugate()
        q1 = p2.conjugate()
        q2 = p1.conjugate()
        q3 = p3.conjugate()
        return min_eig(
            py0 - (q0 * p0 + q1 * p2),
            py1 - (q0 * p1 + q1 * p3),
            py2 - (q2 * p0 + q3 * p2),
            py3 - (q2 * p1 + q3 * p3),
        )

    @njit
    def gen_defect_min_eig(s, xs):
        n = xs.shape[0]
        out = np.empty(n)
        for k in range(n):
            out[k] = gen_point(s, xs[k, 0], xs[k, 1], xs[k, 2], xs[k, 3])
        return out

    @njit
    def map_defect_min_eig(s, xs):
        n = xs.shape[0]
        out = np.empty(n)
        for k in range(n):
            out[k] = map_point(s, xs[k, 0], xs[k, 1], xs[k, 2], xs[k, 3])
        return out

    @njit
    def bloch_quadratic(g, c, ns):
        n = ns.shape[0]
        out = np.empty(n)
        for k in range(n):
            acc = 0.0
            for i in range(3):
                gi = 0.0
                for j in range(3):
                    gi += g[i, j] * ns[k, j]
                acc += ns[k, i] * (gi - c[i])
            out[k] = 0.5 * acc
        return out

    @njit
    def gen_objective(s, v):
        nrm = math.sqrt((v * v).sum())
        c1 = complex(v[0], v[3]) / nrm
        c2 = complex(v[1], v[4]) / nrm
        c3 = complex(v[2], v[5]) / nrm
        return gen_point(s, c3, c1 - 1j * c2, c1 + 1j * c2, -c3)

    @njit
    def map_objective(s, v):
        nrm = math.sqrt((v * v).sum())
        return map_point(
            s,
            complex(v[0], v[4]) / nrm,
            complex(v[1], v[5]) / nrm,
            complex(v[2], v[6]) / nrm,
            complex(v[3], v[7]) / nrm,
        )

    @njit
    def bloch_objective(g, c, v):
        nrm = math.sqrt((v * v).sum())
        acc = 0.0
        for i in range(3):
            gi = 0.0
            for j in range(3):
                gi += g[i, j] * v[j] / nrm
            acc += v[i] / nrm * (gi - c[i])
        return 0.5 * acc

    def _c(a):
        return np.ascontiguousarray(a, dtype=np.complex128)

    def _f(a):
        return np.ascontiguousarray(a, dtype=np.float64)

    # thin wrappers pin dtypes so each kernel compiles exactly once
    return {
        "gen_defect_min_eig": lambda s, xs: gen_defect_min_eig(_c(s), _c(xs).reshape(-1, 4)),
        "map_defect_min_eig": lambda s, xs: map_defect_min_eig(_c(s), _c(xs).reshape(-1, 4)),
        "bloch_quadratic": lambda g, c, ns: bloch_quadratic(_f(g), _f(c), _f(ns).reshape(-1, 3)),
        "gen_objective": lambda s, v: gen_objective(s, _f(v)),
        "map_objective": lambda s, v: map_objective(s, _f(v)),
        "bloch_objective": lambda g, c, v: bloch_objective(g, c, _f(v)),
    }


IMPLEMENTATIONS = {"numpy": _NUMPY_IMPL}
if numba is not None:
    IMPLEMENTATIONS["numba"] = _build_numba_impl()

BACKEND = "numba" if requested_backend() == "numba" and "numba" in IMPLEMENTATIONS else "numpy"
_ACTIVE = IMPLEMENTATIONS[BACKEND]

gen_defect_min_eig = _ACTIVE["gen_defect_min_eig"]
map_defect_min_eig = _ACTIVE["map_defect_min_eig"]
bloch_quadratic = _ACTIVE["bloch_quadratic"]
gen_objective = _ACTIVE["gen_objective"]
map_objective = _ACTIVE["map_objective"]
bloch_objective = _ACTIVE["bloch_objective"]


def prepare_superop(s):
    """Contiguous complex128 copy suitable for the objective kernels."""
    return np.ascontiguousarray(s, dtype=np.complex128)


def prepare_real(a):
    return np.ascontiguousarray(a, dtype=np.float64)
