"""Hot numeric kernels.

Each kernel exists twice: a numba ``@njit`` version and a pure-numpy
version.  The public names at the bottom of the module point at one or the
other.  Set ``PBTV_DISABLE_NUMBA=1`` in the environment to force the numpy
path (numba also falls back automatically when it cannot be imported).

All kernels take and return contiguous float64 arrays and never validate
their inputs; validation lives in the typed wrappers.
"""

import os

import numpy as np

_FALSY = ("", "0", "false", "no", "off")

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("PBTV_DISABLE_NUMBA", "").strip().lower() in _FALSY


# ---------------------------------------------------------------------------
# pure numpy
# ---------------------------------------------------------------------------


def pb_pmf_numpy(p):
    n = p.shape[0]
    f = np.zeros(n + 1)
    f[0] = 1.0
    for i in range(n):
        pi = p[i]
        f[1 : i + 2] = (1.0 - pi) * f[1 : i + 2] + pi * f[0 : i + 1]
        f[0] = (1.0 - pi) * f[0]
    return f


def binom_rows_numpy(n, theta):
    rows = np.zeros((n + 1, n + 1))
    rows[0, 0] = 1.0
    for m in range(1, n + 1):
        prev = rows[m - 1]
        rows[m, 1 : m + 1] = (1.0 - theta) * prev[1 : m + 1] + theta * prev[0:m]
        rows[m, 0] = (1.0 - theta) * prev[0]
    return rows


def product_masses_numpy(p):
    n = p.shape[0]
    out = np.empty(1 << n)
    out[0] = 1.0
    size = 1
    for i in range(n):
        pi = p[i]
        out[size : 2 * size] = out[:size] * pi
        out[:size] *= 1.0 - pi
        size *= 2
    return out


def product_tv_numpy(p, q):
    return 0.5 * float(np.sum(np.abs(product_masses_numpy(p) - product_masses_numpy(q))))


def _popcounts(n):
    counts = np.zeros(1 << n, dtype=np.int64)
    size = 1
    for _ in range(n):
        counts[size : 2 * size] = counts[:size] + 1
        size *= 2
    return counts


def pb_pmf_enum_numpy(p):
    n = p.shape[0]
    return np.bincount(_popcounts(n), weights=product_masses_numpy(p), minlength=n + 1)


def mix_convolve_numpy(weights, rows_i, rows_j):
    n = weights.shape[0] - 1
    out = np.zeros(n + 1)
    for m in range(n + 1):
        w = weights[m]
        if w == 0.0:
            continue
        out += w * np.convolve(rows_i[m, : m + 1], rows_j[n - m, : n - m + 1])
    return out


def binom_tv_family_numpy(m_max, a, b):
    # two rolling rows instead of the full (m_max+1)^2 tables
    out = np.zeros(m_max + 1)
    ra = np.zeros(m_max + 1)
    rb = np.zeros(m_max + 1)
    ra[0] = rb[0] = 1.0
    for m in range(1, m_max + 1):
        ra[1 : m + 1] = (1.0 - a) * ra[1 : m + 1] + a * ra[0:m]
        ra[0] *= 1.0 - a
        rb[1 : m + 1] = (1.0 - b) * rb[1 : m + 1] + b * rb[0:m]
        rb[0] *= 1.0 - b
        out[m] = 0.5 * np.sum(np.abs(ra[: m + 1] - rb[: m + 1]))
    return out


# ---------------------------------------------------------------------------
# numba
# ---------------------------------------------------------------------------

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def pb_pmf_numba(p):
        n = p.shape[0]
        f = np.zeros(n + 1)
        f[0] = 1.0
        for i in range(n):
            pi = p[i]
            qi = 1.0 - pi
            for k in range(i + 1, 0, -1):
                f[k] = qi * f[k] + pi * f[k - 1]
            f[0] = qi * f[0]
        return f

    @njit(cache=True)
    def binom_rows_numba(n, theta):
        rows = np.zeros((n + 1, n + 1))
        rows[0, 0] = 1.0
        q = 1.0 - theta
        for m in range(1, n + 1):
            rows[m, 0] = q * rows[m - 1, 0]
            for k in range(1, m + 1):
                rows[m, k] = q * rows[m - 1, k] + theta * rows[m - 1, k - 1]
        return rows

    @njit(cache=True)
    def product_masses_numba(p):
        n = p.shape[0]
        out = np.empty(1 << n)
        out[0] = 1.0
        size = 1
        for i in range(n):
            pi = p[i]
            qi = 1.0 - pi
            for j in range(size):
                v = out[j]
                out[size + j] = v * pi
                out[j] = v * qi
            size *= 2
        return out

    @njit(cache=True)
    def product_tv_numba(p, q):
        a = product_masses_numba(p)
        b = product_masses_numba(q)
        # Kahan summation; 2**20 terms
        s = 0.0
        c = 0.0
        for j in range(a.shape[0]):
            y = abs(a[j] - b[j]) - c
            t = s + y
            c = (t - s) - y
            s = t
        return 0.5 * s

    @njit(cache=True)
    def pb_pmf_enum_numba(p):
        n = p.shape[0]
        masses = product_masses_numba(p)
        out = np.zeros(n + 1)
        comp = np.zeros(n + 1)
        for j in range(masses.shape[0]):
            k = 0
            x = j
            while x:
                x &= x - 1
                k += 1
            y = masses[j] - comp[k]
            t = out[k] + y
            comp[k] = (t - out[k]) - y
            out[k] = t
        return out

    @njit(cache=True)
    def mix_convolve_numba(weights, rows_i, rows_j):
        n = weights.shape[0] - 1
        out = np.zeros(n + 1)
        for m in range(n + 1):
            w = weights[m]
            if w == 0.0:
                continue
            for a in range(m + 1):
                wa = w * rows_i[m, a]
                if wa == 0.0:
                    continue
                for b in range(n - m + 1):
                    out[a + b] += wa * rows_j[n - m, b]
        return out

    @njit(cache=True)
    def binom_tv_family_numba(m_max, a, b):
        out = np.zeros(m_max + 1)
        ra = np.zeros(m_max + 1)
        rb = np.zeros(m_max + 1)
        ra[0] = 1.0
        rb[0] = 1.0
        qa = 1.0 - a
        qb = 1.0 - b
        for m in range(1, m_max + 1):
            for k in range(m, 0, -1):
                ra[k] = qa * ra[k] + a * ra[k - 1]
                rb[k] = qb * rb[k] + b * rb[k - 1]
            ra[0] *= qa
            rb[0] *= qb
            s = 0.0
            for k in range(m + 1):
                s += abs(ra[k] - rb[k])
            out[m] = 0.5 * s
        return out


if USE_NUMBA:
    pb_pmf = pb_pmf_numba
    binom_rows = binom_rows_numba
    product_masses = product_masses_numba
    product_tv = product_tv_numba
    pb_pmf_enum = pb_pmf_enum_numba
    mix_convolve = mix_convolve_numba
    binom_tv_family = binom_tv_family_numba
else:
    pb_pmf = pb_pmf_numpy
    binom_rows = binom_rows_numpy
    product_masses = product_masses_numpy
    product_tv = product_tv_numpy
    pb_pmf_enum = pb_pmf_enum_numpy
    mix_convolve = mix_convolve_numpy
    binom_tv_family = binom_tv_family_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
