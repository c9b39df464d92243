"""Naive index-loop versions of the products in :mod:`elsim.tensor_core`.

These exist only as an independent reference. Each one walks the index
formula literally; the loops run over tensor indices while the (optional)
leading batch axes are handled by numpy, which keeps a 1000-sample
comparison fast without touching the index logic.
"""

from __future__ import annotations

from itertools import permutations, product

import numpy as np

R3 = range(3)


def _zeros(batch, *shape):
    return np.zeros(tuple(batch) + shape)


def levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for p in permutations(range(3)):
        # sign via inversion count
        inv = sum(1 for a in range(3) for b in range(a + 1, 3) if p[a] > p[b])
        eps[p] = (-1.0) ** inv
    return eps


def hat(a):
    out = _zeros(a.shape[:-1], 3, 3)
    eps = levi_civita()
    for i, j, k in product(R3, R3, R3):
        # hat(a)_ij = -eps_ijk a_k
        out[..., i, j] -= eps[i, j, k] * a[..., k]
    return out


def cross(a, b):
    eps = levi_civita()
    out = _zeros(a.shape[:-1], 3)
    for i, j, k in product(R3, R3, R3):
        out[..., i] += eps[i, j, k] * a[..., j] * b[..., k]
    return out


def frob(A, B):
    out = np.zeros(A.shape[:-2])
    for i, j in product(R3, R3):
        out = out + A[..., i, j] * B[..., i, j]
    return out


def tdot(X, Y):
    out = np.zeros(X.shape[:-3])
    for i, j, k in product(R3, R3, R3):
        out = out + X[..., i, j, k] * Y[..., i, j, k]
    return out


def ten3_colon_mat(G, A):
    out = _zeros(G.shape[:-3], 3)
    for i, j, k in product(R3, R3, R3):
        out[..., i] += G[..., i, j, k] * A[..., j, k]
    return out


def ten3_dot_mat(G, A):
    out = _zeros(G.shape[:-3], 3, 3, 3)
    for i, j, k, l in product(R3, R3, R3, R3):
        out[..., i, j, l] += G[..., i, j, k] * A[..., k, l]
    return out


def ten3_dot_vec(G, a):
    out = _zeros(G.shape[:-3], 3, 3)
    for i, j, k in product(R3, R3, R3):
        out[..., i, j] += G[..., i, j, k] * a[..., k]
    return out


def ten4_colon_mat(L, A):
    out = _zeros(A.shape[:-2], 3, 3)
    for i, j, k, l in product(R3, R3, R3, R3):
        out[..., i, j] += L[..., i, j, k, l] * A[..., k, l]
    return out


def ten4_colon_vec(L, a):
    out = _zeros(a.shape[:-1], 3, 3, 3)
    for i, j, k, l in product(R3, R3, R3, R3):
        out[..., i, j, k] += L[..., i, j, k, l] * a[..., l]
    return out


def ten4_colon_ten3(L, G):
    out = _zeros(G.shape[:-3], 3, 3, 3)
    for i, j, k, l, m in product(R3, R3, R3, R3, R3):
        out[..., i, j, m] += L[..., i, j, k, l] * G[..., k, l, m]
    return out


def ten4_tdot_ten3(L, G):
    out = _zeros(G.shape[:-3], 3)
    for i, j, k, l in product(R3, R3, R3, R3):
        out[..., i] += L[..., i, j, k, l] * G[..., j, k, l]
    return out


def mat_colon_ten6(A, T):
    out = _zeros(A.shape[:-2], 3, 3, 3, 3)
    for i, j, k, l, m, n in product(R3, repeat=6):
        out[..., k, l, m, n] += A[..., i, j] * T[..., i, j, k, l, m, n]
    return out


def ten6_tdot_ten3(T, G):
    out = _zeros(G.shape[:-3], 3, 3, 3)
    for i, j, k, l, m, n in product(R3, repeat=6):
        out[..., i, j, k] += T[..., i, j, k, l, m, n] * G[..., l, m, n]
    return out


def vec_dot_ten6(a, T):
    out = _zeros(a.shape[:-1], 3, 3, 3, 3, 3)
    for i, j, k, l, m, n in product(R3, repeat=6):
        out[..., i, j, l, m, n] += a[..., k] * T[..., i, j, k, l, m, n]
    return out


def delta(i, j):
    return 1.0 if i == j else 0.0


def build_lambda(k1, k2):
    L = np.zeros((3,) * 4)
    for i, j, k, l in product(R3, repeat=4):
        L[i, j, k, l] = k1 * delta(i, j) * delta(k, l) + k2 * (
            delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k)
        )
    return L


def build_theta(k3, k4, k5):
    d = delta
    T = np.zeros((3,) * 6)
    for i, j, k, l, m, n in product(R3, repeat=6):
        T[i, j, k, l, m, n] = (
            k3 * d(i, j) * d(l, m) * d(k, n)
            + k5 * (d(i, l) * d(m, n) * d(j, k) - d(m, i) * d(l, n) * d(j, k)
                    - d(l, j) * d(m, n) * d(i, k) + d(j, m) * d(l, n) * d(i, k))
            + k4 * (d(k, n) * d(j, m) * d(i, l) + d(k, m) * d(j, l) * d(i, n)
                    + d(k, l) * d(j, n) * d(i, m) - d(k, n) * d(j, l) * d(i, m)
                    - d(k, m) * d(j, n) * d(i, l) - d(k, l) * d(j, m) * d(i, n))
        )
    return T
