"""Fixed-size (d=3) tensor algebra.

Every function broadcasts over leading axes, so a grid of matrices with
shape ``(N, N, N, 3, 3)`` is handled the same way as a single ``(3, 3)``
matrix. Component axes are always trailing.

Index conventions for the mixed-order products:

==========================  ======================================  ======
product                     index formula                           result
==========================  ======================================  ======
``ten3_colon_mat``  Γ:A     Σ_jk Γ_ijk A_jk                         Vec3
``ten3_dot_mat``    Γ·A     Σ_k Γ_ijk A_kl                          Ten3
``ten3_dot_vec``    Γ·a     Σ_k Γ_ijk a_k                           Mat3
``ten4_colon_mat``  Λ:A     Σ_kl Λ_ijkl A_kl                        Mat3
``ten4_colon_vec``  Λ:a     Σ_l Λ_ijkl a_l                          Ten3
``ten4_colon_ten3`` Λ:Γ     Σ_kl Λ_ijkl Γ_klm                       Ten3
``ten4_tdot_ten3``  Λ⋮Γ     Σ_jkl Λ_ijkl Γ_jkl                      Vec3
``mat_colon_ten6``  A:Θ     Σ_ij A_ij Θ_ijklmn                      Ten4
``ten6_tdot_ten3``  Θ⋮Γ     Σ_lmn Θ_ijklmn Γ_lmn                    Ten3
``vec_dot_ten6``    a·Θ     Σ_k a_k Θ_ijklmn                        Ten5
==========================  ======================================  ======
"""

from __future__ import annotations

import numpy as np

DIM = 3


def levi_civita() -> np.ndarray:
    """Return the order-3 permutation tensor Υ."""
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    return eps


UPSILON = levi_civita()
IDENTITY = np.eye(3)


def hat(a: np.ndarray) -> np.ndarray:
    """Skew matrix with ``hat(a) @ b == cross(a, b)``."""
    a = np.asarray(a, dtype=float)
    out = np.zeros(a.shape[:-1] + (3, 3))
    a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2]
    out[..., 0, 1] = -a3
    out[..., 0, 2] = a2
    out[..., 1, 0] = a3
    out[..., 1, 2] = -a1
    out[..., 2, 0] = -a2
    out[..., 2, 1] = a1
    return out


def vee(A: np.ndarray) -> np.ndarray:
    """Left inverse of :func:`hat`; reads the entries (A32, A13, A21)."""
    A = np.asarray(A, dtype=float)
    return np.stack([A[..., 2, 1], A[..., 0, 2], A[..., 1, 0]], axis=-1)


def cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2]
    b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2]
    return np.stack([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1], axis=-1)


def transpose(A: np.ndarray) -> np.ndarray:
    return np.swapaxes(A, -1, -2)


def sym(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + transpose(A))


def skw(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A - transpose(A))


def sym_skw(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric and skew-symmetric parts of ``A``."""
    return sym(A), skw(A)


def trace(A: np.ndarray) -> np.ndarray:
    return A[..., 0, 0] + A[..., 1, 1] + A[..., 2, 2]


def dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", a, b)


def matvec(A: np.ndarray, a: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,...j->...i", A, a)


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,...jk->...ik", A, B)


def frob(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Frobenius product ``A:B``."""
    return np.einsum("...ij,...ij->...", A, B)


def tdot(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Scalar product of two order-3 tensors (three dots)."""
    return np.einsum("...ijk,...ijk->...", X, Y)


def outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a ⊗ b`` with entries a_i b_j."""
    return a[..., :, None] * b[..., None, :]


def outer_mat_vec(A: np.ndarray, a: np.ndarray) -> np.ndarray:
    """``A ⊗ a`` with entries A_ij a_k."""
    return A[..., :, :, None] * a[..., None, None, :]


def ten3_colon_mat(G: np.ndarray, A: np.ndarray) -> np.ndarray:
    return np.einsum("...ijk,...jk->...i", G, A)


def ten3_dot_mat(G: np.ndarray, A: np.ndarray) -> np.ndarray:
    return np.einsum("...ijk,...kl->...ijl", G, A)


def ten3_dot_vec(G: np.ndarray, a: np.ndarray) -> np.ndarray:
    return np.einsum("...ijk,...k->...ij", G, a)


def ten4_colon_mat(L: np.ndarray, A: np.ndarray) -> np.ndarray:
    return np.einsum("...ijkl,...kl->...ij", L, A)


def ten4_colon_vec(L: np.ndarray, a: np.ndarray) -> np.ndarray:
    return np.einsum("...ijkl,...l->...ijk", L, a)


def ten4_colon_ten3(L: np.ndarray, G: np.ndarray) -> np.ndarray:
    return np.einsum("...ijkl,...klm->...ijm", L, G)


def ten4_tdot_ten3(L: np.ndarray, G: np.ndarray) -> np.ndarray:
    return np.einsum("...ijkl,...jkl->...i", L, G)


def mat_colon_ten6(A: np.ndarray, T: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,...ijklmn->...klmn", A, T)


def ten6_tdot_ten3(T: np.ndarray, G: np.ndarray) -> np.ndarray:
    return np.einsum("...ijklmn,...lmn->...ijk", T, G)


def vec_dot_ten6(a: np.ndarray, T: np.ndarray) -> np.ndarray:
    # contraction over the third index only
    return np.einsum("...k,...ijklmn->...ijlmn", a, T)


def quad_form4(A: np.ndarray, L: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``A : Λ : B``; ``L`` is a single (3,3,3,3) tensor."""
    return np.einsum("...ij,ijkl,...kl->...", A, L, B)


def quad_form6(X: np.ndarray, T: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """``X ⋮ Θ ⋮ Y``; ``T`` is a single order-6 tensor."""
    return np.einsum("...ijk,ijklmn,...lmn->...", X, T, Y, optimize=True)
