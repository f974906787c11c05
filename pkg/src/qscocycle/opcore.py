"""Dense complex linear-algebra primitives shared by the whole package.

Matrices are plain ``numpy.ndarray`` objects with dtype ``complex128``; a
"CMatrix" in the rest of the package is exactly that.  Every routine here
validates finiteness on entry and guarantees finite output, so callers can
chain operations without re-checking.

Tolerance conventions: ``ALG_TOL`` (1e-10) for algebraic identities that hold
exactly in infinite precision, ``SPECTRAL_TOL`` (1e-8) for quantities that go
through an eigen/singular decomposition.  Both are defaults, never baked in.
"""

from __future__ import annotations

import math

import numpy as np

ALG_TOL = 1e-10
SPECTRAL_TOL = 1e-8

# Scaling-and-squaring refuses inputs beyond this norm rather than returning
# a silently inaccurate (or overflowed) result.
EXP_NORM_LIMIT = 1.0e4

# Pade approximant data for the matrix exponential (diagonal [m/m] forms,
# theta_m = max norm for which the backward error stays below unit roundoff).
_PADE_THETA = (
    (3, 1.495585217958292e-002),
    (5, 2.539398330063230e-001),
    (7, 9.504178996162932e-001),
    (9, 2.097847961257068e000),
    (13, 5.371920351148152e000),
)
_PADE_COEFFS = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (
        17643225600.0,
        8821612800.0,
        2075673600.0,
        302702400.0,
        30270240.0,
        2162160.0,
        110880.0,
        3960.0,
        90.0,
        1.0,
    ),
    13: (
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ),
}


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-d complex128 array, raising on anything else."""
    out = np.asarray(a, dtype=np.complex128)
    if out.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={out.ndim}")
    if out.size and not np.all(np.isfinite(out)):
        raise ValueError(f"{name} contains non-finite entries")
    return out


def _as_square(a, name: str) -> np.ndarray:
    out = as_cmatrix(a, name)
    if out.shape[0] != out.shape[1]:
        raise ValueError(f"{name} must be square, got shape {out.shape}")
    return out


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(a.T)


def _exp_norm_measure(a: np.ndarray) -> float:
    # Symmetric in a <-> a*, so mat_exp(a*) picks the same degree and scaling
    # as mat_exp(a) and the adjoint identity holds to roundoff.
    if a.size == 0:
        return 0.0
    n1 = float(np.linalg.norm(a, 1))
    ninf = float(np.linalg.norm(a, np.inf))
    return max(n1, ninf)


def _pade_approx(a: np.ndarray, m: int) -> np.ndarray:
    n = a.shape[0]
    c = _PADE_COEFFS[m]
    eye = np.eye(n, dtype=np.complex128)
    if m < 13:
        # U = A * (odd coefficient polynomial in A^2), V = even polynomial.
        a2 = a @ a
        powers = [eye, a2]
        for _ in range(2, m // 2 + 1):
            powers.append(powers[-1] @ a2)
        u = np.zeros_like(a)
        v = np.zeros_like(a)
        for j in range(m, 0, -2):
            u += c[j] * powers[(j - 1) // 2]
        u = a @ u
        for j in range(m - 1, -1, -2):
            v += c[j] * powers[j // 2]
    else:
        a2 = a @ a
        a4 = a2 @ a2
        a6 = a2 @ a4
        u = a @ (
            a6 @ (c[13] * a6 + c[11] * a4 + c[9] * a2)
            + c[7] * a6
            + c[5] * a4
            + c[3] * a2
            + c[1] * eye
        )
        v = (
            a6 @ (c[12] * a6 + c[10] * a4 + c[8] * a2)
            + c[6] * a6
            + c[4] * a4
            + c[2] * a2
            + c[0] * eye
        )
    return np.linalg.solve(v - u, v + u)


def mat_exp(a) -> np.ndarray:
    """Matrix exponential by Pade approximation with scaling and squaring.

    Accurate to ~1e-13 relative error for norms up to ~10; inputs with norm
    beyond ``EXP_NORM_LIMIT`` are rejected outright.
    """
    a = _as_square(a, "mat_exp input")
    if a.shape[0] == 0:
        return a.copy()
    mu = _exp_norm_measure(a)
    if mu > EXP_NORM_LIMIT:
        raise OverflowError(
            f"mat_exp input norm {mu:.4g} exceeds the supported limit {EXP_NORM_LIMIT:.0e}"
        )
    if mu == 0.0:
        return np.eye(a.shape[0], dtype=np.complex128)
    for m, theta in _PADE_THETA:
        if mu <= theta:
            return _pade_approx(a, m)
    theta13 = _PADE_THETA[-1][1]
    s = max(0, int(math.ceil(math.log2(mu / theta13))))
    f = _pade_approx(a / (2.0**s), 13)
    for _ in range(s):
        f = f @ f
    return f


def op_norm(a) -> float:
    """Operator (largest singular value) norm; works for rectangular input."""
    a = as_cmatrix(a, "op_norm input")
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def max_herm_eig(a) -> float:
    """Largest eigenvalue of the Hermitian part (a + a*)/2."""
    a = _as_square(a, "max_herm_eig input")
    if a.shape[0] == 0:
        return 0.0
    herm = 0.5 * (a + adjoint(a))
    return float(np.linalg.eigvalsh(herm)[-1])


def psd_inv_sqrt(a, tol: float = 1e-12) -> np.ndarray:
    """Inverse square root of a Hermitian positive-definite matrix.

    Returns Hermitian ``x`` with ``x @ a @ x = I``.  Raises if ``a`` is not
    Hermitian within ``tol`` (relative) or has an eigenvalue <= ``tol``.
    """
    a = _as_square(a, "psd_inv_sqrt input")
    scale = max(1.0, op_norm(a))
    herm_defect = op_norm(a - adjoint(a))
    if herm_defect > tol * scale:
        raise ValueError(
            f"psd_inv_sqrt input is not Hermitian (defect {herm_defect:.3g})"
        )
    w, u = np.linalg.eigh(0.5 * (a + adjoint(a)))
    if w.size and w[0] <= tol:
        raise ValueError(
            f"psd_inv_sqrt input has eigenvalue {w[0]:.3g} <= tol {tol:.3g}"
        )
    x = (u * (w**-0.5)) @ adjoint(u)
    return 0.5 * (x + adjoint(x))


def schur_product(a, b) -> np.ndarray:
    """Entrywise (Schur) product, with a scalar-against-blocks variant.

    For equal shapes this is the plain entrywise product.  If ``a`` is n x n
    and ``b`` is (n*p) x (n*q), each p x q block of ``b`` is multiplied by the
    matching scalar entry of ``a``.
    """
    a = as_cmatrix(a, "schur_product left factor")
    b = as_cmatrix(b, "schur_product right factor")
    if a.shape == b.shape:
        return a * b
    n, m = a.shape
    if n and m and b.shape[0] % n == 0 and b.shape[1] % m == 0:
        p, q = b.shape[0] // n, b.shape[1] // m
        return np.kron(a, np.ones((p, q))) * b
    raise ValueError(
        f"schur_product shapes {a.shape} and {b.shape} are not compatible"
    )
