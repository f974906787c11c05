"""Block generators on h + (h (x) k) and their contractivity diagnostics.

A generator is stored as four blocks

    F = [ K  M ]      K : h -> h            M : h(x)k -> h
        [ L  C-I ]    L : h -> h(x)k        C : h(x)k -> h(x)k

and the assembled square matrix is produced on demand, with the scalar slot
of k-hat = C + k ordered first.  Vectors in h (x) k are flattened
channel-major: entry ``a * dim_h + p`` is the coefficient of e_p (x) delta_a,
so the channel blocks of L are the contiguous row slabs
``L[a*dim_h:(a+1)*dim_h]``.  The noise dimension may be zero, in which case
everything degrades to the drift K alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .opcore import adjoint, as_cmatrix, max_herm_eig, op_norm

DEFECT_TOL = 1e-10


def chi(c, d) -> complex:
    """chi(c, d) = (|c|^2 + |d|^2)/2 - <c, d>, conjugate-linear in c."""
    c = np.asarray(c, dtype=np.complex128).reshape(-1)
    d = np.asarray(d, dtype=np.complex128).reshape(-1)
    if c.shape != d.shape:
        raise ValueError(f"chi arguments have dimensions {c.size} and {d.size}")
    return complex(0.5 * (np.vdot(c, c).real + np.vdot(d, d).real) - np.vdot(c, d))


def hat_vector(d) -> np.ndarray:
    """d-hat = (1, d) in C^(1+dim_k)."""
    d = np.asarray(d, dtype=np.complex128).reshape(-1)
    return np.concatenate(([1.0 + 0.0j], d))


def delta_projector(dim_h: int, dim_k: int) -> np.ndarray:
    """Orthogonal projection of h + (h (x) k) onto the noise summand."""
    n = dim_h * (1 + dim_k)
    delta = np.zeros((n, n), dtype=np.complex128)
    for i in range(dim_h, n):
        delta[i, i] = 1.0
    return delta


def lift_map(d, dim_h: int) -> np.ndarray:
    """E_d : h -> h(x)k, u |-> u (x) d, in the channel-major layout."""
    d = np.asarray(d, dtype=np.complex128).reshape(-1, 1)
    return np.kron(d, np.eye(dim_h, dtype=np.complex128))


def compress_map(c, dim_h: int) -> np.ndarray:
    """E^c = (E_c)* : h(x)k -> h."""
    return adjoint(lift_map(c, dim_h))


@dataclass(frozen=True)
class BlockGenerator:
    dim_h: int
    dim_k: int
    K: np.ndarray
    L: np.ndarray
    M: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        if self.dim_h < 1:
            raise ValueError("dim_h must be >= 1")
        if self.dim_k < 0:
            raise ValueError("dim_k must be >= 0")
        dh, dk = self.dim_h, self.dim_k
        shapes = {
            "K": (dh, dh),
            "L": (dh * dk, dh),
            "M": (dh, dh * dk),
            "C": (dh * dk, dh * dk),
        }
        for name, want in shapes.items():
            block = as_cmatrix(getattr(self, name), f"block {name}")
            if block.shape != want:
                raise ValueError(
                    f"block {name} has shape {block.shape}, expected {want} "
                    f"for dim_h={dh}, dim_k={dk}"
                )
            block = block.copy()
            block.flags.writeable = False
            object.__setattr__(self, name, block)

    @property
    def total_dim(self) -> int:
        return self.dim_h * (1 + self.dim_k)

    def full_matrix(self) -> np.ndarray:
        """Assembled square matrix [K M; L C-I] on h + (h (x) k)."""
        dh, dk = self.dim_h, self.dim_k
        n = self.total_dim
        full = np.zeros((n, n), dtype=np.complex128)
        full[:dh, :dh] = self.K
        full[:dh, dh:] = self.M
        full[dh:, :dh] = self.L
        full[dh:, dh:] = self.C - np.eye(dh * dk, dtype=np.complex128)
        return full

    def channel_block_L(self, a: int) -> np.ndarray:
        return self.L[a * self.dim_h : (a + 1) * self.dim_h]

    def channel_block_M(self, b: int) -> np.ndarray:
        return self.M[:, b * self.dim_h : (b + 1) * self.dim_h]


def assemble(K, L, M, C, dim_h: int, dim_k: int) -> BlockGenerator:
    """Validate the four blocks against the dimensions and wrap them."""
    return BlockGenerator(dim_h=dim_h, dim_k=dim_k, K=K, L=L, M=M, C=C)


def from_hlc(H, L, C, tol: float = 1e-10) -> BlockGenerator:
    """Build the generator [iH - L*L/2, -L*C; L, C-I] from (H, L, C).

    With C unitary the result satisfies the contractivity inequality with
    equality (drift identity |Lu|^2 + 2 Re<u, Ku> = 0 and M = -L*C exact).
    """
    H = as_cmatrix(H, "H")
    if H.shape[0] != H.shape[1]:
        raise ValueError(f"H must be square, got shape {H.shape}")
    dh = H.shape[0]
    herm_defect = op_norm(H - adjoint(H))
    if herm_defect > tol * max(1.0, op_norm(H)):
        raise ValueError(f"H is not Hermitian (defect {herm_defect:.3g})")
    L = as_cmatrix(L, "L")
    C = as_cmatrix(C, "C")
    if L.shape[1] != dh or L.shape[0] % dh != 0:
        raise ValueError(f"L shape {L.shape} incompatible with dim_h={dh}")
    dk = L.shape[0] // dh
    K = 1j * H - 0.5 * (adjoint(L) @ L)
    M = -(adjoint(L) @ C)
    return BlockGenerator(dim_h=dh, dim_k=dk, K=K, L=L, M=M, C=C)


def component(F: BlockGenerator, c, d) -> np.ndarray:
    """The h-operator slice E^c-hat F E_d-hat.

    Equals K + E^c L + M E_d + E^c C E_d - <c,d> I; conjugate-affine in c
    and affine in d.
    """
    c = np.asarray(c, dtype=np.complex128).reshape(-1)
    d = np.asarray(d, dtype=np.complex128).reshape(-1)
    if c.size != F.dim_k or d.size != F.dim_k:
        raise ValueError(
            f"slice vectors have dimensions {c.size}, {d.size}; expected {F.dim_k}"
        )
    dh = F.dim_h
    out = F.K.astype(np.complex128, copy=True)
    if F.dim_k:
        ec = compress_map(c, dh)
        ed = lift_map(d, dh)
        out += ec @ F.L + F.M @ ed + ec @ F.C @ ed
        out -= np.vdot(c, d) * np.eye(dh, dtype=np.complex128)
    return out


def contractivity_defect(F: BlockGenerator) -> float:
    """Largest Hermitian eigenvalue of F + F* + F* Delta F.

    Nonpositive (within tolerance) exactly when F generates a contraction
    cocycle in this bounded setting.
    """
    full = F.full_matrix()
    delta_f = full.copy()
    delta_f[: F.dim_h, :] = 0.0
    return max_herm_eig(full + adjoint(full) + adjoint(full) @ delta_f)


def form_defect(F: BlockGenerator, xi) -> float:
    """2 Re<xi, F xi> + |Delta F xi|^2 for xi in h + (h (x) k)."""
    xi = np.asarray(xi, dtype=np.complex128).reshape(-1)
    if xi.size != F.total_dim:
        raise ValueError(f"xi has dimension {xi.size}, expected {F.total_dim}")
    fxi = F.full_matrix() @ xi
    return float(2.0 * np.vdot(xi, fxi).real + np.vdot(fxi[F.dim_h :], fxi[F.dim_h :]).real)


def yosida_approx(F: BlockGenerator, n: int) -> BlockGenerator:
    """Bounded regularization through the resolvent contraction J = (I - K/n)^-1.

    Blocks become J*KJ, LJ, J*M with C unchanged; contractivity is preserved
    (the defect matrix transforms by congruence) and the result converges to
    F entrywise at rate O(1/n).
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    dh = F.dim_h
    eye = np.eye(dh, dtype=np.complex128)
    resolvent = eye - F.K / n
    if abs(np.linalg.det(resolvent)) < 1e-14:
        raise ValueError(f"resolvent I - K/{n} is singular; K is not dissipative")
    j = np.linalg.solve(resolvent, eye)
    return BlockGenerator(
        dim_h=dh,
        dim_k=F.dim_k,
        K=adjoint(j) @ F.K @ j,
        L=F.L @ j,
        M=adjoint(j) @ F.M,
        C=F.C,
    )


@dataclass(frozen=True)
class Classification:
    contractivity_defect: float
    is_contractive: bool
    c_norm: float
    c_contractive: bool
    c_isometric: bool
    c_coisometric: bool
    drift_equality_defect: float
    gauge_equality_defect: float
    equality_case: bool

    def summary(self) -> str:
        parts = [
            "contractive" if self.is_contractive else "NOT contractive",
            f"defect={self.contractivity_defect:.3e}",
            f"|C|={self.c_norm:.6f}",
        ]
        if self.c_isometric:
            parts.append("C isometric")
        if self.c_coisometric:
            parts.append("C coisometric")
        if self.equality_case:
            parts.append("equality case (isometric candidate)")
        return ", ".join(parts)


def classify(F: BlockGenerator, tol: float = DEFECT_TOL) -> Classification:
    """Contractivity report: C contraction/isometry flags, inequality defect,
    and the equality-case diagnostics max|  |Lu|^2 + 2Re<u,Ku>  | and |M + L*C|."""
    dk_dim = F.dim_h * F.dim_k
    eye_k = np.eye(dk_dim, dtype=np.complex128)
    c_norm = op_norm(F.C) if F.dim_k else 0.0
    iso = op_norm(adjoint(F.C) @ F.C - eye_k) if F.dim_k else 0.0
    coiso = op_norm(F.C @ adjoint(F.C) - eye_k) if F.dim_k else 0.0
    drift = adjoint(F.L) @ F.L + F.K + adjoint(F.K)
    drift_defect = op_norm(drift)
    gauge_defect = op_norm(F.M + adjoint(F.L) @ F.C) if F.dim_k else 0.0
    defect = contractivity_defect(F)
    equality = iso <= tol and drift_defect <= tol and gauge_defect <= tol
    return Classification(
        contractivity_defect=defect,
        is_contractive=defect <= tol,
        c_norm=c_norm,
        c_contractive=c_norm <= 1.0 + tol,
        c_isometric=F.dim_k > 0 and iso <= tol,
        c_coisometric=F.dim_k > 0 and coiso <= tol,
        drift_equality_defect=drift_defect,
        gauge_equality_defect=gauge_defect,
        equality_case=equality,
    )


def random_state(F: BlockGenerator, rng: np.random.Generator) -> np.ndarray:
    """Random unit vector on h + (h (x) k); test helper shared across modules."""
    xi = rng.standard_normal(F.total_dim) + 1j * rng.standard_normal(F.total_dim)
    return xi / np.linalg.norm(xi)
