"""Schur-product criterion probes and the Yosida approximation pipeline.

A probe fixes an n-tuple of slice vectors c, a time t, positive definite
weights A and B, and a block column Y in B(C^n; h^n) normalized so that
|A^{-1/2} Y B^{-1/2}| <= 1.  The criterion quantity is

    | (A o w)^{-1/2} (Q o Y) (B o w)^{-1/2} |  - 1

with w the Gram matrix [exp(-t chi(c_i, c_j))], o the Schur product (scalar
against scalar, and operator-block against vector-block for Q o Y).  For
families generated by a contractive block generator the defect is <= 0 up to
roundoff; screening is falsification-only since no finite probe set exhausts
the criterion's quantifiers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .generator import BlockGenerator, chi, contractivity_defect, yosida_approx
from .opcore import op_norm, psd_inv_sqrt, schur_product
from .semigroups import SemigroupFamily

PASS_TOL = 1e-9
DEGENERATE_TOL = 1e-12


def varpi_matrix(c_tuple, t: float) -> np.ndarray:
    """Gram matrix [exp(-t chi(c_i, c_j))]; Hermitian PSD with unit diagonal."""
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    c_tuple = [np.asarray(c, dtype=np.complex128).reshape(-1) for c in c_tuple]
    n = len(c_tuple)
    w = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            w[i, j] = np.exp(-t * chi(c_tuple[i], c_tuple[j]))
    return w


@dataclass(frozen=True)
class Probe:
    c_tuple: np.ndarray  # (n, dim_k)
    t: float
    a: np.ndarray
    b: np.ndarray
    y: np.ndarray  # (n * dim_h, n)
    probe_id: int = 0


@dataclass(frozen=True)
class ProbeReport:
    probe_id: int
    n: int
    t: float
    defect: float
    passed: bool
    skipped: bool

    def csv_row(self) -> tuple:
        return (self.probe_id, self.n, self.t, self.defect, self.passed, self.skipped)


def make_probe(c_tuple, t, a, b, y, dim_h: int, probe_id: int = 0) -> Probe:
    """Validate shapes and rescale Y so the criterion precondition holds.

    The scalar weight matrices act on C^n blockwise, so A^{-1/2} is ampliated
    by the identity of h before touching Y.
    """
    c_arr = np.atleast_2d(np.asarray(c_tuple, dtype=np.complex128))
    n = c_arr.shape[0]
    a = np.asarray(a, dtype=np.complex128).reshape(n, n)
    b = np.asarray(b, dtype=np.complex128).reshape(n, n)
    y = np.asarray(y, dtype=np.complex128).reshape(n * dim_h, n)
    eye_h = np.eye(dim_h, dtype=np.complex128)
    bound = op_norm(np.kron(psd_inv_sqrt(a), eye_h) @ y @ psd_inv_sqrt(b))
    if bound > 1.0:
        y = y / bound
    return Probe(c_tuple=c_arr, t=float(t), a=a, b=b, y=y, probe_id=probe_id)


def _schur_apply(family: SemigroupFamily, c_tuple: np.ndarray, t: float, y: np.ndarray) -> np.ndarray:
    """Blockwise product [Q^{c_i,c_j}_t y_ij]: operator blocks against columns."""
    dh = family.source.dim_h
    n = c_tuple.shape[0]
    out = np.empty_like(y)
    for i in range(n):
        for j in range(n):
            q = family.q(c_tuple[i], c_tuple[j], t)
            out[i * dh : (i + 1) * dh, j] = q @ y[i * dh : (i + 1) * dh, j]
    return out


def schur_criterion_check(
    family: SemigroupFamily, probe: Probe, tol: float = PASS_TOL
) -> ProbeReport:
    """Evaluate one probe; defect is the criterion norm minus one.

    Probes whose weighted Gram matrices fall below the degeneracy tolerance
    are reported as skipped, never silently passed.
    """
    n = probe.c_tuple.shape[0]
    w = varpi_matrix(probe.c_tuple, probe.t)
    aw = schur_product(probe.a, w)
    bw = schur_product(probe.b, w)
    try:
        sa = psd_inv_sqrt(aw, tol=DEGENERATE_TOL)
        sb = psd_inv_sqrt(bw, tol=DEGENERATE_TOL)
    except ValueError:
        return ProbeReport(
            probe_id=probe.probe_id, n=n, t=probe.t, defect=np.nan,
            passed=False, skipped=True,
        )
    qy = _schur_apply(family, probe.c_tuple, probe.t, probe.y)
    dh = family.source.dim_h
    crit = np.kron(sa, np.eye(dh, dtype=np.complex128)) @ qy @ sb
    defect = op_norm(crit) - 1.0
    return ProbeReport(
        probe_id=probe.probe_id, n=n, t=probe.t, defect=float(defect),
        passed=defect <= tol, skipped=False,
    )


def deterministic_core_probes(F: BlockGenerator) -> list[Probe]:
    """n = 1 probes over c in {0, standard basis}, Y over the h basis,
    t in {0.1, 0.5, 1}; catches any Q^{c,c} contraction failure reproducibly."""
    dh, dk = F.dim_h, F.dim_k
    cs = [np.zeros(dk, dtype=np.complex128)]
    for a in range(dk):
        e = np.zeros(dk, dtype=np.complex128)
        e[a] = 1.0
        cs.append(e)
    probes = []
    one = np.ones((1, 1))
    for c in cs:
        for p in range(dh):
            y = np.zeros((dh, 1), dtype=np.complex128)
            y[p, 0] = 1.0
            for t in (0.1, 0.5, 1.0):
                probes.append(
                    make_probe([c], t, one, one, y, dim_h=dh, probe_id=len(probes))
                )
    return probes


def screen_family(
    F: BlockGenerator,
    n_max: int,
    samples: int,
    seed: int,
    tol: float = PASS_TOL,
) -> list[ProbeReport]:
    """Deterministic-core plus randomized probe screen, sorted worst first.

    Random c-tuples always contain the zero vector; A and B are random
    positive definite, Y random and rescaled to the precondition.  Output is
    a pure function of (F, n_max, samples, seed).
    """
    if n_max < 1 or samples < 1:
        raise ValueError("n_max and samples must be >= 1")
    family = SemigroupFamily(F)
    rng = np.random.default_rng(seed)
    dh, dk = F.dim_h, F.dim_k
    probes = deterministic_core_probes(F)

    def cplx(shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    for _ in range(samples):
        n = int(rng.integers(1, n_max + 1))
        c_tuple = np.zeros((n, dk), dtype=np.complex128)
        if n > 1 and dk:
            c_tuple[1:] = cplx((n - 1, dk)) / np.sqrt(2.0 * dk)
        t = float(rng.uniform(0.0, 2.0))
        xa = cplx((n, n))
        xb = cplx((n, n))
        a = xa @ np.conj(xa.T) / n + 0.25 * np.eye(n)
        b = xb @ np.conj(xb.T) / n + 0.25 * np.eye(n)
        y = cplx((n * dh, n))
        probes.append(make_probe(c_tuple, t, a, b, y, dim_h=dh, probe_id=len(probes)))

    reports = [schur_criterion_check(family, p, tol=tol) for p in probes]
    reports.sort(key=lambda r: (-(r.defect if np.isfinite(r.defect) else -np.inf), r.probe_id))
    return reports


@dataclass(frozen=True)
class ConvergenceRow:
    pair_index: int
    n: int
    sup_error: float


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple
    horizon: float
    monotone: bool

    def errors_for_pair(self, pair_index: int) -> list[float]:
        ordered = [r for r in self.rows if r.pair_index == pair_index]
        return [r.sup_error for r in sorted(ordered, key=lambda r: r.n)]


def trotter_kato_pipeline(
    F: BlockGenerator,
    n_list,
    probe_pairs=None,
    T: float = 1.0,
    grid_points: int = 11,
    contractivity_tol: float = 1e-8,
    slack: float = 1.1,
) -> ConvergenceReport:
    """Sup-grid semigroup errors of the resolvent-regularized generators.

    For each n the regularized generator is built, and per probe pair (c, d)
    the error sup_{t in grid} |Q^{(n)c,d}_t - Q^{c,d}_t| is recorded; the
    report flags whether errors decrease along ``n_list`` within the slack.
    """
    n_list = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(n_list[:-1], n_list[1:])):
        raise ValueError("n_list must be strictly increasing")
    defect = contractivity_defect(F)
    if defect > contractivity_tol:
        raise ValueError(
            f"pipeline needs a contractive generator; defect {defect:.3g}"
        )
    if probe_pairs is None:
        zero = np.zeros(F.dim_k, dtype=np.complex128)
        probe_pairs = [(zero, zero)]
        if F.dim_k:
            e1 = np.zeros(F.dim_k, dtype=np.complex128)
            e1[0] = 1.0
            probe_pairs += [(e1, e1), (e1, zero)]
    base = SemigroupFamily(F)
    grid = np.linspace(0.0, T, grid_points)
    rows = []
    for n in n_list:
        fam_n = SemigroupFamily(yosida_approx(F, n))
        for pair_index, (c, d) in enumerate(probe_pairs):
            err = max(
                op_norm(fam_n.q(c, d, t) - base.q(c, d, t)) for t in grid
            )
            rows.append(ConvergenceRow(pair_index=pair_index, n=n, sup_error=err))
    monotone = True
    for pair_index in range(len(probe_pairs)):
        errs = [r.sup_error for r in rows if r.pair_index == pair_index]
        for prev, nxt in zip(errs[:-1], errs[1:]):
            if nxt > slack * prev + 1e-14:
                monotone = False
    return ConvergenceReport(rows=tuple(rows), horizon=float(T), monotone=monotone)
