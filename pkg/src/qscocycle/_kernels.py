"""Hot inner loops of the repeated-interaction oracle.

Two backends with identical semantics: numba ``@njit`` kernels and pure
numpy.  Selection is controlled by the environment variable
``QSCOCYCLE_BACKEND``:

    auto   (default) use numba when importable, else numpy
    numba  require numba, raise if missing
    numpy  force the pure-numpy path

``backend_name()`` reports what is actually in use; the benchmark script
under benchmarks/ compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_REQUESTED = os.environ.get("QSCOCYCLE_BACKEND", "auto").lower()
if _REQUESTED not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"QSCOCYCLE_BACKEND must be auto, numba, or numpy; got {_REQUESTED!r}"
    )

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:
    _HAVE_NUMBA = False
    if _REQUESTED == "numba":
        raise RuntimeError("QSCOCYCLE_BACKEND=numba but numba is not importable")

_USE_NUMBA = _HAVE_NUMBA and _REQUESTED != "numpy"


def backend_name() -> str:
    return "numba" if _USE_NUMBA else "numpy"


def element_chain_numpy(mats: np.ndarray, piece_idx: np.ndarray) -> np.ndarray:
    """Sequential product I @ mats[piece_idx[0]] @ mats[piece_idx[1]] ..."""
    dh = mats.shape[1]
    acc = np.eye(dh, dtype=np.complex128)
    for i in piece_idx:
        acc = acc @ mats[i]
    return acc


def slot_apply_numpy(state: np.ndarray, g4: np.ndarray, dh: int, m: int, n: int) -> np.ndarray:
    """Apply the step contraction to (h, slot j) for j = n down to 1.

    ``state`` is the flattened h (x) slot_1 (x) ... (x) slot_n vector with h
    slowest and slot n fastest; ``g4`` is the step matrix reshaped to
    (dh, m, dh, m).
    """
    cur = state
    for j in range(n, 0, -1):
        pre = m ** (j - 1)
        post = m ** (n - j)
        four = cur.reshape(dh, pre, m, post)
        cur = np.einsum("paqb,qxby->pxay", g4, four).reshape(-1)
    return cur


if _HAVE_NUMBA:

    @njit(cache=True)
    def _element_chain_numba(mats, piece_idx):  # pragma: no cover - jitted
        dh = mats.shape[1]
        acc = np.eye(dh, dtype=np.complex128)
        tmp = np.empty((dh, dh), dtype=np.complex128)
        for s in range(piece_idx.shape[0]):
            mat = mats[piece_idx[s]]
            for p in range(dh):
                for q in range(dh):
                    val = 0.0 + 0.0j
                    for r in range(dh):
                        val += acc[p, r] * mat[r, q]
                    tmp[p, q] = val
            acc[:, :] = tmp
        return acc

    @njit(cache=True)
    def _slot_apply_numba(state, g4, dh, m, n):  # pragma: no cover - jitted
        cur = state.copy()
        buf = np.empty_like(cur)
        for j in range(n, 0, -1):
            pre = m ** (j - 1)
            post = m ** (n - j)
            buf[:] = 0.0 + 0.0j
            for p in range(dh):
                for a in range(m):
                    for q in range(dh):
                        for b in range(m):
                            g = g4[p, a, q, b]
                            if g == 0.0:
                                continue
                            for x in range(pre):
                                src = ((q * pre + x) * m + b) * post
                                dst = ((p * pre + x) * m + a) * post
                                for y in range(post):
                                    buf[dst + y] += g * cur[src + y]
            cur, buf = buf, cur
        return cur


def element_chain(mats: np.ndarray, piece_idx: np.ndarray) -> np.ndarray:
    mats = np.ascontiguousarray(mats, dtype=np.complex128)
    piece_idx = np.ascontiguousarray(piece_idx, dtype=np.int64)
    if _USE_NUMBA:
        return _element_chain_numba(mats, piece_idx)
    return element_chain_numpy(mats, piece_idx)


def slot_apply(state: np.ndarray, g4: np.ndarray, dh: int, m: int, n: int) -> np.ndarray:
    state = np.ascontiguousarray(state, dtype=np.complex128)
    g4 = np.ascontiguousarray(g4, dtype=np.complex128)
    if _USE_NUMBA:
        return _slot_apply_numba(state, g4, dh, m, n)
    return slot_apply_numpy(state, g4, dh, m, n)
