"""Fused generator-application kernel for large composite spaces.

The Lindblad right-hand side is memory-bound at dim ~ 400 when written as a
chain of numpy/scipy products (each product walks the full density matrix).
The numba kernel below fuses the whole evaluation:

    out = G rho + rho G^dag + sum_m C_m rho C_m^dag

with G = -iH - 1/2 sum_m C_m^dag C_m carried as CSR and each (rate-scaled)
collapse operator reduced to "permutation form": at most one entry per row,
C[dst_k, src_k] = val_k, which every lifted ladder operator satisfies. Then

    (C rho C^dag)[dst_i, dst_j] = val_i conj(val_j) rho[src_i, src_j].

Falls back to a plain dense path in :mod:`bilind.liouvillian` when numba is
unavailable or a channel is not in permutation form.
"""

from __future__ import annotations

import warnings

import numpy as np

try:
    import numba

    # stale-TBB probe warning is environment noise, not actionable here
    warnings.filterwarnings("ignore", message=".*TBB.*", category=numba.NumbaWarning)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False


if HAVE_NUMBA:

    # single-threaded on purpose: at dim <= ~700 the loops gain nothing from
    # worker threads, and idle spin-wait threads starve the LAPACK calls that
    # the integrator interleaves with this kernel
    @numba.njit(cache=True, fastmath=True)
    def _rhs_kernel(Gp, Gi, Gv, dst, src, val, choff, rho, out):  # pragma: no cover
        D = rho.shape[0]
        # out = G @ rho
        for i in range(D):
            for j in range(D):
                out[i, j] = 0.0
            for k in range(Gp[i], Gp[i + 1]):
                v = Gv[k]
                c = Gi[k]
                for j in range(D):
                    out[i, j] += v * rho[c, j]
        # out += rho @ G^dag (column j of the result touches row j of G)
        for j in range(D):
            for k in range(Gp[j], Gp[j + 1]):
                v = np.conj(Gv[k])
                c = Gi[k]
                for i in range(D):
                    out[i, j] += rho[i, c] * v
        # collapse channels in permutation form
        n_ch = choff.shape[0] - 1
        for ch in range(n_ch):
            lo = choff[ch]
            hi = choff[ch + 1]
            for ii in range(lo, hi):
                di = dst[ii]
                si = src[ii]
                vi = val[ii]
                for jj in range(lo, hi):
                    out[di, dst[jj]] += vi * np.conj(val[jj]) * rho[si, src[jj]]


class KernelPack:
    """Precompiled CSR/permutation arrays for one generator."""

    __slots__ = ("gp", "gi", "gv", "dst", "src", "val", "choff")

    def __init__(self, g_csr, perm_channels):
        self.gp = g_csr.indptr.astype(np.int64)
        self.gi = g_csr.indices.astype(np.int64)
        self.gv = g_csr.data.astype(np.complex128)
        dst, src, val, off = [], [], [], [0]
        for d, s, v in perm_channels:
            dst.append(d)
            src.append(s)
            val.append(v)
            off.append(off[-1] + len(d))
        if dst:
            self.dst = np.concatenate(dst).astype(np.int64)
            self.src = np.concatenate(src).astype(np.int64)
            self.val = np.concatenate(val).astype(np.complex128)
        else:
            self.dst = np.empty(0, dtype=np.int64)
            self.src = np.empty(0, dtype=np.int64)
            self.val = np.empty(0, dtype=np.complex128)
        self.choff = np.asarray(off, dtype=np.int64)

    def apply(self, rho: np.ndarray, out: np.ndarray) -> np.ndarray:
        _rhs_kernel(
            self.gp, self.gi, self.gv, self.dst, self.src, self.val, self.choff, rho, out
        )
        return out


def permutation_form(op: np.ndarray):
    """Return (dst, src, val) if ``op`` has at most one nonzero per row, else None."""
    rows, cols = np.nonzero(op)
    if len(rows) != len(set(rows.tolist())):
        return None
    return rows.astype(np.int64), cols.astype(np.int64), op[rows, cols].astype(np.complex128)
