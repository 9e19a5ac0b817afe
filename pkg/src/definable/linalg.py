"""Exact linear algebra over Q and Q(i).

Two tools: a sparse Gauss-Jordan solver used as the quotient oracle in the
quantum plane, and a batched scan that applies a fixed linear map to every
element of a fragment and reports the first element mapped to zero.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .numerics import GaussianRational, imag_part, lcm_denominator, real_part

_INT64_SAFE = 2**62


def solve_exact(rows: Sequence[dict], rhs: Sequence, ncols: int):
    """Solve ``A h = b`` exactly; rows are sparse ``{col: value}`` dicts.

    Returns the solution list, or ``None`` when the system is inconsistent.
    Pivots are chosen as the first row with a nonzero entry in the column;
    exact arithmetic needs no magnitude pivoting.  Free columns are set to 0
    (they do not occur for the injective systems built here).
    """
    work = [(dict(r), b) for r, b in zip(rows, rhs)]
    pivots: dict[int, int] = {}
    used = set()
    for col in range(ncols):
        p = next((i for i, (r, _) in enumerate(work) if i not in used and r.get(col)), None)
        if p is None:
            continue
        used.add(p)
        prow, pb = work[p]
        inv = 1 / prow[col]
        prow = {c: v * inv for c, v in prow.items()}
        pb = pb * inv
        work[p] = (prow, pb)
        pivots[col] = p
        for i, (r, b) in enumerate(work):
            if i == p:
                continue
            factor = r.get(col)
            if not factor:
                continue
            for c, v in prow.items():
                nv = r.get(c, 0) - factor * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
            work[i] = (r, b - factor * pb)
    for i, (r, b) in enumerate(work):
        if i not in used and not r and b:
            return None
    zero = rhs[0] * 0 if rhs else 0
    return [work[pivots[c]][1] if c in pivots else zero for c in range(ncols)]


def _int_parts(values, scale: int):
    re = [int(real_part(v) * scale) for v in values]
    im = [int(imag_part(v) * scale) for v in values]
    return re, im


class KernelScanner:
    """Find fragment elements whose image under a linear map vanishes.

    ``images[j]`` is the image of the j-th basis monomial of the fragment as a
    ``{output_key: scalar}`` dict; ``watch`` restricts which output keys must
    vanish (all of them by default).  Everything is scaled to integers and
    evaluated in int64 blocks when that provably cannot overflow, otherwise in
    exact Python integers.
    """

    def __init__(self, spec, images: Sequence[dict], watch=None, chunk: int = 1 << 15):
        self.spec = spec
        keys = sorted({k for img in images for k in img})
        if watch is not None:
            keys = [k for k in keys if k in set(watch)]
        self.keys = keys
        entries = [img.get(k, 0) for img in images for k in keys]
        mscale = lcm_denominator(entries) if entries else 1
        vscale = lcm_denominator(spec.values)
        m = len(images)
        self.mr = np.zeros((m, len(keys)), dtype=object)
        self.mi = np.zeros((m, len(keys)), dtype=object)
        for j, img in enumerate(images):
            re, im = _int_parts([img.get(k, 0) for k in keys], mscale)
            self.mr[j, :] = re
            self.mi[j, :] = im
        vr, vi = _int_parts(spec.values, vscale)
        self.vr = np.array(vr, dtype=object)
        self.vi = np.array(vi, dtype=object)
        self.complex = any(vi) or bool(np.any(self.mi != 0))
        bound = max([abs(v) for v in vr + vi] + [0]) * max(
            [abs(int(v)) for v in np.concatenate([self.mr.ravel(), self.mi.ravel()])] + [0]
        ) * 2 * max(m, 1)
        self.native = bound < _INT64_SAFE
        if self.native:
            self.mr, self.mi = self.mr.astype(np.int64), self.mi.astype(np.int64)
            self.vr, self.vi = self.vr.astype(np.int64), self.vi.astype(np.int64)
        self.chunk = chunk
        self.base = len(spec.values)
        self.width = m

    def _digits(self, start: int, stop: int):
        idx = np.arange(start, stop, dtype=np.int64)
        out = np.empty((stop - start, self.width), dtype=np.int64)
        for pos in range(self.width - 1, -1, -1):
            idx, out[:, pos] = np.divmod(idx, self.base)
        return out

    def first_hit(self, exclude_zero: bool = True) -> int | None:
        total = len(self.spec)
        zero_digit = self.spec.values.index(self.spec.values[0] * 0)
        for start in range(0, total, self.chunk):
            stop = min(total, start + self.chunk)
            d = self._digits(start, stop)
            cr, ci = self.vr[d], self.vi[d]
            out_r = cr @ self.mr - ci @ self.mi
            hit = np.all(out_r == 0, axis=1)
            if self.complex:
                out_i = cr @ self.mi + ci @ self.mr
                hit &= np.all(out_i == 0, axis=1)
            if exclude_zero:
                hit &= ~np.all(d == zero_digit, axis=1)
            where = np.flatnonzero(hit)
            if where.size:
                return start + int(where[0])
        return None
