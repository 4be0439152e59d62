"""Vectorised exhaustive evaluation of Tr W over representation spaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..ncalg import Potential
from ..quiver import Quiver
from .field import FiniteField

CHUNK = 1 << 18


@dataclass(frozen=True)
class Layout:
    """Positions of arrow-matrix entries inside a flat point index (row-major, arrow order)."""

    quiver: Quiver
    gamma: tuple[int, ...]
    offsets: tuple[int, ...]
    size: int

    @classmethod
    def of(cls, quiver: Quiver, gamma: Sequence[int]) -> "Layout":
        g = quiver.dimvec(gamma)
        offs, pos = [], 0
        for a in quiver.arrows:
            offs.append(pos)
            pos += g[a.target] * g[a.source]
        return cls(quiver, g, tuple(offs), pos)

    def matrices(self, entries: np.ndarray) -> list[list[list[np.ndarray]]]:
        """Split an (R, batch) entry array into per-arrow nested row lists of arrays."""
        out = []
        for a, off in zip(self.quiver.arrows, self.offsets):
            r, c = self.gamma[a.target], self.gamma[a.source]
            out.append([[entries[off + i * c + j] for j in range(c)] for i in range(r)])
        return out


def decode(lo: int, hi: int, q: int, width: int) -> np.ndarray:
    """Base-q digits (least significant first) of the integers lo..hi-1, shape (width, hi-lo)."""
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((width, hi - lo), dtype=np.int64)
    for j in range(width):
        out[j] = idx % q
        idx //= q
    return out


def matmul(F: FiniteField, A, B, batch: int):
    rows, inner = len(A), len(B)
    cols = len(B[0]) if B else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = np.zeros(batch, dtype=np.int64)
            for k in range(inner):
                acc = F.vadd(acc, F.vmul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(row)
    return out


def trace_values(F: FiniteField, W: Potential, layout: Layout, entries: np.ndarray) -> np.ndarray:
    """Tr W at every point of a batch (entries has shape (R, batch))."""
    batch = entries.shape[1]
    mats = layout.matrices(entries)
    total = np.zeros(batch, dtype=np.int64)
    g = layout.gamma
    arrows = layout.quiver.arrows
    for w, c in W.terms.items():
        n = g[arrows[w[0]].source]
        if n == 0:
            continue
        acc = None
        for idx in w:
            acc = mats[idx] if acc is None else matmul(F, mats[idx], acc, batch)
        tr = np.zeros(batch, dtype=np.int64)
        for i in range(n):
            tr = F.vadd(tr, acc[i][i])
        total = F.vadd(total, F.vmul(np.int64(F.from_rational(c)), tr))
    return total


def batched_rank(F: FiniteField, mat: np.ndarray) -> np.ndarray:
    """Ranks of a batch of matrices, shape (batch, rows, cols), over F."""
    m = mat.copy()
    batch, rows, cols = m.shape
    rank = np.zeros(batch, dtype=np.int64)
    ar = np.arange(batch)
    for col in range(cols):
        # candidate pivot row: first row >= rank with a nonzero entry in this column
        cand = np.full(batch, -1, dtype=np.int64)
        for r in range(rows - 1, -1, -1):
            ok = (r >= rank) & (m[ar, np.minimum(r, rows - 1), col] != 0)
            cand = np.where(ok, r, cand)
        has = cand >= 0
        if not has.any():
            continue
        b = ar[has]
        pr = cand[has]
        tr = rank[has]
        # swap pivot row into position rank
        tmp = m[b, pr, :].copy()
        m[b, pr, :] = m[b, tr, :]
        m[b, tr, :] = tmp
        inv = F.exp_table[(-F.log_table[m[b, tr, col]]) % (F.q - 1)]
        m[b, tr, :] = F.vmul(inv[:, None], m[b, tr, :])
        for r in range(rows):
            f = m[b, r, col]
            elim = (r != tr) & (f != 0)
            if elim.any():
                bb = b[elim]
                m[bb, r, :] = F.vsub(m[bb, r, :], F.vmul(f[elim][:, None], m[bb, tr[elim], :]))
        rank[has] += 1
    return rank


def generated(F: FiniteField, quiver: Quiver, gamma: Sequence[int], mats, framing, batch: int) -> np.ndarray:
    """Whether the framing vectors generate the representation, per batch point.

    ``framing[i]`` is a list of column vectors (each a list of arrays) at vertex i.
    """
    g = tuple(gamma)
    n = sum(g)
    if n == 0:
        return np.ones(batch, dtype=bool)
    start = [sum(g[:i]) for i in range(len(g))]
    # frontier of vectors, each tagged by vertex; closure under arrows to depth n-1
    columns = []
    frontier = [(i, v) for i in range(len(g)) for v in framing[i] if g[i] > 0]
    for _ in range(n):
        columns.extend(frontier)
        nxt = []
        for i, v in frontier:
            for a, M in zip(quiver.arrows, mats):
                if a.source == i and g[a.target] > 0:
                    nxt.append((a.target, [
                        _dot(F, M[r], v, batch) for r in range(g[a.target])
                    ]))
        frontier = nxt
    big = np.zeros((batch, n, len(columns)), dtype=np.int64)
    for j, (i, v) in enumerate(columns):
        for r in range(g[i]):
            big[:, start[i] + r, j] = v[r]
    return batched_rank(F, big) == n


def _dot(F, row, vec, batch):
    acc = np.zeros(batch, dtype=np.int64)
    for x, y in zip(row, vec):
        acc = F.vadd(acc, F.vmul(x, y))
    return acc


def count_chunk(args) -> tuple[int, int, int]:
    """(N0, N1, domain size) over point indices [lo, hi)."""
    F, W, layout, frame_m, lo, hi = args
    q = F.q
    R = layout.size
    g = layout.gamma
    width = R + frame_m * sum(g)
    ent = decode(lo, hi, q, width)
    batch = hi - lo
    vals = trace_values(F, W, layout, ent[:R]) if not W.is_zero() else np.zeros(batch, dtype=np.int64)
    if frame_m:
        mats = layout.matrices(ent[:R])
        framing = []
        pos = R
        for i in range(len(g)):
            vecs = []
            for _ in range(frame_m):
                vecs.append([ent[pos + r] for r in range(g[i])])
                pos += g[i]
            framing.append(vecs)
        keep = generated(F, layout.quiver, g, mats, framing, batch)
        vals = vals[keep]
        domain = int(keep.sum())
    else:
        domain = batch
    return int((vals == 0).sum()), int((vals == 1).sum()), domain


def brute_counts(F: FiniteField, W: Potential, gamma, frame_m: int = 0, jobs: int = 1) -> tuple[int, int, int]:
    layout = Layout.of(W.quiver, gamma)
    total = F.q ** (layout.size + frame_m * sum(layout.gamma))
    tasks = [(F, W, layout, frame_m, lo, min(lo + CHUNK, total)) for lo in range(0, total, CHUNK)]
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(count_chunk, tasks))
    else:
        parts = [count_chunk(t) for t in tasks]
    n0 = sum(p[0] for p in parts)
    n1 = sum(p[1] for p in parts)
    dom = sum(p[2] for p in parts)
    return n0, n1, dom
