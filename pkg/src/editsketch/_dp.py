"""Edit-distance dynamic-programming cores.

Everything that walks a Levenshtein lattice lives here: full tables, banded
(Ukkonen-style) computations, semi-global sweeps for minimizing over text
substrings/prefixes, and the canonical backtrace.

The backtrace tie-break is fixed once for the whole package: at a cell, an
aligned step (match/substitution) is preferred over a deletion, which is
preferred over an insertion.  Every optimal alignment the package reports is
produced by this rule, which makes encoder, decoder, and oracles agree
bit-for-bit on alignments and edit information.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

INF = 1 << 30

Points = List[Tuple[int, int]]


# ---------------------------------------------------------------------------
# full-table DP (small inputs, oracle paths)


def full_table(x: Sequence[int], y: Sequence[int]) -> List[List[int]]:
    """Standard (len(x)+1) x (len(y)+1) edit-distance table."""
    n, m = len(x), len(y)
    prev = list(range(m + 1))
    rows = [prev]
    for i in range(1, n + 1):
        xi = x[i - 1]
        cur = [i] + [0] * m
        for j in range(1, m + 1):
            a = prev[j - 1] + (xi != y[j - 1])
            b = prev[j] + 1
            c = cur[j - 1] + 1
            cur[j] = a if a <= b else b
            if c < cur[j]:
                cur[j] = c
        rows.append(cur)
        prev = cur
    return rows


def edit_distance(x: Sequence[int], y: Sequence[int]) -> int:
    return full_table(x, y)[-1][-1]


# ---------------------------------------------------------------------------
# banded DP against one text window, rows kept for backtraces

class BandRows:
    """Rows of a banded DP of pattern x against window w, radius r.

    Row i stores values for text offsets j in [i - r, i + r] clipped to
    [0, len(w)]; value INF marks unreachable cells.
    """

    __slots__ = ("x", "w", "r", "rows")

    def __init__(self, x: Sequence[int], w: Sequence[int], r: int):
        self.x = x
        self.w = w
        self.r = r
        n, m = len(x), len(w)
        row0 = list(range(min(m, r) + 1))
        rows: List[List[int]] = [row0]
        append = rows.append
        prev, plo = row0, 0
        for i in range(1, n + 1):
            lo = i - r
            if lo < 0:
                lo = 0
            hi = i + r
            if hi > m:
                hi = m
            if lo > hi:
                append([])
                prev, plo = [], lo
                continue
            xi = x[i - 1]
            cur = []
            push = cur.append
            plen = len(prev)
            left = INF
            for j in range(lo, hi + 1):
                best = INF
                pj = j - 1 - plo
                if 0 <= pj < plen:
                    best = prev[pj] + (xi != w[j - 1])
                pj += 1
                if 0 <= pj < plen:
                    v = prev[pj] + 1
                    if v < best:
                        best = v
                if left < best:
                    best = left
                push(best)
                left = best + 1
            append(cur)
            prev, plo = cur, lo
        self.rows = rows

    def lo(self, i: int) -> int:
        return max(0, i - self.r) if i else 0

    def value(self, i: int, j: int) -> int:
        lo = self.lo(i)
        row = self.rows[i]
        idx = j - lo
        if idx < 0 or idx >= len(row):
            return INF
        return row[idx]

    def last_row_costs(self) -> Dict[int, int]:
        """Map end offset j -> cost of aligning all of x onto w[0:j)."""
        n = len(self.x)
        lo = self.lo(n)
        return {lo + idx: v for idx, v in enumerate(self.rows[n]) if v < INF}

    def backtrace(self, j_end: int) -> Points:
        """Canonical path (aligned > delete > insert) from (0,0) to (n, j_end)."""
        x, w = self.x, self.w
        i, j = len(x), j_end
        path = [(i, j)]
        while i > 0 or j > 0:
            v = self.value(i, j)
            if i > 0 and j > 0 and self.value(i - 1, j - 1) + (x[i - 1] != w[j - 1]) == v:
                i, j = i - 1, j - 1
            elif i > 0 and self.value(i - 1, j) + 1 == v:
                i -= 1
            elif j > 0 and self.value(i, j - 1) + 1 == v:
                j -= 1
            else:  # pragma: no cover - indicates a corrupted band
                raise AssertionError("banded backtrace stranded")
            path.append((i, j))
        path.reverse()
        return path


def align_pair(x: Sequence[int], y: Sequence[int]) -> Tuple[int, Points]:
    """Cost and canonical optimal path of x onto all of y.

    Runs a banded DP with a widening radius; once the band radius reaches the
    true cost the backtrace coincides with the full-table one.
    """
    n, m = len(x), len(y)
    r = abs(n - m) + 4
    while True:
        band = BandRows(x, y, r)
        cost = band.value(n, m)
        if cost <= r:
            return cost, band.backtrace(m)
        if r > n + m:  # pragma: no cover - cost is always <= n + m
            raise AssertionError("edit distance band exhausted")
        r = min(2 * r, n + m + 1)


def bounded_pair(x: Sequence[int], y: Sequence[int], k: int) -> Optional[Tuple[int, Points]]:
    """(cost, canonical path) if edit distance <= k, else None."""
    if abs(len(x) - len(y)) > k:
        return None
    band = BandRows(x, y, k)
    cost = band.value(len(x), len(y))
    if cost > k:
        return None
    return cost, band.backtrace(len(y))


def end_costs_for_start(
    x: Sequence[int], t: Sequence[int], t0: int, k: int
) -> Dict[int, int]:
    """All absolute ends e with edit_distance(x, t[t0:e]) <= k, mapped to cost."""
    w = t[t0 : t0 + len(x) + k]
    band = BandRows(x, w, k)
    return {t0 + j: c for j, c in band.last_row_costs().items() if c <= k}


# ---------------------------------------------------------------------------
# numpy row sweeps (semi-global distances on longer strings)


def _np_codes(x: Sequence[int]) -> np.ndarray:
    return np.asarray(x, dtype=np.int32)


def _row_sweep(x: np.ndarray, u: np.ndarray, first_row: np.ndarray) -> np.ndarray:
    """Final DP row for pattern x against u, given the first row."""
    m = len(u)
    prev = first_row
    idx = np.arange(m + 1, dtype=np.int32)
    for i in range(1, len(x) + 1):
        sub = (u != x[i - 1]).astype(np.int32)
        body = np.minimum(prev[:-1] + sub, prev[1:] + 1)
        b = np.empty(m + 1, dtype=np.int32)
        b[0] = prev[0] + 1
        b[1:] = body
        prev = idx + np.minimum.accumulate(b - idx)
    return prev


def semiglobal_end_row(x: Sequence[int], u: Sequence[int]) -> np.ndarray:
    """Row D with D[j] = min_i edit_distance(x, u[i:j])  (free start in u)."""
    xa, ua = _np_codes(x), _np_codes(u)
    first = np.zeros(len(ua) + 1, dtype=np.int32)
    return _row_sweep(xa, ua, first)


def prefix_cost_row(x: Sequence[int], u: Sequence[int]) -> np.ndarray:
    """Row D with D[j] = edit_distance(x, u[0:j])."""
    xa, ua = _np_codes(x), _np_codes(u)
    first = np.arange(len(ua) + 1, dtype=np.int32)
    return _row_sweep(xa, ua, first)


def min_over_substrings(x: Sequence[int], u: Sequence[int]) -> Tuple[int, int, int]:
    """(cost, i, j) minimizing edit_distance(x, u[i:j]) over all fragments of u."""
    if len(x) == 0:
        return 0, 0, 0
    if len(u) == 0:
        return len(x), 0, 0
    row = semiglobal_end_row(x, u)
    j = int(np.argmin(row))
    cost = int(row[j])
    # recover the start by sweeping the reversed prefix u[0:j]
    rrow = semiglobal_end_row(list(x)[::-1], list(u[:j])[::-1])
    length = int(np.argmin(rrow))
    assert int(rrow[length]) == cost
    return cost, j - length, j


# ---------------------------------------------------------------------------
# batched banded verification (many starts against one text)


def batch_verify_starts(
    x: Sequence[int], t: Sequence[int], starts: Sequence[int], k: int
) -> List[Tuple[int, int, int]]:
    """All (start, end, cost) triples with cost <= k, start drawn from `starts`.

    Vectorized across starts; equivalent to running end_costs_for_start on
    each start.  Cells beyond the text end are allowed to hold junk: the DP
    only reads leftward/upward, so in-range cells are unaffected, and the
    output filter drops out-of-range ends.
    """
    if not len(starts):
        return []
    n = len(t)
    m = len(x)
    if n == 0:
        return [(0, 0, m)] if m <= k and 0 in set(starts) else []
    st_all = sorted(set(starts))
    out: List[Tuple[int, int, int]] = []
    width = 2 * k + 1
    win = m + 2 * k  # per-start character window: offsets i-1+d, d in [-k, k]
    chunk = min(4096, max(1, (32 << 20) // max(1, 2 * win)))
    max_code = max(max(t, default=0), max(x))
    cdtype = np.int16 if max_code < 30000 else np.int32
    # pattern never matches the pad value, so out-of-range cells only grow
    ta_pad = np.full(n + win + 2, -1, dtype=cdtype)
    ta_pad[k : k + n] = np.asarray(t, dtype=cdtype)
    windows_all = np.lib.stride_tricks.sliding_window_view(ta_pad, win)
    vdtype = np.int16 if 2 * (m + k) + 100 < 30000 else np.int32
    inf = (m + k) + 50
    offs = np.arange(width, dtype=vdtype)
    d0 = np.arange(-k, k + 1)
    v_init = np.where(d0 >= 0, d0, inf).astype(vdtype)
    for c0 in range(0, len(st_all), chunk):
        st = np.asarray(st_all[c0 : c0 + chunk], dtype=np.int64)
        S = len(st)
        W = windows_all[st]  # W[s, k + j] = t[st[s] + j], pad outside
        V = np.broadcast_to(v_init, (S, width)).copy()
        up = np.empty_like(V)
        M = np.empty_like(V)
        neq = np.empty((S, width), dtype=bool)
        for i in range(1, m + 1):
            chars = W[:, i - 1 : i - 1 + width]
            np.not_equal(chars, x[i - 1], out=neq)
            np.add(V, neq, out=M, casting="unsafe")
            np.add(V[:, 1:], 1, out=up[:, :-1])
            up[:, -1] = inf
            np.minimum(M, up, out=M)
            M -= offs
            np.minimum.accumulate(M, axis=1, out=M)
            np.add(M, offs, out=V)
            if i < k:  # offsets j = i + d < 0 stay unreachable
                V[:, : k - i] = inf
        ok = V <= k
        if ok.any():
            si, di = np.nonzero(ok)
            for a, b in zip(si.tolist(), di.tolist()):
                s0 = int(st[a])
                e = s0 + m + (b - k)
                if e <= n:
                    out.append((s0, e, int(V[a, b])))
    return out


# ---------------------------------------------------------------------------
# self-alignment DP (no character aligned to itself)


def selfed_cost(x: Sequence[int], cap: Optional[int] = None) -> Optional[int]:
    """Minimum cost of a self-alignment of x; None if it exceeds `cap`.

    The only difference from a plain edit-distance DP of x against itself is
    that the aligned transition out of a main-diagonal cell is forbidden:
    there it would necessarily match a character with itself.
    """
    n = len(x)
    if n == 0:
        return 0
    if n <= 160 or cap is None:
        prev = list(range(n + 1))
        for i in range(1, n + 1):
            xi = x[i - 1]
            cur = [i] + [0] * n
            for j in range(1, n + 1):
                best = prev[j] + 1
                c = cur[j - 1] + 1
                if c < best:
                    best = c
                if i != j:  # diagonal step out of (i-1, j-1) forbidden iff i-1 == j-1
                    a = prev[j - 1] + (xi != x[j - 1])
                    if a < best:
                        best = a
                cur[j] = best
            prev = cur
        v = prev[n]
    else:
        xa = _np_codes(x)
        prev = np.arange(n + 1, dtype=np.int32)
        idx = np.arange(n + 1, dtype=np.int32)
        for i in range(1, n + 1):
            sub = (xa != xa[i - 1]).astype(np.int32)
            diag = prev[:-1] + sub
            if i <= n:
                diag[i - 1] = INF  # (i-1, j-1) with j-1 == i-1
            body = np.minimum(diag, prev[1:] + 1)
            b = np.empty(n + 1, dtype=np.int32)
            b[0] = prev[0] + 1
            b[1:] = body
            prev = idx + np.minimum.accumulate(b - idx)
        v = int(prev[n])
    if cap is not None and v > cap:
        return None
    return v


def selfed_witness(x: Sequence[int]) -> Tuple[int, Points]:
    """(cost, canonical self-alignment path) by full-table backtrace."""
    n = len(x)
    if n == 0:
        return 0, [(0, 0)]
    rows = [list(range(n + 1))]
    for i in range(1, n + 1):
        xi = x[i - 1]
        prev = rows[-1]
        cur = [i] + [0] * n
        for j in range(1, n + 1):
            best = prev[j] + 1
            c = cur[j - 1] + 1
            if c < best:
                best = c
            if i != j:
                a = prev[j - 1] + (xi != x[j - 1])
                if a < best:
                    best = a
            cur[j] = best
        rows.append(cur)
    i = j = n
    path = [(i, j)]
    while i > 0 or j > 0:
        v = rows[i][j]
        if i > 0 and j > 0 and i != j and rows[i - 1][j - 1] + (x[i - 1] != x[j - 1]) == v:
            i, j = i - 1, j - 1
        elif i > 0 and rows[i - 1][j] + 1 == v:
            i -= 1
        else:
            j -= 1
        path.append((i, j))
    path.reverse()
    return rows[n][n], path
