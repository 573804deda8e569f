"""End-to-end k-error matching: reference path and candidate pipeline.

The reference path (match_banded) runs a banded sweep from every text
position.  The pipeline analyzes the pattern once, generates a provably
complete candidate-start set according to the decomposition case, and
verifies only the candidates.  Candidate generation is deterministic: every
break (or region) contributes, rather than a sampled one, which turns the
probabilistic completeness claims into plain superset guarantees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from . import _dp
from .alignment import CostedOccurrence
from .analysis import Decomposition, analyze, edit_budget
from .distance import ed_periodic_witness, end_costs
from .strings import exact_occurrences
from .symbols import Str
from .window import grow_window_structure

Pair = Tuple[int, int, int]


class CandidateSupersetBroken(AssertionError):
    """A candidate set missed a true occurrence start (checked in tests)."""


def assert_superset(p: Str, t: Str, k: int, cand: "CandidateSet") -> None:
    """Oracle check that every true occurrence start is a candidate."""
    truth = {o.start for o in match_banded(p, t, k)}
    missing = truth - cand.starts
    if missing:
        raise CandidateSupersetBroken(f"candidates missed starts {sorted(missing)[:8]}")


@dataclass
class CandidateSet:
    """Candidate occurrence starts with provenance tags."""

    k: int
    starts: Set[int] = field(default_factory=set)
    provenance: Dict[int, str] = field(default_factory=dict)

    def add_range(self, lo: int, hi: int, tag: str, clip_hi: int) -> None:
        for x in range(max(0, lo), min(hi, clip_hi) + 1):
            if x not in self.starts:
                self.starts.add(x)
                self.provenance[x] = tag

    def sorted_starts(self) -> List[int]:
        return sorted(self.starts)

    def buckets(self) -> Set[int]:
        return {s // self.k for s in self.starts} if self.k else set(self.starts)


# ---------------------------------------------------------------------------


def match_banded(p: Str, t: Str, k: int) -> Set[CostedOccurrence]:
    """Reference matcher: every qualifying (start, end) pair by banded DP."""
    return _verify_starts(p, t, k, range(0, _start_limit(p, t, k) + 1))


def _start_limit(p: Str, t: Str, k: int) -> int:
    return max(-1, min(len(t), len(t) - len(p) + k))


def _verify_starts(p: Str, t: Str, k: int, starts) -> Set[CostedOccurrence]:
    starts = [s for s in starts if 0 <= s <= _start_limit(p, t, k)]
    out: Set[CostedOccurrence] = set()
    if len(starts) > 48 and len(p) > 32:
        for s0, e, c in _dp.batch_verify_starts(p.codes, t.codes, starts, k):
            out.add(CostedOccurrence(s0, e, c))
        return out
    for s0 in starts:
        for e, c in end_costs(p, t, s0, k).items():
            out.add(CostedOccurrence(s0, e, c))
    return out


# ---------------------------------------------------------------------------
# case (a): breaks


def candidates_breaks(p: Str, t: Str, k: int, d: Decomposition) -> CandidateSet:
    """Exact occurrences of every break, widened by the edit budget k.

    Any cost-<=k occurrence leaves at least k of the 2k disjoint breaks
    edit-free, so the break occurs exactly in the text within k positions of
    its pattern offset.
    """
    cand = CandidateSet(k)
    clip = _start_limit(p, t, k)
    for br in d.breaks:
        b = p[br.start : br.end]
        for x in exact_occurrences(b, t):
            cand.add_range(x - br.start - k, x - br.start + k, f"break@{br.start}", clip)
    return cand


# ---------------------------------------------------------------------------
# cases (b) and (c): periodic machinery


def _prefix_rowmins_and_final(x, u, upto: int):
    """Row minima of the prefix-cost DP of x against u, plus row `upto`."""
    rowmins = np.empty(len(x) + 1, dtype=np.int32)
    xa = np.asarray(x, dtype=np.int32)
    ua = np.asarray(u, dtype=np.int32)
    mcols = len(ua)
    prev = np.arange(mcols + 1, dtype=np.int32)
    idx = np.arange(mcols + 1, dtype=np.int32)
    rowmins[0] = 0
    saved = prev.copy() if upto == 0 else None
    for i in range(1, len(xa) + 1):
        sub = (ua != xa[i - 1]).astype(np.int32)
        body = np.minimum(prev[:-1] + sub, prev[1:] + 1)
        b = np.empty(mcols + 1, dtype=np.int32)
        b[0] = prev[0] + 1
        b[1:] = body
        prev = idx + np.minimum.accumulate(b - idx)
        rowmins[i] = int(prev.min())
        if i == upto:
            saved = prev.copy()
    return rowmins, saved


def _unrolled(q: Str, length: int) -> Tuple[int, ...]:
    reps = -(-length // len(q)) if length > 0 else 1
    return (q.codes * reps)[:length]


def candidates_periodic(
    r: Str,
    t: Str,
    q: Str,
    l_r: int,
    kappa: int,
    big_k: int,
    base: int = 0,
    cand: Optional[CandidateSet] = None,
    tag: str = "periodic",
) -> CandidateSet:
    """Candidate starts for occurrences of an approximately periodic string.

    `t` is one segment of the host text starting at absolute position `base`;
    `l_r` is the phase of r's optimal periodic extension (its start inside
    q^inf); `big_k` is the region edit budget.  Around every exact anchor
    occurrence of q in the segment's middle part, the segment is extended as
    far as it stays within 2*big_k of the periodic extension; candidate
    starts are those aligned with the period grid up to a drift of 6*big_k.
    Segments without anchors fall back to contributing every start.
    """
    if cand is None:
        cand = CandidateSet(kappa if kappa else 1)
    rl, n, ql = len(r), len(t), len(q)
    lim = n - rl + kappa
    if lim < 0:
        return cand
    clip_abs = base + lim

    mid_lo = rl // 2 + kappa
    mid_hi = rl - kappa - ql
    anchors: List[int] = []
    if mid_lo <= mid_hi:
        prev = None  # previous in-range occurrence: one anchor per exact run
        for x in exact_occurrences(q, t):
            if x < mid_lo or x > mid_hi:
                continue
            if prev is None or x - prev != ql:
                anchors.append(x)
            prev = x
    if not anchors or len(anchors) > 24:
        cand.add_range(base, base + lim, tag + ":fallback", clip_hi=clip_abs)
        return cand

    radius = 6 * big_k
    for tau in anchors:
        rowmins_l, _ = _prefix_rowmins_and_final(
            t.codes[:tau][::-1], _unrolled(q.reverse(), tau + 2 * ql), upto=-1
        )
        ok = np.nonzero(rowmins_l <= 2 * big_k)[0]
        amax = int(ok.max()) if len(ok) else 0
        i2 = tau - amax
        _, final_row = _prefix_rowmins_and_final(
            t.codes[:tau][::-1][:amax], _unrolled(q.reverse(), tau + 2 * ql), upto=amax
        )
        wlen_l = int(np.argmin(final_row))
        right = t.codes[tau + ql :]
        rowmins_r, _ = _prefix_rowmins_and_final(
            right, _unrolled(q, len(right) + 2 * ql), upto=-1
        )
        ok = np.nonzero(rowmins_r <= 2 * big_k)[0]
        bmax = int(ok.max()) if len(ok) else 0
        j2 = tau + ql + bmax

        residue = (i2 + l_r + wlen_l) % ql
        x_lo, x_hi = i2, min(j2 - rl + kappa, lim)
        if x_hi < x_lo:
            continue
        if 2 * radius + 1 >= ql:
            cand.add_range(base + x_lo, base + x_hi, tag, clip_hi=clip_abs)
            continue
        g0 = x_lo + ((residue - x_lo) % ql)
        g = g0 - ql
        while g - radius <= x_hi:
            cand.add_range(
                base + max(x_lo, g - radius),
                base + min(x_hi, g + radius),
                tag,
                clip_hi=clip_abs,
            )
            g += ql
    return cand


def _region_occurrence_starts(r: Str, t: Str, kappa: int, q: Str, big_k: int) -> Set[int]:
    """Exact starts of Occ^E_kappa(r, t) via the periodic candidate machinery."""
    rl = len(r)
    if kappa == 0:
        return set(exact_occurrences(r, t)) if rl <= len(t) else set()
    _, l_r, _ = ed_periodic_witness(r, q, "substring")
    cand = CandidateSet(kappa)
    block = max(1, rl // 2 - kappa)
    seg_len = (3 * rl) // 2
    i = 0
    while i < max(1, len(t) - rl + kappa + 1):
        seg = t[i : i + seg_len]
        if len(seg) >= rl - kappa:
            candidates_periodic(r, seg, q, l_r, kappa, big_k, base=i, cand=cand, tag="region")
        i += block
    occ = _verify_starts(r, t, kappa, cand.sorted_starts())
    return {o.start for o in occ}


def candidates_regions(p: Str, t: Str, k: int, d: Decomposition) -> CandidateSet:
    """Region occurrences bucketed by the region budget, widened by 10k.

    At least one region is aligned with at most its budget floor(4k/m*|R|)
    edits by any cost-<=k occurrence, so its own occurrence set anchors the
    pattern start up to bucket rounding plus the alignment drift.
    """
    m = len(p)
    cand = CandidateSet(k)
    clip = _start_limit(p, t, k)
    for reg in d.regions:
        r = p[reg.start : reg.end]
        kappa = (4 * k * len(r)) // m
        big_k = edit_budget(len(r), k, m)
        occ_r = _region_occurrence_starts(r, t, kappa, reg.period, big_k)
        seen_buckets = set()
        for x in occ_r:
            b = big_k * (x // big_k)
            if b in seen_buckets:
                continue
            seen_buckets.add(b)
            cand.add_range(b - reg.start - 10 * k, b - reg.start + 10 * k, f"region@{reg.start}", clip)
    return cand


def candidates_approx_period(p: Str, t: Str, k: int, d: Decomposition) -> CandidateSet:
    """Whole-pattern periodic case: the pattern itself is the region."""
    m = len(p)
    q = d.period
    big_k = edit_budget(m, k, m)  # = 8k
    _, l_r, _ = ed_periodic_witness(p, q, "substring")
    cand = CandidateSet(k)
    block = max(1, m // 2 - k)
    seg_len = (3 * m) // 2
    i = 0
    while i < max(1, len(t) - m + k + 1):
        seg = t[i : i + seg_len]
        if len(seg) >= m - k:
            candidates_periodic(p, seg, q, l_r, k, big_k, base=i, cand=cand, tag="period")
        i += block
    return cand


# ---------------------------------------------------------------------------
# verification and the full pipeline


def verify_candidates(
    p: Str, t: Str, k: int, cand: CandidateSet, route: str = "direct"
) -> Set[CostedOccurrence]:
    """Exact occurrence pairs restricted to the candidate starts.

    direct: banded verification per start.  masked: per window, grow an
    alignment set over the candidates, mask the unlearned periodic structure,
    and verify the candidates against the masked strings; both routes agree
    whenever the candidate set is a superset of the true starts.
    """
    if route == "direct":
        return _verify_starts(p, t, k, cand.sorted_starts())
    if route != "masked":
        raise ValueError(f"unknown route {route!r}")
    m = len(p)
    out: Set[CostedOccurrence] = set()
    block = max(1, m - 3 * k)
    span = block + m + k
    starts_all = cand.sorted_starts()
    for wlo in range(0, max(1, len(t)), block):
        whi = min(wlo + span, len(t))
        h_w = [s for s in starts_all if wlo <= s < min(wlo + block, len(t))]
        out |= _masked_window_pairs(p, t, k, wlo, whi, h_w)
    return out


def _masked_window_pairs(
    p: Str, t: Str, k: int, wlo: int, whi: int, h_w: List[int]
) -> Set[CostedOccurrence]:
    cache: Dict[int, Dict[int, int]] = {}

    def ends_at(s0: int) -> Dict[int, int]:
        if s0 not in cache:
            w_end = min(whi, s0 + len(p) + k)
            ec = end_costs(p, t, s0, k)
            cache[s0] = {e: c for e, c in ec.items() if e <= w_end}
        return cache[s0]

    real = [s0 for s0 in h_w if ends_at(s0)]
    if not real:
        return set()
    lo = real[0]
    hi = max(max(ends_at(s0)) for s0 in real)
    t_crop = t[lo:hi]
    rel_starts = sorted(s0 - lo for s0 in h_w if lo <= s0)

    def pair_at(u: int) -> Optional[Tuple[int, int]]:
        got = {e - lo: c for e, c in ends_at(u + lo).items() if e <= hi}
        if not got:
            return None
        c, e = min((c, e) for e, c in got.items())
        return e, c

    suffix_start = min((ends_at(s0)[hi], s0 - lo) for s0 in real if hi in ends_at(s0))[1]
    ws = grow_window_structure(p, t_crop, k, rel_starts, pair_at, suffix_start)
    if ws.masked is not None:
        ph, th = ws.masked.p_hash, ws.masked.t_hash
    else:
        ph, th = p, t_crop
    pairs = _verify_starts(ph, th, k, rel_starts)
    return {CostedOccurrence(o.start + lo, o.end + lo, o.cost) for o in pairs}


def find_occurrences(
    p: Str, t: Str, k: int, route: str = "direct", decomposition: Optional[Decomposition] = None
) -> Set[CostedOccurrence]:
    """Analyze, generate candidates, verify; falls back to the banded
    reference when the pattern is too short relative to k for decomposition."""
    m = len(p)
    if m == 0:
        raise ValueError("empty pattern")
    if k == 0:
        return {CostedOccurrence(x, x + m, 0) for x in exact_occurrences(p, t)} if m <= len(t) else set()
    if 8 * k > m:
        return match_banded(p, t, k)
    d = decomposition if decomposition is not None else analyze(p, k)
    if d.kind == "breaks":
        cand = candidates_breaks(p, t, k, d)
    elif d.kind == "regions":
        cand = candidates_regions(p, t, k, d)
    else:
        cand = candidates_approx_period(p, t, k, d)
    return verify_candidates(p, t, k, cand, route)
