"""Periodicity primitives and exact occurrence machinery."""

from __future__ import annotations

import math
from typing import List, Sequence

from .symbols import Str


class EmptyStringError(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass


def failure_function(codes: Sequence[int]) -> List[int]:
    """Classical border array: pi[i] = longest proper border of codes[:i+1]."""
    n = len(codes)
    pi = [0] * n
    j = 0
    for i in range(1, n):
        while j > 0 and codes[i] != codes[j]:
            j = pi[j - 1]
        if codes[i] == codes[j]:
            j += 1
        pi[i] = j
    return pi


def per(s: Str) -> int:
    """Smallest period of s: the least p >= 1 with s[i] == s[i+p] for all i."""
    if len(s) == 0:
        raise EmptyStringError("per() of empty string")
    pi = failure_function(s.codes)
    return len(s) - pi[-1]


def is_primitive(s: Str) -> bool:
    """True iff s cannot be written as a power A^t with t > 1."""
    if len(s) == 0:
        raise EmptyStringError("is_primitive() of empty string")
    p = per(s)
    return p == len(s) or len(s) % p != 0


def exact_occurrences(p: Str, t: Str) -> List[int]:
    """Ascending start positions of exact occurrences of p in t."""
    if len(p) == 0:
        raise EmptyStringError("empty pattern")
    m, n = len(p), len(t)
    if m > n:
        return []
    pb, tb = p.as_bytes(), t.as_bytes()
    if pb is not None and tb is not None:
        out = []
        i = tb.find(pb)
        while i != -1:
            out.append(i)
            i = tb.find(pb, i + 1)
        return out
    # generic KMP for codes outside the byte range
    pi = failure_function(p.codes)
    out = []
    j = 0
    tc, pc = t.codes, p.codes
    for i in range(n):
        c = tc[i]
        while j > 0 and c != pc[j]:
            j = pi[j - 1]
        if c == pc[j]:
            j += 1
        if j == m:
            out.append(i - m + 1)
            j = pi[j - 1]
    return out


def is_period(s: Str, p: int) -> bool:
    if not (1 <= p <= len(s)):
        return False
    codes = s.codes
    return all(codes[i] == codes[i + p] for i in range(len(s) - p))


def occ_gcd_period(p: Str, t: Str) -> int:
    """gcd of Occ(p, t) under the prefix+suffix occurrence precondition.

    Requires |t| <= 2|p| + 1 and that p occurs both as a prefix and as a
    suffix of t; the returned gcd is then a period of t (asserted).  When p
    and t coincide the occurrence set is {0} and the trivial period |t| is
    returned.
    """
    if len(t) > 2 * len(p) + 1:
        raise PreconditionFailed("text longer than 2|p|+1")
    occ = exact_occurrences(p, t)
    if 0 not in occ or (len(t) - len(p)) not in occ:
        raise PreconditionFailed("pattern must occur as a prefix and a suffix of t")
    g = 0
    for o in occ:
        g = math.gcd(g, o)
    if g == 0:
        g = len(t)
    assert is_period(t, g), "gcd of occurrence set is not a period"
    return g
