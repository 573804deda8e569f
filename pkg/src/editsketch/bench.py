"""Measurement harness: sketch-size envelopes and timing targets.

Used by the CLI bench subcommand and by the acceptance suite.  The size
suites report, per instance, the measured sketch bits next to the structural
budget (n/m) * k * log2(m)^2, and fit the single proportionality constant as
the largest observed ratio.
"""

from __future__ import annotations

import math
import random
import time
from typing import Dict, List, Tuple

from .matcher import find_occurrences
from .sketch import decode, encode, gen_lower_bound, recover_planted, sketch_size_bits
from .strings import is_primitive
from .symbols import Str


def random_str(rng: random.Random, n: int, sigma: int) -> Str:
    return Str(rng.randrange(sigma) for _ in range(n))


def _primitive_period(rng: random.Random, length: int, sigma: int) -> Str:
    while True:
        q = random_str(rng, length, sigma)
        if length == 1 or is_primitive(q):
            return q


def periodic_instance(rng: random.Random, n: int, m: int, k: int, sigma: int = 4) -> Tuple[Str, Str]:
    """Pattern and text both built from powers of one short period, lightly edited."""
    qlen = max(2, min(8, m // max(1, 128 * k)))
    q = _primitive_period(rng, qlen, sigma)
    reps_t = -(-n // qlen)
    t = list(q.repeat(reps_t).codes[:n])
    reps_p = -(-m // qlen)
    p = list(q.repeat(reps_p).codes[:m])
    for _ in range(max(1, k // 2)):
        t[rng.randrange(n)] = rng.randrange(sigma)
    for _ in range(max(1, k // 4)):
        p[rng.randrange(m)] = rng.randrange(sigma)
    return Str(p), Str(t)


def size_budget(n: int, m: int, k: int) -> float:
    return (n / m) * k * (math.log2(m) ** 2)


def size_suite(seed: int = 0, small: bool = False) -> Dict:
    """Sketch sizes across families and a fitted proportionality constant."""
    rng = random.Random(seed)
    ms = (256, 1024) if small else (256, 1024, 4096)
    ks = (4, 16) if small else (4, 16, 64)
    rows: List[Dict] = []
    for m in ms:
        for k in ks:
            n = 3 * m
            cases = {}
            cases["random"] = (random_str(rng, m, 256), random_str(rng, n, 256))
            cases["periodic"] = periodic_instance(rng, n, m, k)
            if m > k:
                inst = gen_lower_bound(n, m, k, seed=rng.randrange(1 << 30))
                cases["cclb"] = (inst.pattern, inst.text)
            for family, (p, t) in cases.items():
                t0 = time.perf_counter()
                sk = encode(p, t, k)
                dt = time.perf_counter() - t0
                bits = sketch_size_bits(sk)
                rows.append(
                    {
                        "family": family,
                        "n": n,
                        "m": m,
                        "k": k,
                        "bits": bits,
                        "budget": size_budget(n, m, k),
                        "ratio": bits / size_budget(n, m, k),
                        "encode_seconds": round(dt, 3),
                        "windows": sk.stats.get("windows"),
                    }
                )
    fitted_c = max(r["ratio"] for r in rows)
    return {"rows": rows, "fitted_constant": fitted_c}


def lower_bound_suite(
    seed: int = 0,
    recovery_instances: int = 100,
    m: int = 16,
    k: int = 3,
    n_recovery: int = 384,
    fit_m: int = 32,
    fit_k: int = 4,
    fit_ns: Tuple[int, ...] = (2048, 4096, 8192),
) -> Dict:
    """Round-trip recovery over many seeds plus the size-growth fit."""
    recovered = 0
    for i in range(recovery_instances):
        inst = gen_lower_bound(n_recovery, m, k, seed=seed + i)
        sk = encode(inst.pattern, inst.text, k)
        occ = {o.start for o in decode(sk)}
        got = recover_planted(occ, inst.n, inst.m, inst.k)
        if tuple(got) == inst.planted:
            recovered += 1
    sizes = []
    for n in fit_ns:
        inst = gen_lower_bound(n, fit_m, fit_k, seed=seed)
        bits = sketch_size_bits(encode(inst.pattern, inst.text, fit_k))
        lower = (n / fit_m) * fit_k * math.log2(fit_m / fit_k)
        sizes.append({"n": n, "bits": bits, "lower_budget": lower, "ratio": bits / lower})
    ratios = [s["ratio"] for s in sizes]
    mean = sum(ratios) / len(ratios)
    spread = max(abs(r - mean) / mean for r in ratios)
    return {
        "recovered": recovered,
        "instances": recovery_instances,
        "sizes": sizes,
        "slope_spread": spread,
    }


def perf_suite(n: int = 1_000_000, m: int = 100_000, k: int = 32, seed: int = 0) -> Dict:
    """Timing of the pipeline and the sketch round trip on one big instance."""
    rng = random.Random(seed)
    p = random_str(rng, m, 256)
    t = random_str(rng, n, 256)
    t0 = time.perf_counter()
    occ = find_occurrences(p, t, k)
    t_match = time.perf_counter() - t0
    t0 = time.perf_counter()
    sk = encode(p, t, k)
    t_encode = time.perf_counter() - t0
    t0 = time.perf_counter()
    dec = decode(sk)
    t_decode = time.perf_counter() - t0
    return {
        "n": n,
        "m": m,
        "k": k,
        "occurrences": len(occ),
        "decoded": len(dec),
        "match_seconds": round(t_match, 3),
        "encode_seconds": round(t_encode, 3),
        "decode_seconds": round(t_decode, 3),
        "sketch_bits": sketch_size_bits(sk),
    }
