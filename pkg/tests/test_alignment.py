import random

import pytest

from editsketch.alignment import (
    CorruptEditInfo,
    DomainMismatch,
    InvalidAlignment,
    Alignment,
    align_image,
    alignment_cost,
    compose,
    cost_between,
    edit_info,
    identity_alignment,
    inverse,
    reconstruct_alignment,
    validate,
)
from editsketch.distance import edit_distance_full, optimal_alignment
from editsketch.symbols import S, Str

from conftest import random_codes


def random_alignment(rng, x: Str, y: Str) -> Alignment:
    """A random monotone path of x onto y."""
    pts = [(0, 0)]
    i = j = 0
    while i < len(x) or j < len(y):
        choices = []
        if i < len(x) and j < len(y):
            choices.append((1, 1))
        if i < len(x):
            choices.append((1, 0))
        if j < len(y):
            choices.append((0, 1))
        di, dj = rng.choice(choices)
        i, j = i + di, j + dj
        pts.append((i, j))
    return Alignment(tuple(pts), x, y)


def test_identity_and_extreme_costs():
    x = S("abcd")
    assert alignment_cost(identity_alignment(x)) == 0
    y = S("xyz")
    pts = [(i, 0) for i in range(len(x) + 1)] + [(len(x), j) for j in range(1, len(y) + 1)]
    assert alignment_cost(Alignment(tuple(pts), x, y)) == len(x) + len(y)


def test_optimal_alignment_cost_matches_distance():
    d, a = edit_distance_full(S("kitten"), S("sitting"))
    assert d == 3
    assert alignment_cost(a) == 3
    validate(a)


def test_validate_rejects_bad_steps():
    x = S("ab")
    with pytest.raises(InvalidAlignment):
        validate(Alignment(((0, 0), (2, 1)), x, x))


def test_compose_identity_and_inverse(rng):
    for _ in range(200):
        x = Str(random_codes(rng, rng.randint(0, 6), 3))
        y = Str(random_codes(rng, rng.randint(0, 6), 3))
        a = random_alignment(rng, x, y)
        assert inverse(inverse(a)) == a
        assert alignment_cost(inverse(a)) == alignment_cost(a)
        ident = identity_alignment(x)
        assert compose(ident, a) == a


def test_compose_cost_subadditive(rng):
    for _ in range(1000):
        x = Str(random_codes(rng, rng.randint(0, 5), 2))
        y = Str(random_codes(rng, rng.randint(0, 5), 2))
        z = Str(random_codes(rng, rng.randint(0, 5), 2))
        a = random_alignment(rng, x, y)
        b = random_alignment(rng, y, z)
        c = compose(a, b)
        validate(c)
        assert (c.points[0], c.points[-1]) == ((0, 0), (len(x), len(z)))
        assert alignment_cost(c) <= alignment_cost(a) + alignment_cost(b)
        # every product point factors through some y
        for (px, pz) in c.points:
            assert any(
                (px, py) in set(a.points) and (py, pz) in set(b.points)
                for py in range(len(y) + 1)
            )


def test_compose_domain_mismatch():
    x, y, z = S("a"), S("b"), S("c")
    a = random_alignment(random.Random(0), x, y)
    b = random_alignment(random.Random(0), z, z)
    with pytest.raises(DomainMismatch):
        compose(a, b)


def test_align_image_identity_and_insertion():
    x = S("abc")
    ident = identity_alignment(x)
    assert align_image(ident, 0, len(x)) == (0, len(x))
    # one insertion before everything shifts single-character fragments by 1
    y = S("zabc")
    pts = [(0, 0)] + [(i, i + 1) for i in range(len(x) + 1)]
    a = Alignment(tuple(pts), x, y)
    assert align_image(a, 1, 2) == (2, 3)


def test_align_image_decomposition_additivity(rng):
    """Fragment decompositions tile the image and split the cost exactly."""
    for _ in range(400):
        x = Str(random_codes(rng, rng.randint(1, 7), 2))
        y = Str(random_codes(rng, rng.randint(0, 7), 2))
        a = random_alignment(rng, x, y)
        inner = sorted(rng.sample(range(1, len(x)), rng.randint(0, len(x) - 1))) if len(x) > 1 else []
        cuts = [0] + inner + [len(x)]
        prev_y = 0
        total = 0
        for lo, hi in zip(cuts, cuts[1:]):
            ylo, yhi = align_image(a, lo, hi)
            assert ylo == prev_y  # images tile the destination
            total += cost_between(a, (lo, ylo), (hi, yhi))
            prev_y = yhi
        assert prev_y == len(y)
        assert total == alignment_cost(a)


def test_edit_info_round_trip_examples():
    x, y = S("abc"), S("axc")
    _, a = edit_distance_full(x, y)
    info = edit_info(a)
    assert info.sorted() == [(1, ord("b"), 1, ord("x"))]
    assert reconstruct_alignment(info, x, y) == a
    # pure insertions carry empty source characters
    _, b = edit_distance_full(S(""), S("ab"))
    recs = edit_info(b).sorted()
    assert all(cx is None for (_, cx, _, _) in recs) and len(recs) == 2


def test_edit_info_round_trip_random(rng):
    done = 0
    while done < 1000:
        x = Str(random_codes(rng, rng.randint(1, 8), 2))
        y = Str(random_codes(rng, rng.randint(0, 8), 2))
        _, a = edit_distance_full(x, y)
        info = edit_info(a)
        if not info.records:
            assert x == y
            continue
        assert len(info) == alignment_cost(a)
        assert reconstruct_alignment(info, x, y) == a
        done += 1


def test_identity_needs_marker():
    x = S("ab")
    from editsketch.alignment import EditInfo

    with pytest.raises(CorruptEditInfo):
        reconstruct_alignment(EditInfo(frozenset()), x, x)
    a = reconstruct_alignment(EditInfo(frozenset()), x, x, identity=True)
    assert a == identity_alignment(x)


def test_reconstruct_rejects_corrupt():
    x, y = S("abc"), S("abd")
    from editsketch.alignment import EditInfo

    bad = EditInfo(frozenset({(2, ord("c"), 0, ord("d"))}))  # unreachable diagonal
    with pytest.raises(CorruptEditInfo):
        reconstruct_alignment(bad, x, y)


def test_cost_between_segments(rng):
    for _ in range(200):
        x = Str(random_codes(rng, rng.randint(1, 6), 2))
        y = Str(random_codes(rng, rng.randint(1, 6), 2))
        a = random_alignment(rng, x, y)
        pts = a.points
        i1, i2 = sorted(rng.sample(range(len(pts)), 2))
        seg = cost_between(a, pts[i1], pts[i2])
        rest = cost_between(a, pts[0], pts[i1]) + cost_between(a, pts[i2], pts[-1])
        assert seg + rest == alignment_cost(a)
