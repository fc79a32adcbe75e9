import random

import pytest

from geoweave.chunkset import ChunkSet, ChunkSetError, matches, required_bits, violates


def test_required_bits():
    assert required_bits(3) == 2  # empty + two colours
    assert required_bits(2) == 1
    assert required_bits(5) == 4  # 3 bits rounded up to a power of 2
    assert required_bits(1) == 1
    assert required_bits(16) == 4
    assert required_bits(17) == 8
    with pytest.raises(ChunkSetError):
        required_bits(0)


def test_chunk_bits_validation():
    with pytest.raises(ChunkSetError):
        ChunkSet(3, 10)
    with pytest.raises(ChunkSetError):
        ChunkSet(128, 10)
    ChunkSet(1, 1)


def test_set_get_round_trip_all_values():
    for bits in (1, 2, 4, 8):
        s = ChunkSet(bits, 37)
        for cell in range(37):
            for v in range(1 << bits):
                s.set(cell, v)
                assert s.get(cell) == v


def test_set_leaves_other_cells_alone():
    s = ChunkSet(2, 100)
    s.set(40, 3)
    s.set(41, 1)
    assert s.get(40) == 3
    assert s.get(41) == 1
    assert all(s.get(c) == 0 for c in range(100) if c not in (40, 41))


def test_all_zero_means_empty_everywhere():
    s = ChunkSet(2, 50)
    assert all(s.get(c) == 0 for c in range(50))


def test_value_out_of_range():
    s = ChunkSet(2, 4)
    with pytest.raises(ChunkSetError):
        s.set(0, 4)
    with pytest.raises(ChunkSetError):
        s.get(4)


def test_unused_trailing_bits_stay_zero():
    s = ChunkSet(2, 33)  # 66 bits -> 2 words, 62 unused in the last
    for c in range(33):
        s.set(c, 3)
    assert s.words[1] >> 2 == 0


def test_matches_trivial_cases():
    state = ChunkSet(2, 20)
    state.set(3, 1)
    state.set(7, 2)
    zero_mask = ChunkSet(2, 20)
    assert matches(state, zero_mask, ChunkSet(2, 20))  # vacuous constraint
    full_mask = ChunkSet.from_values([3] * 20, 2)
    assert matches(state, full_mask, state)


def test_matches_shape_mismatch():
    with pytest.raises(ChunkSetError):
        matches(ChunkSet(2, 10), ChunkSet(2, 11), ChunkSet(2, 10))
    with pytest.raises(ChunkSetError):
        matches(ChunkSet(2, 10), ChunkSet(4, 10), ChunkSet(4, 10))


def test_matches_flipped_cell_detected():
    rng = random.Random(5)
    cells = 60
    state = ChunkSet.from_values([rng.randrange(4) for _ in range(cells)], 2)
    picked = rng.sample(range(cells), 5)
    mask = ChunkSet(2, cells)
    target = ChunkSet(2, cells)
    for c in picked:
        mask.set(c, 3)
        target.set(c, state.get(c))
    assert matches(state, mask, target)
    victim = picked[2]
    state.set(victim, (state.get(victim) + 1) % 4)
    assert not matches(state, mask, target)


def naive_matches(state, mask, target):
    # Per-cell reference: selected bits of each cell equal the target bits.
    for c in range(state.cell_count):
        if state.get(c) & mask.get(c) != target.get(c):
            return False
    return True


def test_matches_agrees_with_naive_interpreter():
    rng = random.Random(99)
    agree = 0
    for _ in range(10_000):
        cells = rng.randrange(1, 70)
        bits = rng.choice((1, 2, 4))
        state = ChunkSet.from_values([rng.randrange(1 << bits) for _ in range(cells)], bits)
        mask = ChunkSet(bits, cells)
        target = ChunkSet(bits, cells)
        for c in rng.sample(range(cells), rng.randrange(cells + 1)):
            m = rng.randrange(1 << bits)
            mask.set(c, m)
            # Bias half the triples toward matching targets.
            t = state.get(c) & m if rng.random() < 0.5 else rng.randrange(1 << bits) & m
            target.set(c, t)
        assert matches(state, mask, target) == naive_matches(state, mask, target)
        agree += 1
    assert agree == 10_000


def test_matching_cost_is_one_op_per_word():
    state = ChunkSet(2, 200)  # 400 bits -> 7 words
    mask = ChunkSet(2, 200)
    target = ChunkSet(2, 200)
    mask.set(123, 3)  # mask support size is irrelevant to the cost
    counter = [0]
    assert matches(state, mask, target, counter)
    assert counter[0] == state.word_count == 7


def test_violates():
    s = ChunkSet(2, 10)
    s.set(4, 2)
    assert violates(s, 4, 2)
    assert not violates(s, 4, 3)
    assert violates(s, 5, 0)  # empty cell, forbidden empty
    with pytest.raises(ChunkSetError):
        violates(s, 4, 4)


def test_copy_is_independent():
    a = ChunkSet(2, 8)
    b = a.copy()
    b.set(0, 3)
    assert a.get(0) == 0
    assert a != b
    assert a == a.copy()
