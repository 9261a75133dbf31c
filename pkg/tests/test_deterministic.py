import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ychl.deterministic import (
    DycParams,
    RelayMap,
    apply_relay_map,
    as_word,
    down_shift,
    downlink_receive,
    format_word,
    read_downlink_level,
    transmit_position,
    uplink_receive,
)


@st.composite
def params_st(draw, max_q=8):
    n = sorted(draw(st.lists(st.integers(0, max_q), min_size=3, max_size=3)), reverse=True)
    return DycParams(*n)


def to_int(word):
    return int(format_word(word) or "0", 2)


def from_int(value, q):
    return as_word(format(value, f"0{q}b")) if q else np.zeros(0, dtype=np.uint8)


def test_params_validation():
    assert DycParams(5, 4, 3).q == 5
    assert str(DycParams(5, 4, 3)) == "DYC(5,4,3)"
    with pytest.raises(ValueError):
        DycParams(3, 4, 5)
    with pytest.raises(ValueError):
        DycParams(2, 1, -1)
    with pytest.raises(TypeError):
        DycParams(2.0, 1, 0)
    assert DycParams(2, 1, 1).scaled(3) == DycParams(6, 3, 3)


def test_word_helpers():
    w = as_word("10110")
    assert w.dtype == np.uint8 and format_word(w) == "10110"
    assert format_word(down_shift(w, 2)) == "00101"
    assert format_word(down_shift(w, 5)) == "00000"
    with pytest.raises(ValueError):
        as_word("102")
    with pytest.raises(ValueError):
        as_word([0, 2])
    with pytest.raises(ValueError):
        as_word("101", q=4)


@settings(max_examples=200, deadline=None)
@given(params_st(), st.data())
def test_uplink_matches_integer_shifts(params, data):
    q = params.q
    if q == 0:
        return
    xs = [data.draw(st.integers(0, 2**q - 1)) for _ in range(3)]
    expected = 0
    for x, n in zip(xs, params.levels):
        expected ^= x >> (q - n)
    y = uplink_receive(params, *(from_int(x, q) for x in xs))
    assert to_int(y) == expected


@settings(max_examples=200, deadline=None)
@given(params_st(), st.data())
def test_downlink_matches_integer_shifts(params, data):
    q = params.q
    if q == 0:
        return
    x = data.draw(st.integers(0, 2**q - 1))
    for user in (1, 2, 3):
        y = downlink_receive(params, from_int(x, q), user)
        assert to_int(y) == x >> (q - params.level(user))


def test_batched_words():
    params = DycParams(4, 3, 1)
    rng = np.random.default_rng(0)
    xs = rng.integers(0, 2, size=(3, 10, 4), dtype=np.uint8)
    batch = uplink_receive(params, *xs)
    for i in range(10):
        assert np.array_equal(batch[i], uplink_receive(params, xs[0][i], xs[1][i], xs[2][i]))


@pytest.mark.parametrize("levels", [(5, 4, 3), (4, 4, 1), (3, 0, 0)])
def test_level_reachability(levels):
    params = DycParams(*levels)
    q = params.q
    for user in (1, 2, 3):
        n = params.level(user)
        for level in range(1, q + 1):
            pos = transmit_position(params, user, level)
            assert (pos is not None) == (level <= n)
            if pos is None:
                continue
            x = [np.zeros(q, dtype=np.uint8) for _ in range(3)]
            x[user - 1][pos] = 1
            y = uplink_receive(params, *x)
            assert y[q - level] == 1 and y.sum() == 1
        for level in range(1, q + 1):
            x_r = np.zeros(q, dtype=np.uint8)
            x_r[level - 1] = 1
            y = downlink_receive(params, x_r, user)
            bit = read_downlink_level(params, y, user, level)
            assert (bit is not None) == (level <= n)
            if bit is not None:
                assert bit == 1


def test_relay_map_identity_and_matrix():
    q = 5
    ident = RelayMap.identity(q)
    y = as_word("10011")
    assert np.array_equal(apply_relay_map(ident, y), y)
    assert np.array_equal(ident.matrix(), np.eye(q, dtype=np.uint8))


def test_example_relay_matrix_convention():
    # uplink level -> downlink level map of the worked DYC(5,4,3) example
    m = RelayMap(5, {1: 1, 2: 3, 3: 4, 4: 5, 5: 2}).matrix()
    expected = np.array(
        [[0, 0, 0, 0, 1], [1, 0, 0, 0, 0], [0, 0, 0, 1, 0], [0, 0, 1, 0, 0], [0, 1, 0, 0, 0]],
        dtype=np.uint8,
    )
    assert np.array_equal(m, expected)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.data())
def test_matrix_agrees_with_apply(q, data):
    ups = data.draw(st.lists(st.integers(1, q), unique=True, max_size=q))
    downs = data.draw(st.permutations(range(1, q + 1)))[: len(ups)]
    rm = RelayMap(q, dict(zip(ups, downs)))
    y = as_word(data.draw(st.lists(st.integers(0, 1), min_size=q, max_size=q)))
    assert np.array_equal(apply_relay_map(rm, y), (rm.matrix() @ y) % 2)


def test_relay_map_validation():
    with pytest.raises(ValueError):
        RelayMap(3, {1: 1, 2: 1})
    with pytest.raises(ValueError):
        RelayMap(3, {4: 1})
    rm = RelayMap.from_pairs(3, [[2, 1], [1, 3]])
    assert rm.pairs() == [[1, 3], [2, 1]]


def test_inputs_not_mutated():
    params = DycParams(3, 2, 1)
    x = as_word("111")
    before = x.copy()
    uplink_receive(params, x, x, x)
    downlink_receive(params, x, 3)
    assert np.array_equal(x, before)
