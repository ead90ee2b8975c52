import os
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from securenc.codec import (
    CodedPacket,
    VandermondeKey,
    decode,
    decode_padded,
    default_symbol_bytes,
    encode_source,
    is_valid_packet,
    join_file,
    make_vandermonde,
    sample_vandermonde_key,
    select_independent,
    source_packets,
    split_file,
    verify_packet,
)
from securenc.errors import DimensionError, InvalidParityError, LengthMismatchError, SingularKernelError
from securenc.ffmath import mat_inv, mat_mul
from securenc.homohash import gen_hash_params, hash_params_from_exponents, hash_public, linear_combination

from conftest import TOY_GROUP


def coded(padded, kernel, p):
    return CodedPacket(linear_combination(kernel, padded, p), tuple(kernel))


# --- file packing ----------------------------------------------------------


def test_split_empty():
    x, man = split_file(b"", 1, 39)
    assert x == [[0]] and man.length == 0 and man.n == 1
    assert join_file(x, man) == b""


def test_split_exact_fit():
    data = bytes(range(2 * 3 * 4))
    x, man = split_file(data, 2, 4)
    assert man.n == 3 and man.length == len(data)
    assert x[0][0] == int.from_bytes(data[:4], "big")
    assert join_file(x, man) == data


def test_split_10kb_roundtrip():
    data = random.Random(5).randbytes(10 * 1024)
    x, man = split_file(data, 10, default_symbol_bytes(2**319 + 1))
    assert man.symbol_bytes == 39 and man.n == 27
    assert join_file(x, man) == data


def test_split_fixed_width_too_small():
    with pytest.raises(ValueError):
        split_file(b"x" * 100, 2, 4, n=3)
    x, man = split_file(b"x" * 10, 2, 4, n=8)
    assert len(x[0]) == 8


@settings(max_examples=100, deadline=None)
@given(st.binary(max_size=600), st.integers(1, 10), st.integers(1, 8))
def test_split_join_property(data, m, sb):
    x, man = split_file(data, m, sb)
    assert len(x) == m and all(len(r) == man.n for r in x)
    assert join_file(x, man) == data


def test_default_symbol_bytes():
    assert default_symbol_bytes(2**320 - 1) == 39
    assert default_symbol_bytes(2**319 + 1) == 39
    assert default_symbol_bytes(11) == 0


# --- Vandermonde key ------------------------------------------------------


def test_vandermonde_examples():
    assert make_vandermonde(VandermondeKey((2, 3), 11)) == [[2, 3], [4, 9]]
    assert make_vandermonde(VandermondeKey((1,), 11)) == [[1]]


def test_key_sampling_distinct_nonzero():
    for seed in range(1000):
        key = sample_vandermonde_key(2, 11, seed)
        assert len(set(key.parities)) == 2 and 0 not in key.parities
    assert sorted(sample_vandermonde_key(10, 11, 3).parities) == list(range(1, 11))
    assert 1 <= sample_vandermonde_key(1, 11, 9).parities[0] < 11


def test_key_invariants_enforced():
    for bad in [(0, 1), (2, 2), (11,), ()]:
        with pytest.raises(InvalidParityError):
            VandermondeKey(bad, 11)
    with pytest.raises(ValueError):
        sample_vandermonde_key(11, 11, 0)


def test_vandermonde_always_invertible():
    rng = random.Random(1)
    for _ in range(500):
        p = rng.choice([11, 13, 2**61 - 1])
        key = sample_vandermonde_key(rng.randint(1, min(8, p - 1)), p, rng.getrandbits(32))
        pm = make_vandermonde(key)
        assert mat_mul(mat_inv(pm, p), pm, p) == [[int(i == j) for j in range(key.m)] for i in range(key.m)]


# --- encoder ---------------------------------------------------------------


def test_toy_encode(toy_keys):
    pk, sk = toy_keys
    # P = [[9]] and 9 * (9, 8) = (4, 6) mod 11
    padded = encode_source([[9, 8]], sk, VandermondeKey((9,), 11))
    assert padded == [(8, 4, 6, 9)]
    assert hash_public(pk, padded[0]) == 9 == pk.generators[1]


def test_zero_source(toy_keys):
    pk, sk = toy_keys
    padded = encode_source([[0, 0], [0, 0]], sk, VandermondeKey((2, 3), 11))
    assert all(row[1:3] == (0, 0) for row in padded)
    assert any(row[0] for row in padded)
    assert [hash_public(pk, v) for v in padded] == list(pk.generators[1:3])


def test_encode_hash_pin_random(full_group):
    rng = random.Random(2)
    for _ in range(25):
        n = rng.randint(1, 12)
        m = rng.randint(1, n)
        pk, sk = gen_hash_params(full_group, n, rng.getrandbits(32))
        x = [[rng.randrange(pk.p) for _ in range(n)] for _ in range(m)]
        padded = encode_source(x, sk, sample_vandermonde_key(m, pk.p, rng.getrandbits(32)))
        for i, v in enumerate(padded, start=1):
            assert len(v) == n + 2
            assert hash_public(pk, v) == pk.generators[i]


def test_encode_dimension_checks(toy_keys):
    _, sk = toy_keys
    with pytest.raises(DimensionError):
        encode_source([[1, 2, 3]], sk, VandermondeKey((1,), 11))
    with pytest.raises(DimensionError):
        encode_source([[1, 2], [3, 4], [5, 6]], sk, VandermondeKey((1, 2, 3), 11))
    with pytest.raises(DimensionError):
        encode_source([[1, 2]], sk, VandermondeKey((1, 2), 11))


# --- verification ----------------------------------------------------------


@pytest.fixture
def toy_instance(toy_keys):
    pk, sk = toy_keys
    x = [[1, 2], [3, 4]]
    padded = encode_source(x, sk, VandermondeKey((2, 3), 11))
    return pk, sk, x, padded


def test_verify_accepts_honest(toy_instance):
    pk, _, _, padded = toy_instance
    assert verify_packet(pk, CodedPacket(padded[0], (1, 0)))
    assert verify_packet(pk, coded(padded, (2, 1), 11))
    for a in range(11):
        for b in range(11):
            assert verify_packet(pk, coded(padded, (a, b), 11))


def test_verify_rejects_payload_increment(toy_instance):
    pk, _, _, padded = toy_instance
    bad = list(padded[0])
    bad[1] = (bad[1] + 1) % 11
    assert not verify_packet(pk, CodedPacket(tuple(bad), (1, 0)))
    assert not verify_packet(pk, CodedPacket(padded[0], (0, 1)))


def test_tamper_predicate_with_zero_exponent():
    # u_2 = 0: a change at position 2 is invisible, elsewhere it is caught
    pk, sk = hash_params_from_exponents(TOY_GROUP, (3, 5, 0, 7, 2))
    padded = encode_source([[1, 2, 3], [4, 5, 6]], sk, VandermondeKey((4, 7), 11))
    honest = coded(padded, (3, 5), 11)
    for j in range(len(honest.vector)):
        for delta in range(1, 11):
            vec = list(honest.vector)
            vec[j] = (vec[j] + delta) % 11
            verdict = verify_packet(pk, CodedPacket(tuple(vec), honest.kernel))
            assert verdict == (sk.exponents[j] * delta % 11 == 0)


def test_verify_length_checks(toy_instance):
    pk, _, _, padded = toy_instance
    with pytest.raises(LengthMismatchError):
        verify_packet(pk, CodedPacket(padded[0][:-1], (1, 0)))
    with pytest.raises(LengthMismatchError):
        verify_packet(pk, CodedPacket(padded[0], (1, 0, 0)))
    assert not is_valid_packet(pk, CodedPacket(padded[0], ()))


# --- decoder ---------------------------------------------------------------


def test_decode_identity(toy_instance):
    pk, _, x, padded = toy_instance
    assert decode(source_packets(padded), pk) == x


def test_decode_back_substitution(toy_instance):
    pk, _, x, padded = toy_instance
    y1, y2 = coded(padded, (1, 1), 11), coded(padded, (0, 1), 11)
    # oracle: row 2 is y2 itself, row 1 = y1 - y2
    xhat = [tuple((a - b) % 11 for a, b in zip(y1.vector, y2.vector)), y2.vector]
    assert decode_padded([y1, y2], 11) == [list(r) for r in xhat]
    assert decode([y1, y2], pk) == x


def test_decode_singular(toy_instance):
    pk, _, _, padded = toy_instance
    with pytest.raises(SingularKernelError):
        decode([coded(padded, (1, 1), 11), coded(padded, (2, 2), 11)], pk)


def test_decode_invalid_parity(toy_keys):
    pk, _ = toy_keys
    bogus = [CodedPacket((1, 2, 3, 5), (1, 0)), CodedPacket((1, 2, 3, 5), (0, 1))]
    with pytest.raises(InvalidParityError):
        decode(bogus, pk)


def test_select_independent(toy_instance):
    _, _, _, padded = toy_instance
    a, b, c = coded(padded, (1, 2), 11), coded(padded, (2, 4), 11), coded(padded, (0, 1), 11)
    assert select_independent([a, b, c], 2, 11) == [a, c]
    with pytest.raises(SingularKernelError):
        select_independent([a, b], 2, 11)


@pytest.mark.parametrize("scale", ["toy", "full"])
def test_round_trip_random(scale, full_group):
    rng = random.Random(11)
    group = TOY_GROUP if scale == "toy" else full_group
    for _ in range(100):
        m = rng.randint(1, 10 if scale == "full" else 6)
        n = rng.randint(m, 64 if scale == "full" else 10)
        pk, sk = gen_hash_params(group, n, rng.getrandbits(32))
        x = [[rng.randrange(pk.p) for _ in range(n)] for _ in range(m)]
        padded = encode_source(x, sk, sample_vandermonde_key(m, pk.p, rng.getrandbits(32)))
        while True:
            kernels = [[rng.randrange(pk.p) for _ in range(m)] for _ in range(m)]
            try:
                mat_inv(kernels, pk.p)
                break
            except ArithmeticError:
                continue
        packets = [coded(padded, k, pk.p) for k in kernels]
        assert decode(packets, pk) == x


def test_overhead_is_two_symbols(full_keys):
    pk, sk = full_keys
    x = [[1] * pk.n]
    padded = encode_source(x, sk, VandermondeKey((5,), pk.p))
    assert len(padded[0]) - pk.n == 2


def test_file_pipeline(full_group):
    pk, sk = gen_hash_params(full_group, 30, 4)
    data = os.urandom(2000)
    x, man = split_file(data, 2, default_symbol_bytes(pk.p), n=pk.n)
    padded = encode_source(x, sk, sample_vandermonde_key(2, pk.p, 1))
    packets = [coded(padded, (3, 4), pk.p), coded(padded, (1, 9), pk.p)]
    assert join_file(decode(packets, pk), man) == data
