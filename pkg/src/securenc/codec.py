"""Source encoder, sink decoder and per-node packet verification.

The source (holder of the hash secret) hides its message X behind a random
Vandermonde transform P, appends each row's parity symbol r_i, and pads every
row so that it hashes exactly to the published generator g_i. Relays verify
coded packets from the public parameters alone. A sink solves for the padded
rows, reads the parity column to rebuild P, and undoes the transform.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    DimensionError,
    InvalidParityError,
    LengthMismatchError,
    SingularKernelError,
    SingularMatrixError,
)
from .ffmath import Matrix, mat_inv, mat_mul, mod_inv, row_space_rank, solve_left
from .homohash import AugmentedVector, HashPublic, HashSecret, combine_hashes, hash_public

PaddedPacket = AugmentedVector


@dataclass(frozen=True)
class Manifest:
    length: int
    m: int
    n: int
    symbol_bytes: int


@dataclass(frozen=True)
class VandermondeKey:
    parities: tuple[int, ...]
    p: int

    def __post_init__(self):
        check_parities(self.parities, self.p)

    @property
    def m(self) -> int:
        return len(self.parities)


@dataclass(frozen=True)
class CodedPacket:
    vector: AugmentedVector
    kernel: tuple[int, ...]


def check_parities(parities: Sequence[int], p: int) -> None:
    if not parities:
        raise InvalidParityError("need at least one parity symbol")
    if any(not 0 < r < p for r in parities):
        raise InvalidParityError("parity symbols must be nonzero field elements")
    if len(set(parities)) != len(parities):
        raise InvalidParityError("parity symbols must be pairwise distinct")


def default_symbol_bytes(p: int) -> int:
    """Largest whole-byte symbol guaranteed to be below p."""
    return (p.bit_length() - 1) // 8


def split_file(data: bytes, m: int, symbol_bytes: int, n: int | None = None) -> tuple[Matrix, Manifest]:
    """Pack bytes row-major into an m x n matrix of big-endian symbols.

    The tail is zero-padded. With `n` given the matrix is widened to exactly
    n columns, and a file that does not fit raises ValueError.
    """
    if m < 1 or symbol_bytes < 1:
        raise ValueError("m and symbol_bytes must be positive")
    row_bytes = m * symbol_bytes
    need = max(1, -(-len(data) // row_bytes))
    if n is None:
        n = need
    elif need > n:
        raise ValueError(f"file of {len(data)} bytes needs n={need} symbols per packet, only {n} available")
    buf = data.ljust(m * n * symbol_bytes, b"\0")
    symbols = [int.from_bytes(buf[i:i + symbol_bytes], "big") for i in range(0, len(buf), symbol_bytes)]
    rows = [symbols[i * n:(i + 1) * n] for i in range(m)]
    return rows, Manifest(len(data), m, n, symbol_bytes)


def join_file(x: Matrix, manifest: Manifest) -> bytes:
    limit = 1 << (8 * manifest.symbol_bytes)
    out = bytearray()
    for row in x:
        for v in row:
            if v >= limit:
                raise ValueError(f"symbol {v} does not fit in {manifest.symbol_bytes} bytes")
            out += v.to_bytes(manifest.symbol_bytes, "big")
    return bytes(out[:manifest.length])


def sample_vandermonde_key(m: int, p: int, seed: int) -> VandermondeKey:
    if not 1 <= m < p:
        raise ValueError("need 1 <= m < p")
    rng = random.Random(seed)
    chosen: list[int] = []
    while len(chosen) < m:
        r = rng.randrange(p)
        if r and r not in chosen:
            chosen.append(r)
    return VandermondeKey(tuple(chosen), p)


def make_vandermonde(key: VandermondeKey) -> Matrix:
    """Column d is (r_d, r_d**2, ..., r_d**m)."""
    p, m = key.p, key.m
    return [[pow(r, i, p) for r in key.parities] for i in range(1, m + 1)]


def encode_source(x: Matrix, sk: HashSecret, key: VandermondeKey) -> list[PaddedPacket]:
    p = sk.group.p
    m, n = len(x), len(x[0]) if x else 0
    if any(len(row) != n for row in x):
        raise DimensionError("ragged source matrix")
    if n != sk.n:
        raise DimensionError(f"source rows have {n} symbols, hash parameters expect {sk.n}")
    if not 1 <= m <= n:
        raise DimensionError(f"need 1 <= m <= n, got m={m}, n={n}")
    if key.m != m or key.p != p:
        raise DimensionError("Vandermonde key does not match the source matrix")

    u = sk.exponents
    u0_inv = mod_inv(u[0], p)
    transformed = mat_mul(make_vandermonde(key), x, p)
    packets = []
    for i, (row, r) in enumerate(zip(transformed, key.parities), start=1):
        acc = u[i] - sum(s * uj for s, uj in zip(row, u[1:n + 1])) - u[n + 1] * r
        pad = acc * u0_inv % p
        pkt = (pad, *row, r)
        # exponent of the hash must equal u_i, i.e. H(pkt) == g_i
        assert sum(a * b for a, b in zip(u, pkt)) % p == u[i] % p
        packets.append(pkt)
    return packets


def source_packets(padded: Sequence[PaddedPacket]) -> list[CodedPacket]:
    """The padded rows paired with unit kernels."""
    m = len(padded)
    return [CodedPacket(tuple(v), tuple(int(i == j) for j in range(m))) for i, v in enumerate(padded)]


def verify_packet(pk: HashPublic, packet: CodedPacket) -> bool:
    m = len(packet.kernel)
    if len(packet.vector) != len(pk.generators):
        raise LengthMismatchError(f"vector has {len(packet.vector)} symbols, expected {len(pk.generators)}")
    if not 1 <= m <= pk.n:
        raise LengthMismatchError(f"kernel length {m} outside [1, {pk.n}]")
    expected = combine_hashes(pk.generators[1:m + 1], [c % pk.p for c in packet.kernel], pk.q)
    return hash_public(pk, packet.vector) == expected


def is_valid_packet(pk: HashPublic, packet: CodedPacket) -> bool:
    """verify_packet that treats malformed packets as rejected instead of raising."""
    try:
        return verify_packet(pk, packet)
    except LengthMismatchError:
        return False


def select_independent(packets: Sequence[CodedPacket], m: int, p: int) -> list[CodedPacket]:
    """First m packets, in order, whose kernels are linearly independent."""
    chosen: list[CodedPacket] = []
    for pkt in packets:
        if len(pkt.kernel) != m:
            continue
        if row_space_rank([list(c.kernel) for c in chosen] + [list(pkt.kernel)], p) == len(chosen) + 1:
            chosen.append(pkt)
            if len(chosen) == m:
                return chosen
    raise SingularKernelError(f"received kernels span rank {len(chosen)} < {m}")


def decode_padded(packets: Sequence[CodedPacket], p: int) -> Matrix:
    """Recover the padded source rows from m coded packets."""
    m = len(packets)
    if m == 0:
        raise SingularKernelError("no packets to decode")
    if any(len(pkt.kernel) != m for pkt in packets):
        raise DimensionError(f"every kernel must have length {m}")
    k = [list(pkt.kernel) for pkt in packets]
    y = [list(pkt.vector) for pkt in packets]
    try:
        return solve_left(k, y, p)
    except SingularMatrixError as exc:
        raise SingularKernelError(str(exc)) from None


def decode(packets: Sequence[CodedPacket], pk: HashPublic) -> Matrix:
    p, n = pk.p, pk.n
    padded = decode_padded(packets, p)
    if any(len(row) != n + 2 for row in padded):
        raise LengthMismatchError(f"packets must carry {n + 2} symbols")
    key = VandermondeKey(tuple(row[n + 1] for row in padded), p)
    transformed = [row[1:n + 1] for row in padded]
    return mat_mul(mat_inv(make_vandermonde(key), p), transformed, p)
