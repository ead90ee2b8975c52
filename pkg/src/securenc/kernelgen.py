"""Pseudo-random coding coefficients and global encoding kernels.

Every coefficient in a session is a pure function of the public session seed
and the (node, edge, generation) triple that consumes it, so any node can
recompute the global encoding kernel of any edge without coefficients ever
being transmitted.
"""
from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType

from .errors import UnknownEdgeError
from .topology import Network

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

# Odd multipliers that keep (node, edge, generation) from cancelling each other
# in the XOR fold, e.g. node=1, edge=2 versus node=2, edge=1.
_NODE_MUL = 0xD6E8FEB86659FD93
_EDGE_MUL = 0xA0761D6478BD642F
_GEN_MUL = 0xE7037ED1A0B428DB


def splitmix_next(state: int) -> tuple[int, int]:
    """One SplitMix64 step: returns (output, next_state)."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31), state


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def __iter__(self):
        return self

    def __next__(self) -> int:
        value, self.state = splitmix_next(self.state)
        return value


@dataclass(frozen=True)
class EdgeContext:
    seed: int
    node: int
    edge: int
    generation: int = 0

    def prg_seed(self) -> int:
        fold = (
            self.seed
            ^ (self.node * _NODE_MUL)
            ^ (self.edge * _EDGE_MUL)
            ^ (self.generation * _GEN_MUL)
        ) & MASK64
        first, _ = splitmix_next(fold)
        second, _ = splitmix_next(first)
        return second


def derive_coeffs(ctx: EdgeContext, count: int, p: int) -> list[int]:
    """`count` coefficients uniform over [0, p), by rejection sampling.

    For p below 2**64 each draw is one 64-bit output, rejected when it is at
    least p * floor(2**64 / p). Larger p concatenate ceil(|p| / 64) outputs
    (most significant first) and apply the same rule at that width.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    words = max(1, -(-p.bit_length() // 64))
    span = 1 << (64 * words)
    limit = p * (span // p)
    prg = SplitMix64(ctx.prg_seed())
    out = []
    while len(out) < count:
        value = 0
        for _ in range(words):
            value = (value << 64) | next(prg)
        if value < limit:
            out.append(value % p)
    return out


def seed_from_metadata(file_id: bytes, creation_date: bytes, publisher: bytes) -> int:
    """SHA-1 over 4-byte length-prefixed fields; first 8 digest bytes, big-endian."""
    h = hashlib.sha1()
    for field in (file_id, creation_date, publisher):
        h.update(struct.pack(">I", len(field)))
        h.update(field)
    return int.from_bytes(h.digest()[:8], "big")


def edge_context(net: Network, seed: int, edge_id: str, generation: int = 0) -> EdgeContext:
    e = net.edge(edge_id)
    return EdgeContext(seed, net.node_index(e.tail), net.edge_index(edge_id), generation)


def local_coeffs(net: Network, seed: int, edge_id: str, count: int, p: int) -> list[int]:
    """Coefficients applied by the tail node of `edge_id` to its inputs."""
    return derive_coeffs(edge_context(net, seed, edge_id), count, p)


@lru_cache(maxsize=256)
def global_kernels(net: Network, seed: int, p: int) -> MappingProxyType:
    """Kernels of every edge, computed upstream to downstream.

    The source is fed by m virtual inputs carrying the unit kernels.
    """
    m = net.m
    kernels: dict[str, tuple[int, ...]] = {}
    for e in net.topo_edges():
        if e.tail == net.source:
            inputs = [tuple(int(i == j) for j in range(m)) for i in range(m)]
        else:
            inputs = [kernels[f.id] for f in net.in_edges(e.tail)]
        coeffs = local_coeffs(net, seed, e.id, len(inputs), p)
        acc = [0] * m
        for c, k in zip(coeffs, inputs):
            for j in range(m):
                acc[j] += c * k[j]
        kernels[e.id] = tuple(v % p for v in acc)
    # cached and shared between callers, so hand out a read-only view
    return MappingProxyType(kernels)


def global_kernel(net: Network, seed: int, edge_id: str, p: int) -> tuple[int, ...]:
    kernels = global_kernels(net, seed, p)
    try:
        return kernels[edge_id]
    except KeyError:
        raise UnknownEdgeError(edge_id) from None
