"""Discrete-log homomorphic hash over an order-p subgroup of GF(q)*.

An augmented vector has n + 2 symbols in GF(p): position 0 is the padding
symbol, positions 1..n carry data and position n + 1 carries the parity
symbol r. Its hash is prod(g_i ** x_i) mod q, which satisfies
H(x) * H(y) = H(x + y).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import LengthMismatchError
from .ffmath import GroupParams, mod_exp

AugmentedVector = tuple[int, ...]


@dataclass(frozen=True)
class HashPublic:
    p: int
    q: int
    generators: tuple[int, ...]

    @property
    def n(self) -> int:
        """Number of data symbols per vector."""
        return len(self.generators) - 2


@dataclass(frozen=True)
class HashSecret:
    group: GroupParams
    exponents: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.exponents) - 2

    def public(self) -> HashPublic:
        g = self.group
        return HashPublic(g.p, g.q, tuple(mod_exp(g.g, u, g.q) for u in self.exponents))


def hash_params_from_exponents(group: GroupParams, exponents: Sequence[int]) -> tuple[HashPublic, HashSecret]:
    if len(exponents) < 3:
        raise ValueError("need at least n + 2 = 3 exponents")
    if exponents[0] % group.p == 0:
        raise ValueError("u_0 must be invertible modulo p")
    sk = HashSecret(group, tuple(u % group.p for u in exponents))
    return sk.public(), sk


def gen_hash_params(group: GroupParams, n: int, seed: int) -> tuple[HashPublic, HashSecret]:
    """Draw n + 2 secret exponents uniformly from [1, p) and publish g ** u_i."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    exps = [rng.randrange(1, group.p) for _ in range(n + 2)]
    return hash_params_from_exponents(group, exps)


def _check_len(pk_len: int, x: Sequence[int]) -> None:
    if len(x) != pk_len:
        raise LengthMismatchError(f"vector has {len(x)} symbols, parameters expect {pk_len}")


def hash_public(pk: HashPublic, x: Sequence[int]) -> int:
    _check_len(len(pk.generators), x)
    acc = 1
    for gi, xi in zip(pk.generators, x):
        acc = acc * mod_exp(gi, xi % pk.p, pk.q) % pk.q
    return acc


def hash_secret(sk: HashSecret, x: Sequence[int]) -> int:
    """Same value as hash_public with a single exponentiation."""
    _check_len(len(sk.exponents), x)
    p = sk.group.p
    e = sum(u * xi for u, xi in zip(sk.exponents, x)) % p
    return mod_exp(sk.group.g, e, sk.group.q)


def add_vectors(x: Sequence[int], y: Sequence[int], p: int) -> AugmentedVector:
    if len(x) != len(y):
        raise LengthMismatchError(f"cannot add vectors of length {len(x)} and {len(y)}")
    return tuple((a + b) % p for a, b in zip(x, y))


def scale_vector(c: int, x: Sequence[int], p: int) -> AugmentedVector:
    return tuple(c * v % p for v in x)


def linear_combination(coeffs: Sequence[int], vectors: Sequence[Sequence[int]], p: int) -> AugmentedVector:
    if len(coeffs) != len(vectors) or not vectors:
        raise LengthMismatchError("need one coefficient per vector and at least one vector")
    width = len(vectors[0])
    out = [0] * width
    for c, v in zip(coeffs, vectors):
        if len(v) != width:
            raise LengthMismatchError("vectors differ in length")
        if c:
            for j, s in enumerate(v):
                out[j] += c * s
    return tuple(v % p for v in out)


def combine_hashes(hashes: Sequence[int], coeffs: Sequence[int], q: int) -> int:
    """prod(h_i ** c_i) mod q."""
    if len(hashes) != len(coeffs) or not hashes:
        raise LengthMismatchError("need equally many hashes and coefficients (at least one)")
    acc = 1
    for h, c in zip(hashes, coeffs):
        acc = acc * mod_exp(h, c, q) % q
    return acc
