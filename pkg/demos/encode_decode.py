"""
Encoding a file into padded packets and decoding it again
==========================================================

Every padded packet hashes exactly to its published generator, so any
linear combination can be checked against the same combination of the
generators.
"""
import os

from securenc import (
    decode,
    default_symbol_bytes,
    encode_source,
    gen_group_params,
    gen_hash_params,
    hash_public,
    join_file,
    sample_vandermonde_key,
    split_file,
    verify_packet,
)
from securenc.codec import CodedPacket
from securenc.homohash import linear_combination

group = gen_group_params(320, 1024, seed=1)
pk, sk = gen_hash_params(group, 40, seed=2)
print(f"|p| = {pk.p.bit_length()} bits, |q| = {pk.q.bit_length()} bits, n = {pk.n}")

data = os.urandom(3000)
m = 3
x, manifest = split_file(data, m, default_symbol_bytes(pk.p), n=pk.n)

# scramble the rows with a Vandermonde matrix, then add padding and parity
key = sample_vandermonde_key(m, pk.p, seed=3)
padded = encode_source(x, sk, key)
for i, row in enumerate(padded, start=1):
    print(f"packet {i}: hash == g_{i}: {hash_public(pk, row) == pk.generators[i]}")

# a relay would send random combinations; each one verifies
kernels = [(1, 2, 3), (4, 0, 1), (7, 7, 2)]
coded = [CodedPacket(linear_combination(k, padded, pk.p), k) for k in kernels]
print("all verify:", all(verify_packet(pk, c) for c in coded))

assert join_file(decode(coded, pk), manifest) == data
print("file recovered")
