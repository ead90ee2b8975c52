"""
Homomorphic hashing with a toy group
====================================

A hash over p = 11, q = 23, g = 2 small enough to check by hand.
"""
from securenc import GroupParams, hash_params_from_exponents, hash_public, hash_secret
from securenc.homohash import add_vectors

# secret exponents u, public generators g_i = g^u_i mod q
group = GroupParams(p=11, q=23, g=2)
pk, sk = hash_params_from_exponents(group, (3, 5, 7, 2))
print("generators:", pk.generators)

# the public hash multiplies powers of the generators; the secret one
# takes a single power of g
x = (1, 2, 3, 4)
y = (10, 0, 5, 9)
print("H(x) public/secret:", hash_public(pk, x), hash_secret(sk, x))

# product of hashes equals the hash of the sum
lhs = hash_public(pk, x) * hash_public(pk, y) % pk.q
rhs = hash_public(pk, add_vectors(x, y, pk.p))
print(f"H(x)H(y) = {lhs}, H(x+y) = {rhs}")
