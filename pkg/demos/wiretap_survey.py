"""
Which wiretaps leak a whole packet?
===================================

An eavesdropper on a set of edges sees combinations A·X' of the transformed
rows X' = P·X.  A row of X leaks exactly when some row of P^-1 lies in the
row space of A.  Over a large field the random Vandermonde transform makes
that essentially impossible; over GF(5) it happens often.
"""
from securenc import build_network, gen_group_params, sample_vandermonde_key
from securenc.simnet import brute_force_recovery, observed_mix, secure_payload_rate, security_survey
from securenc.kernelgen import global_kernels

net = build_network("butterfly")

big_p = gen_group_params(320, 1024, seed=1).p
key = sample_vandermonde_key(2, big_p, seed=7)
survey = security_survey(net, key, k=1, seed=11, n=410)
print(f"320-bit field: {survey.secure}/{survey.taps_checked} single taps secure")

# a tiny field, cross-checked by exhaustive search
p = 5
leaky = 0
for seed in range(20):
    key = sample_vandermonde_key(2, p, seed)
    survey = security_survey(net, key, k=1, seed=seed, n=4)
    leaky += len(survey.insecure_taps)
    kernels = global_kernels(net, seed, p)
    for (edge,) in survey.insecure_taps:
        a = [list(kernels[edge])]
        i, b = brute_force_recovery(a, observed_mix(a, key), p, 2)
        if leaky <= 5:
            print(f"seed {seed:2d}: tap {edge} reveals row {i} via b = {b}")
print(f"GF(5): {leaky} leaking taps over 20 keys")

print(f"secure payload rate at m=10, n=410: {secure_payload_rate(10, 410):.4f} symbols per round")
