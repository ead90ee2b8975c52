"""
Pollution on the butterfly network
==================================

One relay injects corrupted packets.  With per-node verification they are
dropped at the next hop; without it the corruption mixes into honest
traffic and the sinks decode garbage.
"""
import random

from securenc import build_network, encode_source, gen_group_params, gen_hash_params, sample_vandermonde_key
from securenc.simnet import STRATEGIES, contaminate, run_multicast

group = gen_group_params(320, 1024, seed=1)
pk, sk = gen_hash_params(group, 8, seed=2)
rng = random.Random(0)
x = [[rng.randrange(pk.p) for _ in range(pk.n)] for _ in range(2)]
padded = encode_source(x, sk, sample_vandermonde_key(2, pk.p, seed=5))

net = build_network("butterfly")
print("edges:", ", ".join(f"{e.id}:{e.tail}->{e.head}" for e in net.edges))

report = run_multicast(net, padded, pk, seed=42)
print("honest run, all sinks decoded:", report.all_decoded)

for strategy in STRATEGIES:
    for verify in (True, False):
        r = run_multicast(net, padded, pk, seed=42, adversaries=[contaminate("relay1", strategy)],
                          verify_at_nodes=verify)
        drops = ", ".join(f"{d.node}<-{d.edge}" for d in r.drops) or "none"
        status = "ok" if r.all_decoded else f"failed at {', '.join(r.failed_sinks)}"
        print(f"{strategy:16s} verify={'on ' if verify else 'off'}  drops: {drops:24s} sinks: {status}")
