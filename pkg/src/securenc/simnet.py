"""Single-round multicast simulation with pollution and wiretap adversaries.

Edges are processed upstream to downstream. Every non-sink node forwards, on
each out-edge, a combination of the packets it accepted, weighted by the
coefficients that kernelgen derives for that edge. Contaminating adversaries
inject extra packets alongside the honest one, so an edge may carry more
than one packet; the first packet on an edge is its regular slot.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional, Sequence

from .codec import (
    CodedPacket,
    PaddedPacket,
    VandermondeKey,
    decode,
    make_vandermonde,
    select_independent,
    source_packets,
    is_valid_packet,
)
from .errors import DimensionError, InstanceTooLargeError, SecureNCError
from .ffmath import Matrix, mat_inv, mat_mul, row_space_rank
from .homohash import HashPublic
from .kernelgen import MASK64, global_kernel, global_kernels, local_coeffs, splitmix_next
from .topology import Network

Strategy = Literal["random-vector", "targeted-bitflip", "replay"]
STRATEGIES: tuple[str, ...] = ("random-vector", "targeted-bitflip", "replay")


@dataclass(frozen=True)
class AdversaryAction:
    """Contaminate at a node (all its out-edges) or given edges, or eavesdrop on edges."""

    kind: Literal["contaminate", "eavesdrop"]
    node: Optional[str] = None
    edges: tuple[str, ...] = ()
    strategy: Strategy = "random-vector"

    def __post_init__(self):
        if self.kind not in ("contaminate", "eavesdrop"):
            raise ValueError(f"unknown adversary kind {self.kind!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown contamination strategy {self.strategy!r}")
        if self.kind == "eavesdrop" and self.node is not None:
            raise ValueError("eavesdroppers tap edges, not nodes")


def contaminate(node: str, strategy: Strategy = "random-vector") -> AdversaryAction:
    return AdversaryAction("contaminate", node=node, strategy=strategy)


def eavesdrop(*edges: str) -> AdversaryAction:
    return AdversaryAction("eavesdrop", edges=tuple(edges))


@dataclass(frozen=True)
class Observation:
    edge: str
    vector: tuple[int, ...]
    kernel: tuple[int, ...]  # true global kernel of the tapped edge


@dataclass(frozen=True)
class DropEvent:
    node: str
    edge: str
    injected: bool


@dataclass
class SinkResult:
    sink: str
    received: int
    decoded: Optional[Matrix] = None
    error: Optional[str] = None
    matches_source: bool = False

    @property
    def ok(self) -> bool:
        return self.error is None and self.matches_source


@dataclass
class SimReport:
    sinks: dict[str, SinkResult]
    observations: list[Observation] = field(default_factory=list)
    drops: list[DropEvent] = field(default_factory=list)
    injected: int = 0
    carried: dict[str, list[CodedPacket]] = field(default_factory=dict)

    @property
    def all_decoded(self) -> bool:
        return all(r.ok for r in self.sinks.values())

    @property
    def failed_sinks(self) -> list[str]:
        return [t for t, r in self.sinks.items() if not r.ok]


def _corrupt(strategy: str, honest: CodedPacket, inputs: Sequence[CodedPacket], p: int, rng: random.Random) -> CodedPacket:
    vec = list(honest.vector)
    if strategy == "random-vector":
        vec = [rng.randrange(p) for _ in vec]
    elif strategy == "targeted-bitflip":
        j = rng.randrange(1, len(vec) - 1)
        flipped = vec[j] ^ (1 << rng.randrange(max(1, p.bit_length() - 1)))
        vec[j] = flipped if flipped < p else (vec[j] + 1) % p
    else:
        # replay an input under this edge's claimed kernel
        vec = list(rng.choice(list(inputs)).vector) if inputs else vec
    return CodedPacket(tuple(vec), honest.kernel)


def _combine(coeffs: Sequence[int], packets: Sequence[Optional[CodedPacket]], m: int, p: int) -> Optional[CodedPacket]:
    live = [(c, pkt) for c, pkt in zip(coeffs, packets) if pkt is not None]
    if not live:
        return None
    width = len(live[0][1].vector)
    vec = [0] * width
    ker = [0] * m
    for c, pkt in live:
        if len(pkt.vector) != width or len(pkt.kernel) != m:
            continue
        for j, s in enumerate(pkt.vector):
            vec[j] += c * s
        for j, s in enumerate(pkt.kernel):
            ker[j] += c * s
    return CodedPacket(tuple(v % p for v in vec), tuple(v % p for v in ker))


def _adversary_seed(seed: int) -> int:
    return splitmix_next(seed ^ 0xADD5EED)[0] & MASK64


def run_multicast(
    net: Network,
    packets: Sequence[PaddedPacket],
    pk: HashPublic,
    seed: int,
    adversaries: Iterable[AdversaryAction] = (),
    verify_at_nodes: bool = True,
    adversary_seed: Optional[int] = None,
) -> SimReport:
    """Deliver the padded source rows to every sink and try to decode them there.

    With verify_at_nodes every relay and sink drops packets that fail
    verify_packet before using them. Decode errors are recorded per sink and
    never abort the run.
    """
    m, p = net.m, pk.p
    if len(packets) != m:
        raise DimensionError(f"network carries m={m} packets per round, got {len(packets)}")
    adversaries = list(adversaries)
    rng = random.Random(_adversary_seed(seed) if adversary_seed is None else adversary_seed)
    truth = decode(source_packets(packets), pk)

    polluters: dict[str, list[str]] = {}
    for adv in adversaries:
        if adv.kind != "contaminate":
            continue
        if adv.edges:
            targets = adv.edges
        else:
            net.node_index(adv.node)
            targets = tuple(e.id for e in net.out_edges(adv.node))
        for eid in targets:
            net.edge(eid)
            polluters.setdefault(eid, []).append(adv.strategy)

    carried: dict[str, list[CodedPacket]] = {}
    report = SimReport(sinks={})
    sink_inbox: dict[str, list[CodedPacket]] = {}

    for v in net.nodes:
        if v == net.source:
            slots: list[Optional[CodedPacket]] = list(source_packets(packets))
            extras: list[CodedPacket] = []
        else:
            slots, extras = [], []
            for e in net.in_edges(v):
                on_edge = carried.get(e.id, [])
                accepted = []
                for idx, pkt in enumerate(on_edge):
                    if verify_at_nodes and not is_valid_packet(pk, pkt):
                        report.drops.append(DropEvent(v, e.id, injected=idx > 0))
                        accepted.append(None)
                    else:
                        accepted.append(pkt)
                slots.append(accepted[0] if accepted else None)
                extras.extend(pkt for pkt in accepted[1:] if pkt is not None)

        if v in net.sinks:
            sink_inbox[v] = [pkt for pkt in slots if pkt is not None] + extras
            continue

        inputs = slots + extras
        for e in net.out_edges(v):
            coeffs = local_coeffs(net, seed, e.id, len(inputs), p)
            honest = _combine(coeffs, inputs, m, p)
            out = [honest] if honest is not None else []
            for strategy in polluters.get(e.id, ()):
                base = honest or CodedPacket((0,) * (pk.n + 2), global_kernel(net, seed, e.id, p))
                out.append(_corrupt(strategy, base, [x for x in inputs if x is not None], p, rng))
                report.injected += 1
            carried[e.id] = out

    kernels = global_kernels(net, seed, p)
    for adv in adversaries:
        if adv.kind == "eavesdrop":
            for eid in adv.edges:
                for pkt in carried.get(eid, []):
                    report.observations.append(Observation(eid, pkt.vector, kernels[eid]))

    for t in net.sinks:
        inbox = sink_inbox.get(t, [])
        res = SinkResult(t, received=len(inbox))
        try:
            chosen = select_independent(inbox, m, p)
            res.decoded = decode(chosen, pk)
            res.matches_source = res.decoded == truth
            if not res.matches_source:
                res.error = "decoded message differs from the source"
        except SecureNCError as exc:
            res.error = f"{type(exc).__name__}: {exc}"
        report.sinks[t] = res
    report.carried = carried
    return report


# ---------------------------------------------------------------------------
# wiretap security


def check_practical_security(a: Matrix, key: VandermondeKey, m: int) -> bool:
    """True iff no row of P^-1 lies in the row space of the tapped kernels.

    When this holds, no linear combination of the tapped packets equals any
    single source row, whatever the message.
    """
    if key.m != m:
        raise DimensionError(f"key has {key.m} parity symbols, expected {m}")
    if any(len(row) != m for row in a):
        raise DimensionError(f"observed kernels must have {m} columns")
    p = key.p
    rows = [list(r) for r in a]
    base = row_space_rank(rows, p) if rows else 0
    for w in mat_inv(make_vandermonde(key), p):
        if row_space_rank(rows + [w], p) != base + 1:
            return False
    return True


def observed_mix(a: Matrix, key: VandermondeKey) -> Matrix:
    """How each tapped packet's payload decomposes over the rows of X (A @ P)."""
    if not a:
        return []
    return mat_mul(a, make_vandermonde(key), key.p)


BRUTE_FORCE_LIMITS = {"p": 7, "k": 3, "m": 3}


def brute_force_recovery(a: Matrix, mix: Matrix, p: int, m: int) -> Optional[tuple[int, tuple[int, ...]]]:
    """Exhaustively search for b with b @ mix equal to a unit vector.

    `mix` is `observed_mix(a, key)`: row j says which combination of source
    rows the j-th tapped packet carries in its payload. A hit (i, b) means
    the combination b of tapped packets reveals source row i in the clear.
    Returns None when no combination does.
    """
    k = len(a)
    if p > BRUTE_FORCE_LIMITS["p"] or k > BRUTE_FORCE_LIMITS["k"] or m > BRUTE_FORCE_LIMITS["m"]:
        raise InstanceTooLargeError(f"exhaustive search limited to p<=7, k<=3, m<=3 (got p={p}, k={k}, m={m})")
    if len(mix) != k or any(len(row) != m for row in mix):
        raise DimensionError("mix must have one length-m row per tapped kernel")
    units = {tuple(int(i == j) for j in range(m)): i for i in range(m)}
    for b in itertools.product(range(p), repeat=k):
        combo = tuple(sum(bj * row[c] for bj, row in zip(b, mix)) % p for c in range(m))
        if combo in units:
            return units[combo], b
    return None


def secure_payload_rate(m: int, n: int) -> float:
    """Payload packets per round once each packet carries two extra symbols."""
    return m * n / (n + 2)


def asymptotic_secure_rate(m: int, n: int) -> float:
    return m - 2 * m / n


@dataclass
class SurveyReport:
    m: int
    n: int
    k: int
    taps_checked: int
    secure: int
    sampled: bool
    insecure_taps: list[tuple[str, ...]]
    rate: float

    @property
    def secure_fraction(self) -> float:
        return self.secure / self.taps_checked if self.taps_checked else 1.0


def security_survey(
    net: Network,
    key: VandermondeKey,
    k: int,
    seed: int,
    n: int,
    max_subsets: int = 20000,
) -> SurveyReport:
    """Check every tap set of at most k edges (sampled beyond max_subsets)."""
    m = net.m
    if not 1 <= k < m:
        raise ValueError(f"tap size must satisfy 1 <= k < m={m}, got k={k}")
    kernels = global_kernels(net, seed, key.p)
    ids = [e.id for e in net.edges]
    total = sum(math.comb(len(ids), s) for s in range(1, k + 1))
    if total <= max_subsets:
        taps: Iterable[tuple[str, ...]] = itertools.chain.from_iterable(
            itertools.combinations(ids, s) for s in range(1, k + 1)
        )
        sampled = False
    else:
        rng = random.Random(seed)
        taps = (tuple(rng.sample(ids, rng.randint(1, k))) for _ in range(max_subsets))
        sampled = True
    checked = secure = 0
    insecure = []
    for tap in taps:
        checked += 1
        if check_practical_security([list(kernels[e]) for e in tap], key, m):
            secure += 1
        else:
            insecure.append(tap)
    return SurveyReport(m, n, k, checked, secure, sampled, insecure, secure_payload_rate(m, n))
