"""Command-line front end: keygen, encode, simulate, verify, decode, report-overhead.

Exit codes: 0 success, 2 bad input, 3 a packet failed verification,
4 a sink or the decoder could not recover the file.
"""
from __future__ import annotations

import argparse
import hashlib
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import codec, simnet, wire
from .errors import MissingSecretError, SecureNCError
from .ffmath import gen_group_params
from .homohash import HashPublic, gen_hash_params
from .kernelgen import seed_from_metadata, splitmix_next
from .topology import build_network

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFY = 3
EXIT_DECODE = 4

REFERENCE_OVERHEAD_PCT = 0.48
REFERENCE_PARAM_KB = 16.3
REFERENCE_STARTUP_S = 0.127


def _emit(fields: list[tuple[str, object]], machine: bool, out=None) -> None:
    out = out or sys.stdout
    for key, value in fields:
        if machine:
            print(f"{key}={value}", file=out)
        else:
            print(f"{key.replace('_', ' ')}: {value}", file=out)


def _load_params(path: Path, need_secret: bool = False):
    pk, sk = wire.parse_params(path.read_bytes(), with_secret=need_secret)
    if need_secret and sk is None:
        raise MissingSecretError(f"{path} holds only public parameters; encoding needs the secret section")
    return pk, sk


def _key_seed(sk, seed: int) -> int:
    """Vandermonde key seed, derived from the secret so the public session seed reveals nothing."""
    h = hashlib.sha256(b"vandermonde-key")
    for u in sk.exponents:
        h.update(u.to_bytes((u.bit_length() + 7) // 8 or 1, "big"))
    h.update(seed.to_bytes(8, "big"))
    return int.from_bytes(h.digest()[:8], "big")


def _packet_dir(path: Path):
    manifest, seed, names, fp = wire.read_manifest(path / "manifest.json")
    packets = []
    for name in names:
        index, pkt = wire.parse_packet((path / name).read_bytes())
        packets.append((index, pkt))
    return manifest, seed, packets, fp


# ---------------------------------------------------------------------------
# commands


def cmd_keygen(args) -> int:
    group = gen_group_params(args.p_bits, args.q_bits, args.seed)
    pk, sk = gen_hash_params(group, args.n, splitmix_next(args.seed)[0])
    args.out.write_bytes(wire.serialize_params(pk, sk))
    if args.public_out:
        args.public_out.write_bytes(wire.serialize_params(pk))
    _emit([
        ("params", args.out),
        ("fingerprint", wire.fingerprint(pk)),
        ("p_bits", pk.p.bit_length()),
        ("q_bits", pk.q.bit_length()),
        ("n", pk.n),
    ], args.machine)
    return EXIT_OK


def cmd_encode(args) -> int:
    pk, sk = _load_params(args.params, need_secret=True)
    data = args.file.read_bytes()
    if args.seed is None:
        seed = seed_from_metadata(args.file.name.encode(), args.date.encode(), args.publisher.encode())
    else:
        seed = args.seed
    sb = codec.default_symbol_bytes(pk.p)
    if sb < 1:
        raise ValueError(f"|p| = {pk.p.bit_length()} bits is too small to carry whole bytes")
    x, manifest = codec.split_file(data, args.m, sb, n=pk.n)
    key = codec.sample_vandermonde_key(args.m, pk.p, _key_seed(sk, seed))
    padded = codec.encode_source(x, sk, key)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for i, pkt in enumerate(codec.source_packets(padded)):
        name = f"packet_{i:03d}.bin"
        (args.out_dir / name).write_bytes(wire.serialize_packet(pkt, i, pk.p))
        names.append(name)
    wire.write_manifest(args.out_dir / "manifest.json", manifest, seed, names, wire.fingerprint(pk))
    _emit([("packets", len(names)), ("n", manifest.n), ("bytes", manifest.length),
           ("seed", f"{seed:016x}"), ("out_dir", args.out_dir)], args.machine)
    return EXIT_OK


def cmd_simulate(args) -> int:
    pk, _ = _load_params(args.params)
    manifest, seed, packets, _ = _packet_dir(args.packets)
    if args.seed is not None:
        seed = args.seed
    topo = args.topology
    net = build_network(Path(topo) if Path(topo).is_file() else topo)
    padded = [pkt.vector for _, pkt in sorted(packets, key=lambda ip: ip[0])]
    if len(padded) != net.m:
        raise ValueError(f"topology {net.name} carries m={net.m} packets, the encoding has {len(padded)}")
    adversaries = [simnet.contaminate(v, args.strategy) for v in args.contaminate]
    if args.eavesdrop:
        adversaries.append(simnet.eavesdrop(*args.eavesdrop))
    report = simnet.run_multicast(net, padded, pk, seed, adversaries, verify_at_nodes=args.verify)

    fields: list[tuple[str, object]] = [
        ("topology", net.name),
        ("m", net.m),
        ("seed", f"{seed:016x}"),
        ("verify", "on" if args.verify else "off"),
        ("injected", report.injected),
        ("dropped", len(report.drops)),
    ]
    for d in report.drops:
        fields.append(("drop", f"{d.node}<-{d.edge}"))
    for t, res in report.sinks.items():
        fields.append((f"sink_{t}", "ok" if res.ok else f"FAILED ({res.error})"))
    for obs in report.observations:
        fields.append((f"tap_{obs.edge}", "kernel=" + ",".join(map(str, obs.kernel))))
    if args.eavesdrop_k:
        key = codec.VandermondeKey(tuple(v[-1] for v in padded), pk.p)
        survey = simnet.security_survey(net, key, args.eavesdrop_k, seed, manifest.n)
        fields += [
            ("taps_checked", survey.taps_checked),
            ("secure_fraction", f"{survey.secure_fraction:.4f}"),
            ("secure_rate", f"{survey.rate:.4f}"),
        ]
    _emit(fields, args.machine)
    return EXIT_OK if report.all_decoded else EXIT_DECODE


def cmd_verify(args) -> int:
    pk, _ = _load_params(args.params)
    files: list[Path] = []
    for path in args.packets:
        files += sorted(path.glob("*.bin")) if path.is_dir() else [path]
    rejected = 0
    fields = []
    for f in files:
        _, pkt = wire.parse_packet(f.read_bytes())
        ok = codec.is_valid_packet(pk, pkt)
        rejected += not ok
        fields.append((f.name, "accept" if ok else "reject"))
    fields.append(("rejected", rejected))
    _emit(fields, args.machine)
    return EXIT_VERIFY if rejected else EXIT_OK


def cmd_decode(args) -> int:
    pk, _ = _load_params(args.params)
    manifest, _, packets, _ = _packet_dir(args.packets)
    good = [pkt for _, pkt in packets if codec.is_valid_packet(pk, pkt)]
    try:
        x = codec.decode(codec.select_independent(good, manifest.m, pk.p), pk)
    except SecureNCError as exc:
        print(f"decode failed: {exc}", file=sys.stderr)
        return EXIT_DECODE
    args.out.write_bytes(codec.join_file(x, manifest))
    _emit([("out", args.out), ("bytes", manifest.length)], args.machine)
    return EXIT_OK


@dataclass
class OverheadReport:
    n: int
    m: int
    p_bits: int
    q_bits: int
    overhead_ratio: float
    param_bytes: int
    bandwidth_bps: float
    startup_s: float
    estimated: bool

    def fields(self) -> list[tuple[str, object]]:
        return [
            ("n", self.n),
            ("m", self.m),
            ("p_bits", self.p_bits),
            ("q_bits", self.q_bits),
            ("overhead_pct", f"{100 * self.overhead_ratio:.4f}"),
            ("param_bytes", self.param_bytes),
            ("param_size_estimated", str(self.estimated).lower()),
            ("bandwidth_bps", f"{self.bandwidth_bps:g}"),
            ("startup_s", f"{self.startup_s:.4f}"),
        ]

    def footnote(self) -> list[str]:
        lines = [
            f"reference-comparison: reference figures are overhead {REFERENCE_OVERHEAD_PCT}%, "
            f"public parameters {REFERENCE_PARAM_KB} KB, start-up {REFERENCE_STARTUP_S} s at 1 Mbps",
        ]
        pct = 100 * self.overhead_ratio
        if abs(pct - REFERENCE_OVERHEAD_PCT) >= 0.01:
            lines.append(f"  overhead {pct:.4f}% differs from the reference {REFERENCE_OVERHEAD_PCT}%")
        else:
            lines.append(f"  overhead {pct:.4f}% matches the reference {REFERENCE_OVERHEAD_PCT}% (2/n, truncated)")
        elements = (self.n + 2) * ((self.q_bits + 7) // 8)
        if abs(self.param_bytes / 1024 - REFERENCE_PARAM_KB) > 0.5:
            lines.append(
                f"  parameter size {self.param_bytes} B ({self.param_bytes / 1024:.1f} KiB) differs from the "
                f"reference {REFERENCE_PARAM_KB} KB: n+2 = {self.n + 2} generators of {self.q_bits} bits "
                f"alone take {elements} B"
            )
        if abs(self.startup_s - REFERENCE_STARTUP_S) > 0.005:
            lines.append(
                f"  start-up {self.startup_s:.4f} s differs from the reference {REFERENCE_STARTUP_S} s; "
                f"{REFERENCE_PARAM_KB} KiB at 2**20 bit/s gives {REFERENCE_PARAM_KB * 1024 * 8 / 2**20:.3f} s"
            )
        return lines


def overhead_report(pk: HashPublic, m: int, bandwidth_bps: float, estimated: bool = False) -> OverheadReport:
    size = wire.public_size(pk)
    return OverheadReport(
        n=pk.n,
        m=m,
        p_bits=pk.p.bit_length(),
        q_bits=pk.q.bit_length(),
        overhead_ratio=2 / pk.n,
        param_bytes=size,
        bandwidth_bps=bandwidth_bps,
        startup_s=size * 8 / bandwidth_bps,
        estimated=estimated,
    )


def _full_width_public(n: int, p_bits: int, q_bits: int) -> HashPublic:
    q = (1 << q_bits) - 1
    return HashPublic((1 << p_bits) - 1, q, (q,) * (n + 2))


def cmd_report_overhead(args) -> int:
    if args.params:
        pk, _ = _load_params(args.params)
        estimated = False
    else:
        if args.n is None:
            raise ValueError("give --params or --n (with --p-bits/--q-bits)")
        pk = _full_width_public(args.n, args.p_bits, args.q_bits)
        estimated = True
    rep = overhead_report(pk, args.m, args.bandwidth, estimated)
    _emit(rep.fields(), args.machine)
    for line in rep.footnote():
        print(("# " if args.machine else "") + line)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _seed(text: str) -> int:
    try:
        return wire.parse_seed(text)
    except SecureNCError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true", help="print key=value lines")
    parser = argparse.ArgumentParser(prog="securenc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", parents=[common], help="generate group and hash parameters")
    p.add_argument("--p-bits", type=int, default=320)
    p.add_argument("--q-bits", type=int, default=1024)
    p.add_argument("--n", type=int, default=410, help="data symbols per packet")
    p.add_argument("--seed", type=_seed, default=0, help="hex seed")
    p.add_argument("--out", type=Path, required=True, help="parameter file with the secret section")
    p.add_argument("--public-out", type=Path, help="also write a public-only copy")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encode", parents=[common], help="split, transform and pad a file into m packets")
    p.add_argument("file", type=Path)
    p.add_argument("--params", type=Path, required=True)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--seed", type=_seed, help="session seed; default hashes file name, --date, --publisher")
    p.add_argument("--date", default="")
    p.add_argument("--publisher", default="")
    p.add_argument("--out-dir", type=Path, required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("simulate", parents=[common], help="multicast encoded packets over a topology")
    p.add_argument("--packets", type=Path, required=True, help="directory written by encode")
    p.add_argument("--params", type=Path, required=True)
    p.add_argument("--topology", default="butterfly", help="built-in name or topology file")
    p.add_argument("--contaminate", action="append", default=[], metavar="NODE")
    p.add_argument("--strategy", choices=simnet.STRATEGIES, default="random-vector")
    p.add_argument("--verify", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--eavesdrop", action="append", default=[], metavar="EDGE")
    p.add_argument("--eavesdrop-k", type=int, default=0, help="survey every tap set of up to k edges")
    p.add_argument("--seed", type=_seed, help="override the session seed from the manifest")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="check packets against the public parameters")
    p.add_argument("packets", type=Path, nargs="+")
    p.add_argument("--params", type=Path, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decode", parents=[common], help="recover the file from a packet directory")
    p.add_argument("--packets", type=Path, required=True)
    p.add_argument("--params", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("report-overhead", parents=[common], help="per-packet overhead and start-up cost")
    p.add_argument("--params", type=Path)
    p.add_argument("--n", type=int)
    p.add_argument("--p-bits", type=int, default=320)
    p.add_argument("--q-bits", type=int, default=1024)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--bandwidth", type=float, default=1e6, help="bits per second")
    p.set_defaults(func=cmd_report_overhead)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SecureNCError, ValueError, OSError) as exc:
        print(f"securenc {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
