"""Binary parameter and packet files, plus the JSON manifest.

Integers are written as a 4-byte big-endian length followed by the
big-endian magnitude (zero has length 0).

Parameter file::

    b"SNCP" | version u8 | int p | int q | n u32 | int g_0 .. g_{n+1}
    | has_secret u8 | [int g | int u_0 .. u_{n+1}]

Packet file (symbols fixed-width, ceil(|p| / 8) bytes each)::

    b"SNCK" | version u8 | index u32 | width u16 | len u32 | kernel_len u32
    | vector symbols | kernel symbols
"""
from __future__ import annotations

import hashlib
import io
import json
import struct
from dataclasses import asdict
from pathlib import Path
from typing import Optional

from .codec import CodedPacket, Manifest
from .errors import FormatError
from .ffmath import GroupParams
from .homohash import HashPublic, HashSecret

PARAMS_MAGIC = b"SNCP"
PACKET_MAGIC = b"SNCK"
VERSION = 1
MANIFEST_FORMAT = "securenc-manifest/1"


def _put_int(out: io.BytesIO, v: int) -> None:
    if v < 0:
        raise ValueError("only nonnegative integers are serialized")
    raw = v.to_bytes((v.bit_length() + 7) // 8, "big")
    out.write(struct.pack(">I", len(raw)))
    out.write(raw)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise FormatError("truncated file")
        chunk = self.data[self.pos:self.pos + size]
        self.pos += size
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def int(self) -> int:
        return int.from_bytes(self.take(self.u32()), "big")

    def header(self, magic: bytes) -> None:
        if self.take(len(magic)) != magic:
            raise FormatError(f"bad magic, expected {magic!r}")
        version = self.u8()
        if version != VERSION:
            raise FormatError(f"unsupported version {version}")


def serialize_params(pk: HashPublic, sk: Optional[HashSecret] = None) -> bytes:
    out = io.BytesIO()
    out.write(PARAMS_MAGIC + bytes([VERSION]))
    _put_int(out, pk.p)
    _put_int(out, pk.q)
    out.write(struct.pack(">I", pk.n))
    for g in pk.generators:
        _put_int(out, g)
    out.write(bytes([sk is not None]))
    if sk is not None:
        if sk.n != pk.n or sk.group.p != pk.p or sk.group.q != pk.q:
            raise ValueError("secret does not belong to these public parameters")
        _put_int(out, sk.group.g)
        for u in sk.exponents:
            _put_int(out, u)
    return out.getvalue()


def parse_params(data: bytes, with_secret: bool = True) -> tuple[HashPublic, Optional[HashSecret]]:
    """Parse a parameter file; the secret section is read only when asked for."""
    r = _Reader(data)
    r.header(PARAMS_MAGIC)
    p, q = r.int(), r.int()
    n = r.u32()
    pk = HashPublic(p, q, tuple(r.int() for _ in range(n + 2)))
    has_secret = r.u8()
    if not (with_secret and has_secret):
        return pk, None
    group = GroupParams(p, q, r.int())
    sk = HashSecret(group, tuple(r.int() for _ in range(n + 2)))
    if r.pos != len(data):
        raise FormatError("trailing bytes after secret section")
    return pk, sk


def public_size(pk: HashPublic) -> int:
    return len(serialize_params(pk))


def fingerprint(pk: HashPublic) -> str:
    return hashlib.sha256(serialize_params(pk)).hexdigest()[:16]


def symbol_width(p: int) -> int:
    return (p.bit_length() + 7) // 8


def serialize_packet(pkt: CodedPacket, index: int, p: int) -> bytes:
    w = symbol_width(p)
    out = io.BytesIO()
    out.write(PACKET_MAGIC + bytes([VERSION]))
    out.write(struct.pack(">IHII", index, w, len(pkt.vector), len(pkt.kernel)))
    for v in (*pkt.vector, *pkt.kernel):
        if not 0 <= v < p:
            raise ValueError(f"symbol {v} is not reduced modulo p")
        out.write(v.to_bytes(w, "big"))
    return out.getvalue()


def parse_packet(data: bytes) -> tuple[int, CodedPacket]:
    r = _Reader(data)
    r.header(PACKET_MAGIC)
    index, w, length, klen = r.u32(), r.u16(), r.u32(), r.u32()
    syms = [int.from_bytes(r.take(w), "big") for _ in range(length + klen)]
    if r.pos != len(data):
        raise FormatError("trailing bytes after packet")
    return index, CodedPacket(tuple(syms[:length]), tuple(syms[length:]))


def write_manifest(path: Path, manifest: Manifest, seed: int, packets: list[str], params_fp: str) -> None:
    doc = {"format": MANIFEST_FORMAT, **asdict(manifest), "seed": f"{seed:016x}",
           "packets": packets, "params": params_fp}
    path.write_text(json.dumps(doc, indent=2) + "\n")


def read_manifest(path: Path) -> tuple[Manifest, int, list[str], str]:
    try:
        doc = json.loads(path.read_text())
        if doc.get("format") != MANIFEST_FORMAT:
            raise FormatError(f"{path}: not a {MANIFEST_FORMAT} file")
        manifest = Manifest(doc["length"], doc["m"], doc["n"], doc["symbol_bytes"])
        return manifest, parse_seed(doc["seed"]), list(doc["packets"]), doc.get("params", "")
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: malformed manifest ({exc})") from None


def parse_seed(text: str) -> int:
    """Seeds are written as hexadecimal (up to 16 digits, optional 0x prefix)."""
    text = text.strip().lower()
    try:
        value = int(text.removeprefix("0x"), 16)
    except ValueError:
        raise FormatError(f"cannot parse seed {text!r}") from None
    if not 0 <= value < 1 << 64:
        raise FormatError("seed must fit in 64 bits")
    return value
