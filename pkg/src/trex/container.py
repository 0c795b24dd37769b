"""Binary container: magic, flags, a 64-bit header and tagged, length-prefixed sections.

Layout::

    "TREX1" | flags:u8 | n:u64 | m:u64 | N:u64 | (tag:4 bytes | len:u64 | payload)*

Flags: bit 0 undirected, bit 1 twin layer.  Sections appear in the fixed
order LOUD, DBIT (directed only), SPRT, WVLT, TWIN (twin layer only).  All
integers are little-endian.
"""
from __future__ import annotations

import struct
from pathlib import Path

from .errors import ContainerError, TrexError
from .succinct.bitvec import CompressedBitVec
from .trexds import TrexGraph
from .twin import TwinIndex

MAGIC = b"TREX1"
UNDIRECTED = 1
TWIN = 2
_HEADER = struct.Struct("<5sBQQQ")
_SECTION = struct.Struct("<4sQ")
KNOWN_TAGS = (b"LOUD", b"DBIT", b"SPRT", b"WVLT", b"TWIN")


def dumps(core: TrexGraph, twins: TwinIndex | None = None) -> bytes:
    flags = (UNDIRECTED if core.undirected else 0) | (TWIN if twins else 0)
    N = twins.N if twins else core.n
    out = bytearray(_HEADER.pack(MAGIC, flags, core.n, core.m, N))
    sections = core.sections()
    if twins:
        buf = bytearray()
        twins.stored_b().dump(buf)
        sections.append((b"TWIN", bytes(buf)))
    for tag, payload in sections:
        out += _SECTION.pack(tag, len(payload))
        out += payload
    return bytes(out)


def loads(data: bytes) -> tuple[TrexGraph, TwinIndex | None]:
    """Parse and fully validate a container; any defect raises :class:`ContainerError`."""
    if len(data) < _HEADER.size:
        raise ContainerError("truncated header")
    magic, flags, n, m, N = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise ContainerError("bad magic")
    if flags & ~(UNDIRECTED | TWIN):
        raise ContainerError(f"unknown flag bits {flags:#04x}")
    undirected = bool(flags & UNDIRECTED)
    twin = bool(flags & TWIN)
    expected = [t for t in KNOWN_TAGS if not (t == b"DBIT" and undirected) and not (t == b"TWIN" and not twin)]
    sections: dict[bytes, bytes] = {}
    pos = _HEADER.size
    while pos < len(data):
        if pos + _SECTION.size > len(data):
            raise ContainerError("truncated section header")
        tag, length = _SECTION.unpack_from(data, pos)
        pos += _SECTION.size
        if tag not in KNOWN_TAGS:
            raise ContainerError(f"unknown section tag {tag!r}")
        if len(sections) >= len(expected) or tag != expected[len(sections)]:
            raise ContainerError(f"unexpected section {tag.decode()}")
        if pos + length > len(data):
            raise ContainerError(f"section {tag.decode()} runs past the end")
        sections[tag] = data[pos : pos + length]
        pos += length
    if len(sections) != len(expected):
        raise ContainerError("missing sections")
    try:
        core = TrexGraph.from_sections(n, m, undirected, sections)
        twins = None
        if twin:
            stored, end = CompressedBitVec.load(sections[b"TWIN"], 0)
            if end != len(sections[b"TWIN"]):
                raise ContainerError("section TWIN has trailing bytes")
            if N < n or stored.n != N - 1 or stored.ones != n - 1:
                raise ContainerError("twin bitvector disagrees with the header")
            twins = TwinIndex.from_stored(N, core, stored)
        elif N != n:
            raise ContainerError("N differs from n without a twin layer")
    except ContainerError:
        raise
    except (TrexError, ValueError, IndexError, struct.error) as exc:
        raise ContainerError(f"corrupt container: {exc}") from exc
    return core, twins


def write(path: str | Path, core: TrexGraph, twins: TwinIndex | None = None) -> None:
    Path(path).write_bytes(dumps(core, twins))


def read(path: str | Path) -> tuple[TrexGraph, TwinIndex | None]:
    return loads(Path(path).read_bytes())
