"""Classical memory tables and their on-disk format.

A table is a list of w-bit words, length N.  Files carry a little-endian
header (magic ``QTBL``, u32 N, u32 w) followed by the words packed LSB
first into a contiguous bitstream.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

MAGIC = b"QTBL"


@dataclass(frozen=True)
class BitTable:
    entries: tuple[int, ...]
    word_width: int = 1

    def __post_init__(self):
        if self.word_width < 1:
            raise ValueError("word width must be >= 1")
        if len(self.entries) < 1:
            raise ValueError("table must have at least one entry")
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        for e in self.entries:
            if not 0 <= e < (1 << self.word_width):
                raise ValueError(f"word {e} does not fit in {self.word_width} bits")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def address_bits(self) -> int:
        return max(1, (self.n - 1).bit_length())

    def padded_to_power_of_two(self) -> "BitTable":
        n = self.n
        full = 1 << self.address_bits
        if full == n:
            return self
        return BitTable(self.entries + (0,) * (full - n), self.word_width)

    # -- serialization ------------------------------------------------------

    def to_bytes(self) -> bytes:
        header = MAGIC + struct.pack("<II", self.n, self.word_width)
        total_bits = self.n * self.word_width
        buf = bytearray((total_bits + 7) // 8)
        pos = 0
        for word in self.entries:
            for b in range(self.word_width):
                if (word >> b) & 1:
                    buf[pos >> 3] |= 1 << (pos & 7)
                pos += 1
        return header + bytes(buf)

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitTable":
        if data[:4] != MAGIC:
            raise ValueError("bad table file magic")
        n, w = struct.unpack("<II", data[4:12])
        total_bits = n * w
        body = data[12:]
        if len(body) * 8 < total_bits:
            raise ValueError("truncated table file")
        entries = []
        pos = 0
        for _ in range(n):
            word = 0
            for b in range(w):
                if (body[pos >> 3] >> (pos & 7)) & 1:
                    word |= 1 << b
                pos += 1
            entries.append(word)
        return cls(tuple(entries), w)

    def write(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def read(cls, path) -> "BitTable":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())

    @classmethod
    def from_hex(cls, text: str, n: int, word_width: int = 1) -> "BitTable":
        """Inline hex form: the packed bitstream of ``to_bytes`` without header."""
        raw = bytes.fromhex(text)
        return cls.from_bytes(MAGIC + struct.pack("<II", n, word_width) + raw)

    def to_hex(self) -> str:
        return self.to_bytes()[12:].hex()


def random_table(n: int, word_width: int = 1, seed: int = 0) -> BitTable:
    rng = np.random.Generator(np.random.Philox(key=seed))
    words = rng.integers(0, 1 << word_width, size=n, dtype=np.uint64)
    return BitTable(tuple(int(w) for w in words), word_width)
