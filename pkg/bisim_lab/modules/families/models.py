"""Families module models - bitstrings, tree addresses and family tags."""

from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


FamilyName = Literal["bisplitter", "layered", "seqsplit", "fanin", "roberts-example"]


class BitString(BaseModel):
    """A word over {0,1}; ``s[i]`` is 1-indexed and ``s.sub(i, j)`` is inclusive."""

    model_config = ConfigDict(frozen=True)

    bits: Tuple[int, ...]

    @field_validator("bits")
    @classmethod
    def validate_bits(cls, v):
        if any(b not in (0, 1) for b in v):
            raise ValueError("bits must be 0 or 1")
        return v

    @classmethod
    def parse(cls, text: str) -> "BitString":
        return cls(bits=tuple(int(ch) for ch in text))

    @classmethod
    def from_int(cls, value: int, k: int) -> "BitString":
        """Bitstring of length k whose first bit is the most significant one."""
        return cls(bits=tuple((value >> (k - 1 - i)) & 1 for i in range(k)))

    @property
    def length(self) -> int:
        return len(self.bits)

    @property
    def value(self) -> int:
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out

    def __getitem__(self, i: int) -> int:
        if not 1 <= i <= len(self.bits):
            raise IndexError(f"bit index {i} outside 1..{len(self.bits)}")
        return self.bits[i - 1]

    def sub(self, i: int, j: int) -> "BitString":
        """Inclusive subword from position i to j (empty when j < i)."""
        return BitString(bits=self.bits[i - 1:j])

    def is_prefix_of(self, other: "BitString") -> bool:
        return other.bits[:len(self.bits)] == self.bits

    def __add__(self, other: "BitString") -> "BitString":
        return BitString(bits=self.bits + other.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


class TreeAddress(BaseModel):
    """Position of a node inside a tree gadget: a word over {a,b}."""

    model_config = ConfigDict(frozen=True)

    word: str = Field(default="", pattern=r"^[ab]*$")

    @property
    def depth(self) -> int:
        return len(self.word)

    @property
    def bin(self) -> int:
        """Binary value reading a as 0 and b as 1."""
        out = 0
        for ch in self.word:
            out = 2 * out + (1 if ch == "b" else 0)
        return out

    @property
    def bfs_index(self) -> int:
        """Index in breadth-first order of a complete binary tree."""
        return (1 << self.depth) - 1 + self.bin

    def child(self, symbol: str) -> "TreeAddress":
        return TreeAddress(word=self.word + symbol)

    def __str__(self) -> str:
        return self.word


class FamilyTag(BaseModel):
    """A recognized generated family and its parameter."""

    model_config = ConfigDict(frozen=True)

    name: FamilyName
    param: Optional[int] = None

    def __str__(self) -> str:
        return self.name if self.param is None else f"{self.name}({self.param})"
