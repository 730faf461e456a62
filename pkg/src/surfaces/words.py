"""
Freely reduced words in the generators of a free group, and the pair-of-pants surface spec

Text form: letters separated by spaces, "g1" for a generator and "g1^-1" for its
inverse; the empty word is "e".
"""

import re
from dataclasses import dataclass, field
from typing import Iterator, List, Sequence, Tuple

from src.errors import DomainError

Letter = Tuple[int, int]

_LETTER = re.compile(r"^g(\d+)(?:\^(-?1))?$")


@dataclass(frozen=True, order=True)
class FreeWord:
    """Reduced word: tuple of (generator index ≥ 1, exponent ±1)"""

    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        reduced: List[Letter] = []
        for generator, exponent in self.letters:
            generator, exponent = int(generator), int(exponent)
            if generator < 1 or exponent not in (1, -1):
                raise DomainError(f"Invalid letter ({generator}, {exponent})")
            if reduced and reduced[-1] == (generator, -exponent):
                reduced.pop()
            else:
                reduced.append((generator, exponent))
        object.__setattr__(self, "letters", tuple(reduced))

    @classmethod
    def identity(cls) -> "FreeWord":
        return cls()

    @classmethod
    def generator(cls, index: int, exponent: int = 1) -> "FreeWord":
        return cls(((index, exponent),))

    @classmethod
    def parse(cls, text: str) -> "FreeWord":
        """Parse "g1 g2^-1"; "e" or "" is the identity"""
        tokens = text.replace("*", " ").split()
        if tokens == ["e"]:
            return cls()
        letters = []
        for token in tokens:
            match = _LETTER.match(token)
            if not match:
                raise DomainError(f"Cannot parse word letter '{token}' in '{text}'")
            letters.append((int(match.group(1)), int(match.group(2) or 1)))
        return cls(tuple(letters))

    @classmethod
    def from_codes(cls, codes: Sequence[int]) -> "FreeWord":
        """Inverse of codes(): code = 2·(generator − 1) + (0 for +1, 1 for −1)"""
        return cls(tuple((int(code) // 2 + 1, 1 if int(code) % 2 == 0 else -1) for code in codes))

    def codes(self) -> Tuple[int, ...]:
        return tuple(2 * (generator - 1) + (0 if exponent == 1 else 1) for generator, exponent in self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def __invert__(self) -> "FreeWord":
        return FreeWord(tuple((generator, -exponent) for generator, exponent in reversed(self.letters)))

    def __pow__(self, power: int) -> "FreeWord":
        if power < 0:
            return (~self) ** (-power)
        return FreeWord(self.letters * power)

    def conjugate(self, by: "FreeWord") -> "FreeWord":
        """by · self · by⁻¹"""
        return by * self * ~by

    def __len__(self) -> int:
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    @property
    def max_generator(self) -> int:
        return max((generator for generator, _ in self.letters), default=0)

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(f"g{generator}" if exponent == 1 else f"g{generator}^-1"
                        for generator, exponent in self.letters)


def iter_reduced_words(rank: int, max_length: int) -> Iterator[FreeWord]:
    """All reduced words of length ≤ max_length, shortest first, then by letter codes"""
    level = [FreeWord()]
    yield level[0]
    for _ in range(max_length):
        following = []
        for word in level:
            for code in range(2 * rank):
                if word.letters and (code ^ 1) == word.codes()[-1]:
                    continue
                following.append(FreeWord(word.letters + FreeWord.from_codes([code]).letters))
        following.sort(key=FreeWord.codes)
        yield from following
        level = following


BOUNDARY_NAMES = ("gamma0", "gamma1", "gamma2")


@dataclass(frozen=True)
class SurfaceSpec:
    """
    Marked pair of pants: free generators g1, g2 and peripherals
    γ₀ = (g1 g2)⁻¹, γ₁ = g1, γ₂ = g2 with γ₀γ₁γ₂ = 1

    The surface lies to the right of each oriented peripheral; operationally this
    is the maximality of (Λ⁻_c, Λ⁺_d, Λ⁻_d, Λ⁺_c) for distinct peripherals c, d.
    """

    kind: str = "pair_of_pants"
    rank: int = 2
    peripherals: Tuple[FreeWord, ...] = field(default_factory=lambda: (
        FreeWord.parse("g2^-1 g1^-1"), FreeWord.parse("g1"), FreeWord.parse("g2")))
    boundary_names: Tuple[str, ...] = BOUNDARY_NAMES
    orientation: str = "surface_right"

    def __post_init__(self):
        if self.kind != "pair_of_pants":
            raise DomainError(f"Unsupported surface kind '{self.kind}'")
        product = FreeWord()
        for word in self.peripherals:
            product = product * word
        if not product.is_identity():
            raise DomainError(f"Peripheral product relation fails: {product}")

    @classmethod
    def pair_of_pants(cls) -> "SurfaceSpec":
        return cls()

    def boundary_index(self, boundary) -> int:
        """Accept 0/1/2 or "gamma0"/"gamma1"/"gamma2" """
        if isinstance(boundary, str):
            if boundary not in self.boundary_names:
                raise DomainError(f"Unknown boundary '{boundary}', expected one of {self.boundary_names}")
            return self.boundary_names.index(boundary)
        index = int(boundary)
        if not 0 <= index < len(self.peripherals):
            raise DomainError(f"Boundary index {index} out of range")
        return index

    def peripheral(self, boundary) -> FreeWord:
        return self.peripherals[self.boundary_index(boundary)]


PAIR_OF_PANTS = SurfaceSpec()
