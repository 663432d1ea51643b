"""Deterministic, platform-independent random number generation.

Corpus corruption must reproduce byte-identically across runs, platforms,
and interpreter versions, so the generator is pinned rather than borrowed
from the standard library:

* stream generator: xoshiro256** 1.0 (Blackman / Vigna),
* state initialization: four outputs of SplitMix64 run from the seed,
* bounded draws: rejection sampling (no modulo bias),
* substreams: ``derive_seed(master, index)`` mixes the index through
  SplitMix64 so per-sentence generators are independent and O(1) to build.

Everything is integer arithmetic masked to 64 bits; the only floating
point use is the fixed ``IEEE double = u64 >> 11 scaled by 2**-53``
conversion, which is exact on any IEEE-754 platform.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def _splitmix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step; returns (next_state, output)."""
    state = (state + _GOLDEN_GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


def derive_seed(master: int, index: int) -> int:
    """Stateless child-seed derivation for independent substreams."""
    if index < 0:
        raise ValueError("substream index must be nonnegative")
    mixed = (master ^ ((index + 1) * _GOLDEN_GAMMA)) & _MASK64
    return _splitmix64(mixed)[1]


class Xoshiro256StarStar:
    """xoshiro256** 1.0 with SplitMix64 state initialization."""

    def __init__(self, seed: int):
        state = seed & _MASK64
        s = []
        for _ in range(4):
            state, out = _splitmix64(state)
            s.append(out)
        self._s = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), unbiased via rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound

    def unit(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def chance(self, probability: float) -> bool:
        """Bernoulli draw; always consumes exactly one stream value."""
        if not 0.0 <= probability <= 1.0:
            raise ValueError("probability must be in [0, 1]")
        return self.next_u64() < int(probability * (1 << 64))

    def choice(self, items):
        """Uniform element of a non-empty sequence."""
        return items[self.below(len(items))]

    def categorical(self, probabilities) -> int:
        """Index drawn from a categorical distribution; one stream value."""
        u = self.unit()
        cumulative = 0.0
        last = len(probabilities) - 1
        for i, p in enumerate(probabilities):
            cumulative += p
            if u < cumulative or i == last:
                return i
        raise AssertionError("unreachable")
