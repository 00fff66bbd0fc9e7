"""Deterministic 64-bit RNG primitives shared by both kernel lanes.

The compiled lane re-implements the same splitmix64 stream in C, so any
consumer seeded through `derive_seed` draws identical values on either lane.
"""

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_BASIN = 0x8BADF00DD15EA5E5


def splitmix64(state: int) -> tuple[int, int]:
    """Advance one splitmix64 step; returns (new_state, output)."""
    state = (state + _GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def derive_seed(*parts) -> int:
    """Fold ints and strings into one 64-bit seed, order-sensitive."""
    state = _BASIN
    for part in parts:
        if isinstance(part, str):
            data = part.encode()
            state, _ = splitmix64(state ^ len(data))
            for byte in data:
                state, _ = splitmix64(state ^ byte)
        else:
            state, _ = splitmix64(state ^ (int(part) & MASK64))
    _, out = splitmix64(state)
    return out


class SplitMix64:
    """Sequential splitmix64 stream with float53 output."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state, out = splitmix64(self.state)
        return out

    def next_float(self) -> float:
        # 53 uniform mantissa bits in [0, 1)
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)
