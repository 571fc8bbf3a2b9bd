"""Counter-based deterministic random numbers.

Every draw is a pure function of (seed, index), so corpora are reproducible
element-by-element, independent of evaluation order, platform, or Python
version. The mixer is the splitmix64 finalizer.
"""

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM = 0xD1B54A32D192ED03


def _mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def bits64(seed: int, index: int) -> int:
    """64 mixed bits for counter `index` of stream `seed`."""
    return _mix64((seed * _GOLDEN + index * _STREAM) & _MASK)


def unit(seed: int, index: int) -> float:
    """Uniform float in [0, 1) for counter `index` of stream `seed`."""
    return (bits64(seed, index) >> 11) * 2.0**-53


def uniform(seed: int, index: int, lo: float, hi: float) -> float:
    """Uniform float in [lo, hi)."""
    return lo + (hi - lo) * unit(seed, index)


def randint(seed: int, index: int, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi] inclusive."""
    if hi < lo:
        raise ValueError("empty integer range")
    span = hi - lo + 1
    return lo + bits64(seed, index) % span
