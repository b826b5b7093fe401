"""Uniform-bit sourcing, interval-algorithm sampling, and entropy accounting.

Two sampling surfaces are provided:

* :func:`interval_bernoulli` / :func:`interval_uniform` draw one sample per
  call with a freshly started interval refinement. They are exact (the
  Bernoulli boundary is the exact dyadic fraction of the float argument)
  and their per-sample consumption is within O(1) bits of the entropy.

* :class:`IntervalStream` carries interval state across samples
  (64-bit-register arithmetic-decoder formulation), so a sequence of n
  draws consumes about the summed entropy plus a one-time register fill,
  which is what the protocol's ledger accounting requires. Per-step
  probabilities are quantized at 2^-62 relative resolution.

All consumption counts are exact integers; a :class:`BitSource` knows how
many bits it has handed out, and ledgers reconcile against it.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ValidationError

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(x: int) -> int:
    z = x & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class BitSource:
    """Deterministic counter-based bit stream.

    Block ``i`` is a 64-bit hash of (seed, i); bits are handed out MSB
    first. ``bits_drawn`` counts exactly the bits given to callers, so
    ledger conservation can be checked with integer equality.
    """

    __slots__ = ("seed", "counter", "bits_drawn", "_block", "_avail")

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self.counter = 0
        self.bits_drawn = 0
        self._block = 0
        self._avail = 0

    def next_bit(self) -> int:
        if self._avail == 0:
            self._block = _mix64(self.seed + (self.counter + 1) * _GOLDEN)
            self.counter += 1
            self._avail = 64
        self._avail -= 1
        self.bits_drawn += 1
        return (self._block >> self._avail) & 1


@lru_cache(maxsize=256)
def _as_fraction(q: float) -> tuple[int, int]:
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"probability {q!r} outside [0,1]")
    f = Fraction(q)
    return f.numerator, f.denominator


def interval_bernoulli(q: float, src: BitSource) -> tuple[int, int]:
    """One Bernoulli(q) sample by fresh interval refinement.

    Outcome 1 owns the cell [0, q). Returns (bit, bits_consumed); the
    sample is exactly q-biased for the dyadic rational value of ``q``.
    """
    num, den = _as_fraction(q)
    if num == 0:
        return 0, 0
    if num == den:
        return 1, 0
    a = 0
    t = 0
    while True:
        pow2 = 1 << t
        if (a + 1) * den <= num * pow2:
            return 1, t
        if a * den >= num * pow2:
            return 0, t
        a = (a << 1) | src.next_bit()
        t += 1


def interval_uniform(k: int, src: BitSource) -> tuple[int, int]:
    """One exactly-uniform sample from {0,...,k-1} by interval refinement.

    Consumes exactly log2(k) bits when k is a power of two.
    """
    k = int(k)
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if k == 1:
        return 0, 0
    a = 0
    t = 0
    while True:
        pow2 = 1 << t
        j = (a * k) >> t
        if (a + 1) * k <= (j + 1) * pow2:
            return j, t
        a = (a << 1) | src.next_bit()
        t += 1


_HALF = 1 << 63
_QUARTER = 1 << 62
_THREEQ = 3 << 62


class IntervalStream:
    """Carried-state interval sampler (arithmetic-decoder registers).

    Supports heterogeneous per-sample distributions; total consumption over
    a run tracks the summed information content of the emitted samples,
    plus a one-time 64-bit register fill charged to the first drawing call.
    Degenerate draws (probability 0 or 1, or a single cell) consume zero
    bits and do not trigger the fill.
    """

    __slots__ = ("src", "lo", "hi", "code", "bits_consumed")

    def __init__(self, src: BitSource):
        self.src = src
        self.lo = 0
        self.hi = _MASK64
        self.code = None
        self.bits_consumed = 0

    def _decode(self, cum: list[int], total: int) -> tuple[int, int]:
        consumed = 0
        if self.code is None:
            code = 0
            for _ in range(64):
                code = (code << 1) | self.src.next_bit()
            self.code = code
            consumed += 64
        lo, hi, code = self.lo, self.hi, self.code
        span = hi - lo + 1
        value = ((code - lo + 1) * total - 1) // span
        j = bisect_right(cum, value) - 1
        new_lo = lo + (span * cum[j]) // total
        new_hi = lo + (span * cum[j + 1]) // total - 1
        while True:
            if new_hi < _HALF:
                pass
            elif new_lo >= _HALF:
                new_lo -= _HALF
                new_hi -= _HALF
                code -= _HALF
            elif new_lo >= _QUARTER and new_hi < _THREEQ:
                new_lo -= _QUARTER
                new_hi -= _QUARTER
                code -= _QUARTER
            else:
                break
            new_lo <<= 1
            new_hi = (new_hi << 1) | 1
            code = (code << 1) | self.src.next_bit()
            consumed += 1
        self.lo, self.hi, self.code = new_lo, new_hi, code
        self.bits_consumed += consumed
        return j, consumed

    def bernoulli(self, q: float) -> tuple[int, int]:
        """Draw a q-biased bit; returns (bit, bits_consumed_this_call)."""
        num, den = _as_fraction(q)
        if num == 0:
            return 0, 0
        if num == den:
            return 1, 0
        j, consumed = self._decode([0, num, den], den)
        return (1 if j == 0 else 0), consumed

    def uniform(self, k: int) -> tuple[int, int]:
        """Draw uniformly from {0,...,k-1}; returns (value, bits consumed)."""
        k = int(k)
        if k < 1:
            raise ValidationError(f"k must be >= 1, got {k}")
        if k == 1:
            return 0, 0
        return self._decode(list(range(k + 1)), k)


@dataclass
class RandomnessLedger:
    """Exact per-category count of uniform bits consumed and bits produced."""

    consumed_round_selection: int = 0
    consumed_spot_settings: int = 0
    consumed_post_selection: int = 0
    produced_bits: int = 0

    @property
    def total_consumed(self) -> int:
        return (
            self.consumed_round_selection
            + self.consumed_spot_settings
            + self.consumed_post_selection
        )

    def as_dict(self, rounds: int | None = None) -> dict:
        net = self.produced_bits - self.total_consumed
        out = {
            "consumed": {
                "round_selection": self.consumed_round_selection,
                "spot_settings": self.consumed_spot_settings,
                "post_selection": self.consumed_post_selection,
            },
            "produced": self.produced_bits,
            "net": net,
        }
        out["rate"] = net / rounds if rounds else None
        return out


def binary_entropy(p: float) -> float:
    """h(p) = -p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"probability {p!r} outside [0,1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def expected_output_length(n: float, q: float, N: int) -> float:
    """Expected kept-bit count for the odd-cycle protocol: 2n(1-q)c/(1+c)."""
    c = math.cos(math.pi / N)
    return 2.0 * n * (1.0 - q) * c / (1.0 + c)


def expected_input_length(n: float, q: float, N: int, p0: float, omega0: float) -> float:
    """Expected private-bit consumption n[h(q) + q log2(2N) + (1-q) p0 h(w0)] + 6."""
    return (
        n
        * (
            binary_entropy(q)
            + q * math.log2(2 * N)
            + (1.0 - q) * p0 * binary_entropy(omega0)
        )
        + 6.0
    )


def expansion_rate(
    n: float,
    q: float,
    N: int,
    parity: str = "odd",
    omega0: float | None = None,
    p0: float | None = None,
) -> float:
    """Expected net expansion per round, (m - l_in)/n.

    Defaults follow the ideal strategies: the odd case discards outcome 0
    with keep-weight cos(pi/N) against marginal 1/(1+cos(pi/N)); the even
    case has uniform marginals (1/2) and keeps everything (w0 = 1).
    Explicit ``omega0``/``p0`` let callers evaluate alternative
    even-cycle post-selection conventions.
    """
    c = math.cos(math.pi / N)
    if parity == "odd":
        if omega0 is None:
            omega0 = c
        if p0 is None:
            p0 = 1.0 / (1.0 + c)
    elif parity == "even":
        if omega0 is None:
            omega0 = 1.0
        if p0 is None:
            p0 = 0.5
    else:
        raise ValidationError(f"parity must be 'odd' or 'even', got {parity!r}")
    m = n * (1.0 - q) * (1.0 - (1.0 - omega0) * p0)
    l_in = expected_input_length(n, q, N, p0, omega0)
    return (m - l_in) / n
