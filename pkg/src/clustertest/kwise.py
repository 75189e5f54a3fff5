"""k-wise independent coins from random polynomials over GF(2^t).

A degree-(k-1) polynomial with uniform coefficients, evaluated at distinct
field points, yields evaluations any k of which are jointly uniform (the
Vandermonde map from coefficients to k evaluations is a bijection). The walk
coins take the low 4 bits of the evaluation, so raw values live in [1, 16];
a raw value of p <= d means "move along port p", anything larger means
"stay". Mapping the overhang to Stay keeps every coin index addressable and
exactly k-wise uniform, which rejection sampling would break.
"""

from typing import NamedTuple, Optional

import numpy as np

from .errors import IdOutOfRange, InvalidK

# Primitive polynomials over GF(2), one per field width; x is a generator of
# the multiplicative group, which the exp/log tables rely on.
_PRIMITIVE_POLY = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1011011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10001101111,
    11: 0b100000000101,
    12: 0b1000011101011,
    13: 0b10000000011011,
    14: 0b100000010101001,
    15: 0b1000000000110101,
    16: 0b10000000000101101,
    17: 0b100000000000001001,
    18: 0b1000001010000000011,
    19: 0b10000000000000100111,
    20: 0b100000000011011110011,
    21: 0b1000000000000001100101,
    22: 0b10000000001111101100001,
    23: 0b100000000000000000100001,
    24: 0b1000000011110011010101001,
}

_FIELD_CACHE = {}


class GF2Field:
    """GF(2^t) arithmetic through exp/log tables."""

    def __init__(self, t):
        if t not in _PRIMITIVE_POLY:
            raise ValueError(f"no primitive polynomial stored for width {t}")
        self.t = t
        self.order = 1 << t
        poly = _PRIMITIVE_POLY[t]
        size = self.order - 1
        exp = np.zeros(2 * size, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for e in range(size):
            exp[e] = x
            log[x] = e
            x <<= 1
            if x & self.order:
                x ^= poly
        exp[size : 2 * size] = exp[:size]
        self.exp = exp
        self.log = log

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def mul_vec(self, vec, other):
        """Elementwise product of two arrays of field elements."""
        out = np.zeros_like(vec)
        nz = (vec != 0) & (other != 0)
        out[nz] = self.exp[self.log[vec[nz]] + self.log[other[nz]]]
        return out


def get_field(t) -> GF2Field:
    field = _FIELD_CACHE.get(t)
    if field is None:
        field = _FIELD_CACHE[t] = GF2Field(t)
    return field


class KWiseSource:
    """Immutable source of n_indices field values, any k jointly uniform.

    Index i is the polynomial evaluated at field point i+1; points are
    distinct and nonzero, so 2^field_log >= n_indices + 1 is required.
    """

    def __init__(self, k, n_indices, field_log, coeffs):
        if k % 2 == 0 or k > n_indices:
            raise InvalidK(f"k={k} must be odd and at most n={n_indices}")
        if (1 << field_log) < n_indices + 1:
            raise InvalidK(f"field width {field_log} too small for {n_indices} points")
        self.k = k
        self.n_indices = n_indices
        self.field_log = field_log
        self.coeffs = tuple(int(c) % (1 << field_log) for c in coeffs)
        if len(self.coeffs) != k:
            raise InvalidK(f"need exactly {k} coefficients")
        self._values = None
        self._raws = None

    def evaluate(self, index) -> int:
        """Field value at one index (Horner, O(k) field operations)."""
        if not (0 <= index < self.n_indices):
            raise IdOutOfRange(f"index {index}")
        field = get_field(self.field_log)
        x = index + 1
        acc = 0
        for c in self.coeffs:
            acc = field.mul(acc, x) ^ c
        return acc

    def values(self) -> np.ndarray:
        """All n_indices field values, computed once by a vectorized Horner pass."""
        if self._values is None:
            field = get_field(self.field_log)
            xs = np.arange(1, self.n_indices + 1, dtype=np.int64)
            acc = np.zeros(self.n_indices, dtype=np.int64)
            for c in self.coeffs:
                acc = field.mul_vec(acc, xs)
                acc ^= c
            self._values = acc
        return self._values

    def raw_coins(self) -> list:
        """1 + low 4 bits of each value, as a plain list for fast indexing."""
        if self._raws is None:
            self._raws = (1 + (self.values() & 15)).tolist()
        return self._raws


def new_kwise_source(k, n_indices, seed) -> KWiseSource:
    """Source with coefficients derived from a 64-bit seed.

    The field width is max(4, ceil(log2(n_indices + 1))): wide enough for the
    evaluation points and for the low 4 bits of a uniform element to be
    uniform over [16].
    """
    if k % 2 == 0 or k > n_indices:
        raise InvalidK(f"k={k} must be odd and at most n={n_indices}")
    t = max(4, int(n_indices).bit_length())
    if (1 << t) < n_indices + 1:
        t += 1
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    coeffs = rng.integers(0, 1 << t, size=k)
    return KWiseSource(k, n_indices, t, coeffs)


class CoinValue(NamedTuple):
    """One walk coin: move along port ``raw`` when raw <= d, else stay."""

    raw: int

    def move_port(self, d) -> Optional[int]:
        return self.raw if self.raw <= d else None


def coin(source, walk_index, step, walk_length) -> CoinValue:
    """Coin for step ``step`` of walk ``walk_index`` (both 1-based).

    Coins are addressed by the flattened index (i-1) * L + (j-1), so a walk's
    coin sequence never depends on how many other walks exist.
    """
    idx = (walk_index - 1) * walk_length + (step - 1)
    return CoinValue(1 + (source.evaluate(idx) & 15))
