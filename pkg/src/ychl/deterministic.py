"""Bit-exact linear-shift deterministic Y-channel.

Words are stored most-significant bit first: index 0 is the top bit, the one
that survives every link.  The relay-level enumeration used by the scheme is
only applied at the boundary:

* uplink level ``l`` (1 = lowest, seen by every user) sits at index ``q - l``;
* downlink level ``l`` (1 = highest, seen by every user) sits at index ``l - 1``.

With this enumeration user ``j`` reaches uplink levels ``1..n_j`` and sees
downlink levels ``1..n_j``.  All functions accept a single word (shape
``(q,)``) or a batch of words (shape ``(..., q)``) and never mutate inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

USERS = (1, 2, 3)


@dataclass(frozen=True)
class DycParams:
    """Levels ``n1 >= n2 >= n3 >= 0`` of a deterministic Y-channel."""

    n1: int
    n2: int
    n3: int

    def __post_init__(self):
        for name in ("n1", "n2", "n3"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 0:
                raise ValueError(f"{name} must be non-negative, got {value}")
            object.__setattr__(self, name, int(value))
        if not self.n1 >= self.n2 >= self.n3:
            raise ValueError(
                f"levels must satisfy n1 >= n2 >= n3, got ({self.n1},{self.n2},{self.n3})"
            )

    @property
    def q(self) -> int:
        return self.n1

    @property
    def levels(self) -> tuple[int, int, int]:
        return (self.n1, self.n2, self.n3)

    def level(self, user: int) -> int:
        _check_user(user)
        return self.levels[user - 1]

    def scaled(self, factor: int) -> "DycParams":
        return DycParams(factor * self.n1, factor * self.n2, factor * self.n3)

    def __str__(self) -> str:
        return f"DYC({self.n1},{self.n2},{self.n3})"


def _check_user(user: int) -> None:
    if user not in USERS:
        raise ValueError(f"user must be 1, 2 or 3, got {user!r}")


def as_word(bits, q: int | None = None) -> np.ndarray:
    """Coerce ``bits`` (0/1 sequence, array or ``"0101"`` string) to a uint8 array."""
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValueError(f"word string may only contain 0 and 1: {bits!r}")
        arr = np.fromiter((int(c) for c in bits), dtype=np.uint8, count=len(bits))
    else:
        arr = np.asarray(bits)
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("word entries must be 0 or 1")
        arr = arr.astype(np.uint8, copy=False)
    if arr.ndim == 0:
        raise ValueError("a word needs at least one axis")
    if q is not None and arr.shape[-1] != q:
        raise ValueError(f"word length {arr.shape[-1]} does not match q={q}")
    return arr


def format_word(word) -> str:
    """Serialize a single word as a 0/1 string, MSB first."""
    return "".join(str(int(b)) for b in np.asarray(word).ravel())


def down_shift(word: np.ndarray, shift: int) -> np.ndarray:
    """Apply ``S^shift``: move every bit ``shift`` positions towards the LSB end."""
    q = word.shape[-1]
    if shift < 0 or shift > q:
        raise ValueError(f"shift {shift} outside 0..{q}")
    out = np.zeros_like(word)
    if shift < q:
        out[..., shift:] = word[..., : q - shift]
    return out


def uplink_receive(params: DycParams, x1, x2, x3) -> np.ndarray:
    """Relay observation ``y_r = S^{q-n1} x1 + S^{q-n2} x2 + S^{q-n3} x3`` over GF(2).

    Bit ``p`` (MSB-first) of user ``j`` lands at ``p + q - n_j``; the result is
    MSB first, so uplink level ``l`` of the result is entry ``q - l``.
    """
    q = params.q
    words = [as_word(x, q) for x in (x1, x2, x3)]
    y = np.zeros(np.broadcast_shapes(*(w.shape for w in words)), dtype=np.uint8)
    for n_j, w in zip(params.levels, words):
        y ^= down_shift(w, q - n_j)
    return y


def downlink_receive(params: DycParams, x_r, user: int) -> np.ndarray:
    """Observation ``y_j = S^{q-n_j} x_r`` of ``user``: the top ``n_j`` relay bits, shifted down."""
    _check_user(user)
    q = params.q
    return down_shift(as_word(x_r, q), q - params.level(user))


def read_downlink_level(params: DycParams, y_user: np.ndarray, user: int, level: int) -> np.ndarray | None:
    """Bit(s) of downlink ``level`` as they appear in ``user``'s observation, or None if clipped."""
    n = params.level(user)
    if not 1 <= level <= n:
        return None
    return y_user[..., level - 1 + params.q - n]


def uplink_index(q: int, level: int) -> int:
    if not 1 <= level <= q:
        raise ValueError(f"uplink level {level} outside 1..{q}")
    return q - level


def downlink_index(q: int, level: int) -> int:
    if not 1 <= level <= q:
        raise ValueError(f"downlink level {level} outside 1..{q}")
    return level - 1


def transmit_position(params: DycParams, user: int, uplink_level: int) -> int | None:
    """Index in ``user``'s transmit word that lands on ``uplink_level``; None if unreachable."""
    n = params.level(user)
    if not 1 <= uplink_level <= n:
        return None
    return n - uplink_level


@dataclass(frozen=True)
class RelayMap:
    """Partial injective routing from uplink levels to downlink levels.

    Both sides use the relay-level enumeration described in the module
    docstring.  Uplink levels missing from ``mapping`` are dropped and every
    downlink level that nothing maps to carries 0.
    """

    q: int
    mapping: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        mapping = {int(k): int(v) for k, v in dict(self.mapping).items()}
        for up, down in mapping.items():
            if not 1 <= up <= self.q:
                raise ValueError(f"uplink level {up} outside 1..{self.q}")
            if not 1 <= down <= self.q:
                raise ValueError(f"downlink level {down} outside 1..{self.q}")
        if len(set(mapping.values())) != len(mapping):
            raise ValueError("relay map must be injective")
        object.__setattr__(self, "mapping", dict(sorted(mapping.items())))

    @classmethod
    def identity(cls, q: int) -> "RelayMap":
        """Map that leaves every relay bit where it is (uplink l -> downlink q+1-l)."""
        return cls(q, {level: q + 1 - level for level in range(1, q + 1)})

    @classmethod
    def from_pairs(cls, q: int, pairs: Sequence[Sequence[int]]) -> "RelayMap":
        return cls(q, {int(a): int(b) for a, b in pairs})

    def pairs(self) -> list[list[int]]:
        return [[up, down] for up, down in self.mapping.items()]

    def matrix(self) -> np.ndarray:
        """0/1 matrix ``M`` with ``x_r = M y_r`` for MSB-first vectors."""
        m = np.zeros((self.q, self.q), dtype=np.uint8)
        for up, down in self.mapping.items():
            m[downlink_index(self.q, down), uplink_index(self.q, up)] = 1
        return m


def apply_relay_map(relay_map: RelayMap, y_r) -> np.ndarray:
    """Route the relay observation to its transmit word according to ``relay_map``."""
    q = relay_map.q
    y = as_word(y_r, q)
    x = np.zeros_like(y)
    for up, down in relay_map.mapping.items():
        x[..., downlink_index(q, down)] = y[..., uplink_index(q, up)]
    return x
