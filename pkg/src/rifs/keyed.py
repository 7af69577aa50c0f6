"""Deterministic keyed randomness for word-indexed sampling.

Every random draw in this package is a pure function of ``(seed, word,
draw index)``.  The construction is a chained splitmix64 absorption:

* ``root_state(seed)`` mixes the 64-bit realization seed into a chain state;
* ``absorb(state, symbol)`` extends the chain by one word symbol, so the
  state for a word is the left fold of its symbols (structurally injective:
  two distinct words trace distinct absorption sequences);
* draw ``i`` for a word is ``mix64(state + (i + 1) * GAMMA)``: a
  counter-based generator keyed by the word's chain state, giving as many
  independent variates per word as the samplers need.

splitmix64's finalizer is a bijection on ``uint64`` with strong avalanche;
used counter-style it passes standard uniformity batteries.  Distinct words
can still collide in the 64-bit state with probability ``~ N^2 / 2^64``
(about 5e-6 at the 1e7-word budget), which we accept and document.  Chain
states are computed with numpy ``uint64`` arrays throughout, so whole tree
levels are keyed in a handful of vectorized passes.

Reproducibility is stream-level across platforms; bit-level within one
platform (transcendental functions downstream may vary in the last ulp
across libm implementations).
"""

from __future__ import annotations

import numpy as np

# splitmix64 round constants (Steele, Lea & Flood) and the golden-gamma
# increment; SALT separates realization roots from other derived streams.
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SALT_ROOT = np.uint64(0x243F6A8885A308D3)
_SALT_CHILD = np.uint64(0x13198A2E03707344)
_SYMBOL_STEP = np.uint64(0xD1342543DE82EF95)

_U64_MAX = 0xFFFFFFFFFFFFFFFF
_INV_2_53 = 2.0 ** -53


def _mix64_inplace(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer mutating a fresh uint64 array (two buffers total)."""
    t = z >> np.uint64(30)
    z ^= t
    z *= _M1
    np.right_shift(z, np.uint64(27), out=t)
    z ^= t
    z *= _M2
    np.right_shift(z, np.uint64(31), out=t)
    z ^= t
    return z


def mix64(x: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, elementwise over a uint64 array."""
    return _mix64_inplace(x.astype(np.uint64, copy=True))


def root_state(seed: int) -> np.ndarray:
    """Chain state of the empty word for a 64-bit realization seed."""
    if not (0 <= int(seed) <= _U64_MAX):
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return mix64(np.array([seed], dtype=np.uint64) ^ _SALT_ROOT)


def absorb(states: np.ndarray, symbols) -> np.ndarray:
    """Extend chain states by one symbol each (vectorized).

    ``symbols`` may be a scalar or an array broadcastable against ``states``.
    """
    sym = np.asarray(symbols)
    if sym.dtype != np.uint64:
        sym = sym.astype(np.uint64)
    return _mix64_inplace(states ^ (sym * _SYMBOL_STEP))


def absorb_children(states: np.ndarray, n_symbols: int) -> np.ndarray:
    """Chain states of every one-symbol extension, parent-major symbol-minor.

    Equivalent to ``absorb(repeat(states, A), tile(1..A, len(states)))`` in a
    single broadcasted pass; shape ``(len(states) * n_symbols,)``.
    """
    pre = np.arange(1, n_symbols + 1, dtype=np.uint64) * _SYMBOL_STEP
    return _mix64_inplace((states[:, None] ^ pre[None, :]).reshape(-1))


def word_state(seed: int, word) -> np.ndarray:
    """Chain state for a single word, as a 1-element uint64 array."""
    state = root_state(seed)
    for s in word:
        state = absorb(state, s)
    return state


def draw(states: np.ndarray, index: int) -> np.ndarray:
    """Counter-indexed raw uint64 output for each chain state."""
    step = np.array([index + 1], dtype=np.uint64) * GAMMA
    return _mix64_inplace(states + step)


def to_u01(raw: np.ndarray) -> np.ndarray:
    """Map raw 64-bit outputs to floats strictly inside (0, 1)."""
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _INV_2_53


def draw_u01(states: np.ndarray, index: int) -> np.ndarray:
    """Uniform (0,1) variate ``index`` for each chain state."""
    return to_u01(draw(states, index))


def draw_u01_block(states: np.ndarray, start: int, count: int) -> np.ndarray:
    """Uniform (0,1) variates ``start .. start+count-1``, shape (len, count)."""
    idx = (np.arange(start + 1, start + count + 1, dtype=np.uint64) * GAMMA)
    return to_u01(_mix64_inplace(states[:, None] + idx[None, :]))


def stream_u01(seed: int, count: int, lane: int = 0) -> np.ndarray:
    """``count`` iid uniforms from an anonymous stream (Monte Carlo use)."""
    lane_arr = np.array([lane], dtype=np.uint64) * _SYMBOL_STEP
    base = mix64(root_state(int(seed)) ^ lane_arr)
    idx = np.arange(1, count + 1, dtype=np.uint64) * GAMMA
    return to_u01(_mix64_inplace(base + idx))


def derive_seed(master_seed: int, index: int) -> int:
    """Deterministic child seed (e.g. one per Monte Carlo replicate)."""
    idx = np.array([index], dtype=np.uint64) * GAMMA
    s = mix64((np.array([master_seed], dtype=np.uint64) ^ _SALT_CHILD) + idx)
    return int(s[0])
