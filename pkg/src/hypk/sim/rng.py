"""Counter-based random streams, one per simulated path.

Each path ``i`` owns a SplitMix64 stream whose initial state is derived from
``(seed, i)`` alone, so a path's draws do not depend on how paths are
scheduled across threads.  Normals come from Box-Muller pairs; both backends
consume the streams in the same order.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
TWO_PI = 2.0 * np.pi
INV_2_53 = 2.0 ** -53

_S30, _S27, _S31, _S11 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(11)


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> _S30)) * MIX1
    z = (z ^ (z >> _S27)) * MIX2
    return z ^ (z >> _S31)


def path_seeds(seed: int, n_paths: int, first: int = 0) -> np.ndarray:
    """Initial stream states for paths ``first .. first + n_paths - 1``."""
    if not (0 <= int(seed) < 2 ** 64):
        raise ValueError("seed must be a 64-bit unsigned integer")
    idx = np.arange(first, first + n_paths, dtype=np.uint64)
    return mix64(np.uint64(int(seed)) ^ mix64(idx + GOLDEN))


def next_u64(state: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Advance every stream by one draw; returns ``(new_state, output)``."""
    state = state + GOLDEN
    return state, mix64(state)


def normal_pair(state: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Two independent standard normals per stream by Box-Muller."""
    state, z1 = next_u64(state)
    state, z2 = next_u64(state)
    u1 = ((z1 >> _S11).astype(np.float64) + 1.0) * INV_2_53  # in (0, 1]
    u2 = (z2 >> _S11).astype(np.float64) * INV_2_53
    r = np.sqrt(-2.0 * np.log(u1))
    return state, r * np.cos(TWO_PI * u2), r * np.sin(TWO_PI * u2)


def normals(state: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """``k`` normals per stream from ``ceil(k/2)`` pairs; a spare is discarded.

    Returns ``(new_state, z)`` with ``z`` of shape ``(len(state), k)``.
    """
    npairs = (k + 1) // 2
    z = np.empty((state.size, 2 * npairs))
    for j in range(npairs):
        state, a, b = normal_pair(state)
        z[:, 2 * j] = a
        z[:, 2 * j + 1] = b
    return state, z[:, :k]
