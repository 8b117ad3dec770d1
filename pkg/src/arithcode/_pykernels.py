"""NumPy implementation of the Monte Carlo kernels.

Must stay bit-for-bit identical to ``_ckernels.pyx``: the same splitmix64
mixing, the same integer threshold test for bits, and the same floating
point update ``s = x + q * (y - x)``.
"""

import numpy as np

BACKEND = "numpy"

_M64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
TRIAL_GAMMA = 0xD1B54A32D192ED03
_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))

# rows per block; bounds the (trials, n) uint64 scratch array
_BLOCK = 4096


def mix64(z: int) -> int:
    z &= _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def stream_key(seed: int, stream: int) -> int:
    return mix64((seed + (stream + 1) * GAMMA) & _M64)


def _mix_array(z):
    z = (z ^ (z >> _S30)) * _C1
    z = (z ^ (z >> _S27)) * _C2
    return z ^ (z >> _S31)


def _block_bits(key: int, trial_start: int, trials: int, n: int, threshold: int):
    t = np.arange(trial_start + 1, trial_start + trials + 1, dtype=np.uint64)
    tk = _mix_array(np.uint64(key) + t * np.uint64(TRIAL_GAMMA))
    j = np.arange(1, n + 1, dtype=np.uint64) * np.uint64(GAMMA)
    words = _mix_array(tk[:, None] + j[None, :])
    return (words >> _S11) < np.uint64(threshold)


def message_bits(key: int, trial_start: int, trials: int, n: int, threshold: int):
    """``(trials, n)`` uint8 array; bit ``j`` of trial ``t`` depends only on ``(key, t, j)``."""
    out = np.empty((trials, n), dtype=np.uint8)
    for b in range(0, trials, _BLOCK):
        m = min(_BLOCK, trials - b)
        out[b : b + m] = _block_bits(key, trial_start + b, m, n, threshold)
    return out


def encode_float(key: int, trial_start: int, trials: int, n: int, threshold: int, q: float):
    """Generate messages and run the float coder; returns the final ``(x, y)`` arrays."""
    xs = np.empty(trials)
    ys = np.empty(trials)
    qf = np.float64(q)
    for b in range(0, trials, _BLOCK):
        m = min(_BLOCK, trials - b)
        bits = _block_bits(key, trial_start + b, m, n, threshold)
        x = np.zeros(m)
        y = np.ones(m)
        for col in bits.T:
            s = x + qf * (y - x)
            x = np.where(col, s, x)
            y = np.where(col, y, s)
        xs[b : b + m] = x
        ys[b : b + m] = y
    return xs, ys
