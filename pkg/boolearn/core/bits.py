"""Bit packing into 64-bit machine words.

Bit ``c`` of a packed vector lives in word ``c // 64`` at position ``c % 64``.
"""

import numpy as np

WORD_BITS = 64
ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)
_SHIFTS = np.arange(WORD_BITS, dtype=np.uint64)


def num_words(num_bits: int) -> int:
    """Words needed to hold ``num_bits`` bits."""
    return (num_bits + WORD_BITS - 1) // WORD_BITS


def pack_bits(matrix: np.ndarray) -> np.ndarray:
    """Pack a (rows, bits) boolean matrix into (rows, words) uint64."""
    matrix = np.asarray(matrix, dtype=bool)
    if matrix.ndim == 1:
        return pack_bits(matrix[None, :])[0]
    rows, bits = matrix.shape
    words = max(1, num_words(bits))
    padded = np.zeros((rows, words * WORD_BITS), dtype=np.uint64)
    padded[:, :bits] = matrix
    padded = padded.reshape(rows, words, WORD_BITS) << _SHIFTS
    return np.bitwise_or.reduce(padded, axis=2)


def unpack_bits(words: np.ndarray, num_bits: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`."""
    words = np.asarray(words, dtype=np.uint64)
    if words.ndim == 1:
        return unpack_bits(words[None, :], num_bits)[0]
    expanded = (words[:, :, None] >> _SHIFTS) & np.uint64(1)
    return expanded.reshape(words.shape[0], -1)[:, :num_bits].astype(bool)


def tail_mask(num_bits: int) -> np.ndarray:
    """Word mask with ones on the first ``num_bits`` positions."""
    mask = np.full(num_words(num_bits), ALL_ONES, dtype=np.uint64)
    rem = num_bits % WORD_BITS
    if rem:
        mask[-1] = np.uint64((1 << rem) - 1)
    return mask


def popcount(words: np.ndarray, axis=None):
    """Number of set bits, summed over ``axis`` (everything when None)."""
    return np.bitwise_count(np.asarray(words, dtype=np.uint64)).sum(axis=axis, dtype=np.int64)


def random_words(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniform random uint64 words of the given shape."""
    return rng.integers(0, np.iinfo(np.uint64).max, size=shape, dtype=np.uint64, endpoint=True)
