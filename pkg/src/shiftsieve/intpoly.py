"""Exact truncated integer power-series arithmetic.

Series are plain lists of Python ints indexed by exponent.  Products are
exact integer convolutions; they are *evaluated* by Kronecker substitution
(pack both operands into one big integer with fixed-width slots, multiply,
unpack), which turns the convolution into a single big-integer product.
GMP does the heavy multiplication when gmpy2 is importable; otherwise
CPython's own big ints are used, with identical results.
"""

from __future__ import annotations

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpz = int


def _pack(coeffs: list[int], slot_bytes: int) -> "int":
    """Evaluate a nonnegative-coefficient polynomial at 2**(8*slot_bytes)."""
    buf = bytearray(slot_bytes * len(coeffs))
    b = slot_bytes
    for i, c in enumerate(coeffs):
        if c:
            buf[i * b : i * b + b] = c.to_bytes(b, "little")
    return _mpz(int.from_bytes(buf, "little"))


def _max_abs_bits(coeffs: list[int]) -> int:
    hi = max(coeffs, default=0)
    lo = min(coeffs, default=0)
    return max(hi, -lo).bit_length()


def mul_trunc(a: list[int], b: list[int], n: int) -> list[int]:
    """Exact product of two integer series, truncated to n coefficients.

    Slot width is sized from the coefficient magnitudes so every convolution
    sum fits with headroom for the sign bias; negative coefficients are
    handled by packing positive and negative parts separately.
    """
    if n <= 0:
        return []
    a = a[:n]
    b = b[:n]
    bits_a = _max_abs_bits(a)
    bits_b = _max_abs_bits(b)
    if bits_a == 0 or bits_b == 0:
        return [0] * n
    slot_bits = bits_a + bits_b + min(len(a), len(b)).bit_length() + 2
    slot_bytes = (slot_bits + 7) // 8
    pa = _pack([c if c > 0 else 0 for c in a], slot_bytes)
    na = _pack([-c if c < 0 else 0 for c in a], slot_bytes)
    pb = _pack([c if c > 0 else 0 for c in b], slot_bytes)
    nb = _pack([-c if c < 0 else 0 for c in b], slot_bytes)
    prod = (pa - na) * (pb - nb)

    # Bias every slot of the full (untruncated) product by 2**(slot_bits'-1)
    # so the packed value is slotwise nonnegative; negative tail slots would
    # otherwise borrow into the range being unpacked.
    full = len(a) + len(b) - 1
    bias = 1 << (8 * slot_bytes - 1)
    prod = int(prod + bias * _pack([1] * full, slot_bytes))
    if prod < 0:
        raise OverflowError("slot width underestimated in series product")
    nbytes = max(slot_bytes * full + slot_bytes, (prod.bit_length() + 7) // 8)
    raw = prod.to_bytes(nbytes, "little")
    sb = slot_bytes
    out = [
        int.from_bytes(raw[i * sb : (i + 1) * sb], "little") - bias
        for i in range(min(n, full))
    ]
    out.extend([0] * (n - len(out)))
    return out


def mul_trunc_schoolbook(a: list[int], b: list[int], n: int) -> list[int]:
    """Direct O(len(a)*len(b)) convolution; reference path for tests."""
    out = [0] * n
    for i, ca in enumerate(a[:n]):
        if not ca:
            continue
        for j, cb in enumerate(b[: n - i]):
            if cb:
                out[i + j] += ca * cb
    return out


def square_trunc(a: list[int], n: int) -> list[int]:
    return mul_trunc(a, a, n)


def pow_trunc(a: list[int], e: int, n: int) -> list[int]:
    """a**e truncated to n coefficients, by binary powering."""
    if e < 0:
        raise ValueError("negative exponent")
    result = [1] + [0] * (n - 1)
    base = a[:n]
    while e:
        if e & 1:
            result = mul_trunc(result, base, n)
        e >>= 1
        if e:
            base = square_trunc(base, n)
    return result
