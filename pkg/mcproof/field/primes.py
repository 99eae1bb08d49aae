from __future__ import annotations

from sympy import isprime, nextprime


def smallest_prime_geq(m: int) -> int:
    """Least prime p >= m (Bertrand: p < 2m for m >= 2)."""
    if m < 1:
        raise ValueError(f"prime search needs m >= 1, got {m}")
    if isprime(m):
        return m
    return int(nextprime(m))


def is_prime(n: int) -> bool:
    return bool(isprime(n))
