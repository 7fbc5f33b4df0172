"""Finite abelian groups as invariant-factor lists."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def normalize(divisors: Iterable[int]) -> list[int]:
    """Invariant factors d1 | d2 | ... (ascending, no 1s) of a product of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for d in divisors:
        d = int(d)
        if d < 1:
            raise ValueError(f"cyclic factor orders must be positive, got {d}")
        for q, e in _factor(d).items():
            by_prime.setdefault(q, []).append(q ** e)
    if not by_prime:
        return []
    length = max(len(v) for v in by_prime.values())
    chain = [1] * length
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for i, x in enumerate(powers):
            chain[length - 1 - i] *= x
    return chain


@dataclass(frozen=True)
class FinAbelian:
    divisors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "divisors", tuple(normalize(self.divisors)))

    @property
    def order(self) -> int:
        out = 1
        for d in self.divisors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.divisors

    def to_list(self) -> list[int]:
        return list(self.divisors)


def merge(*groups: FinAbelian) -> FinAbelian:
    return FinAbelian(tuple(d for g in groups for d in g.divisors))


def split(A: FinAbelian, p: int) -> tuple[FinAbelian, FinAbelian]:
    """(A[p^inf], A^(p)): the p-primary part and its prime-to-p complement."""
    p_part, rest = [], []
    for d in A.divisors:
        pk = 1
        while d % p == 0:
            d //= p
            pk *= p
        p_part.append(pk)
        rest.append(d)
    return FinAbelian(tuple(p_part)), FinAbelian(tuple(rest))


def biquadratic_sha(n1: int, n2: int) -> FinAbelian:
    """The obstruction for a C_n1 x C_n2 extension with all decomposition groups cyclic."""
    if n1 < 1 or n2 < 1:
        raise ValueError("orders must be positive")
    return FinAbelian((gcd(n1, n2),))
