"""Finite abelian group structure from a black-box group law.

The class group code hands us hashable canonical elements and a multiplication;
we rebuild each Sylow subgroup by closure and read off its partition from the
sizes of the p^j-torsion layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from ..arith import factor
from ..errors import InvalidInputError


@dataclass(frozen=True)
class ClassGroup:
    D: int
    h: int
    divisors: tuple[int, ...]
    kind: str = "wide"
    sylow: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "divisors", tuple(int(d) for d in self.divisors))
        if math.prod(self.divisors) != self.h:
            raise InvalidInputError(f"divisors {self.divisors} do not multiply to h={self.h}")
        for lo, hi in zip(self.divisors, self.divisors[1:]):
            if hi % lo:
                raise InvalidInputError(f"divisors {self.divisors} are not a divisibility chain")
        if any(d < 2 for d in self.divisors):
            raise InvalidInputError("elementary divisors must be >= 2")
        if self.kind not in ("wide", "narrow"):
            raise InvalidInputError(f"kind must be wide or narrow, not {self.kind!r}")

    @property
    def exponent(self) -> int:
        return self.divisors[-1] if self.divisors else 1

    def torsion(self, ell: int) -> int:
        return torsion_size(self, ell)

    def sylow_partition(self, p: int) -> tuple[int, ...]:
        """Partition lambda with Sylow_p = sum Z/p^lambda_i, largest part first."""
        parts = []
        for d in reversed(self.divisors):
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            if e:
                parts.append(e)
        return tuple(parts)


def torsion_size(g: ClassGroup, ell: int) -> int:
    """|Cl[ell]| = prod gcd(d_i, ell)."""
    if ell < 1:
        raise InvalidInputError("ell must be >= 1")
    out = 1
    for d in g.divisors:
        out *= math.gcd(d, ell)
    return out


def two_rank_doubled(g: ClassGroup) -> int:
    """2-rank of the subgroup 2*Cl, i.e. the number of divisors divisible by 4."""
    return sum(1 for d in g.divisors if d % 4 == 0)


def elementary_divisors(partitions: dict[int, Sequence[int]]) -> tuple[int, ...]:
    """Combine Sylow partitions {p: (l1 >= l2 >= ...)} into d_1 | d_2 | ... | d_t."""
    t = max((len(v) for v in partitions.values()), default=0)
    divs = []
    for i in range(t):
        d = 1
        for p, parts in partitions.items():
            if i < len(parts):
                d *= p ** parts[i]
        divs.append(d)
    return tuple(reversed(divs))


def group_power(x, n: int, mul: Callable, one):
    result = one
    while n:
        if n & 1:
            result = mul(result, x)
        n >>= 1
        if n:
            x = mul(x, x)
    return result


def partition_from_layers(layer_sizes: Sequence[int], p: int) -> tuple[int, ...]:
    """layer_sizes[j] = |G[p^j]| for j = 0, 1, ...; returns the partition of G."""
    logs = [round(math.log(s, p)) for s in layer_sizes]
    for s, e in zip(layer_sizes, logs):
        if p**e != s:
            raise ArithmeticError(f"layer size {s} is not a power of {p}")
    # number of parts >= j is log|G[p^j]| - log|G[p^(j-1)]|
    at_least = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
    at_least = [c for c in at_least if c > 0]
    if not at_least:
        return ()
    return tuple(sum(1 for c in at_least if c > i) for i in range(at_least[0]))


def p_group_partition(elements: Iterable[Hashable], mul: Callable, one, p: int) -> tuple[int, ...]:
    elements = list(elements)
    to_p = {x: group_power(x, p, mul, one) for x in elements}
    level: dict = {one: 0}

    def lev(x):
        chain = []
        while x not in level:
            chain.append(x)
            x = to_p[x]
        v = level[x]
        for y in reversed(chain):
            v += 1
            level[y] = v
        return level[chain[0]] if chain else v

    counts: dict[int, int] = {}
    for x in elements:
        k = lev(x)
        counts[k] = counts.get(k, 0) + 1
    top = max(counts)
    layers, running = [], 0
    for j in range(top + 1):
        running += counts.get(j, 0)
        layers.append(running)
    return partition_from_layers(layers, p)


def sylow_closure(candidates: Iterable, mul: Callable, one, h: int, p: int, e: int) -> set:
    """Elements of the Sylow p-subgroup (order p^e) generated by the p-parts of candidates."""
    target = p**e
    cofactor = h // target
    group = {one}
    for g in candidates:
        if len(group) == target:
            break
        y = group_power(g, cofactor, mul, one)
        if y in group:
            continue
        cosets = [group]
        z = y
        while z not in group:
            cosets.append({mul(x, z) for x in group})
            z = mul(z, y)
        group = set().union(*cosets)
    if len(group) != target:
        raise ArithmeticError(f"candidates generate only {len(group)} of {target} Sylow-{p} elements")
    return group


def abelian_structure(h: int, candidates: Callable[[], Iterable], mul: Callable, one):
    """(elementary divisors, {p: partition}) of an abelian group of known order h.

    ``candidates()`` must return a fresh iterable of elements that generates the group.
    """
    partitions: dict[int, tuple[int, ...]] = {}
    if h > 1:
        for p, e in factor(h):
            if e == 1:
                partitions[p] = (1,)
                continue
            elems = sylow_closure(candidates(), mul, one, h, p, e)
            partitions[p] = p_group_partition(elems, mul, one, p)
    return elementary_divisors(partitions), partitions
