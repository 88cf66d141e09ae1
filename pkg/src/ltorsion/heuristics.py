"""Predicted constants: subspace counts, Cohen-Lenstra densities, Malle exponents."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .arith import is_prime
from .errors import InvalidInputError, ResourceLimitError

DEFAULT_CLOSURE_CAP = 10**6


def gaussian_binomial(k: int, j: int, ell: int) -> int:
    if not 0 <= j <= k:
        raise InvalidInputError(f"need 0 <= j <= k, got j={j}, k={k}")
    if ell < 2:
        raise InvalidInputError("ell must be >= 2")
    num = den = 1
    for i in range(j):
        num *= ell ** (k - i) - 1
        den *= ell ** (j - i) - 1
    return num // den


def subspace_count(ell: int, k: int) -> int:
    """Number of subspaces of (Z/ell)^k."""
    if not is_prime(ell):
        raise InvalidInputError("ell must be prime")
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    return sum(gaussian_binomial(k, j, ell) for j in range(k + 1))


@dataclass(frozen=True)
class AbelianPGroup:
    p: int
    partition: tuple[int, ...] = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidInputError(f"{self.p} is not prime")
        parts = tuple(int(x) for x in self.partition)
        if any(x < 1 for x in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise InvalidInputError(f"partition {parts} must be nonincreasing and positive")
        object.__setattr__(self, "partition", parts)

    @property
    def order(self) -> int:
        return self.p ** sum(self.partition)

    @property
    def rank(self) -> int:
        return len(self.partition)


def aut_order(G: AbelianPGroup) -> int:
    """|Aut(sum Z/p^e_i)| by the closed form of Hillar and Rhea."""
    p = G.p
    e = sorted(G.partition)
    n = len(e)
    # 1-based d_k = last index with e_l = e_k, c_k = first such index
    d = [max(l + 1 for l in range(n) if e[l] == e[k]) for k in range(n)]
    c = [min(l + 1 for l in range(n) if e[l] == e[k]) for k in range(n)]
    out = 1
    for k in range(n):
        out *= p ** d[k] - p**k
    for j in range(n):
        out *= p ** (e[j] * (n - d[j]))
    for i in range(n):
        out *= p ** ((e[i] - 1) * (n - c[i] + 1))
    return out


def partitions(total: int, largest: int | None = None) -> Iterable[tuple[int, ...]]:
    """Nonincreasing partitions of total."""
    if largest is None:
        largest = total
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in partitions(total - first, first):
            yield (first,) + rest


@dataclass(frozen=True)
class DensityInterval:
    lower: Fraction
    upper: Fraction

    def __contains__(self, x) -> bool:
        return self.lower <= Fraction(x) <= self.upper

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def decimal(self, places: int = 12) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = places + 10
            q = self.midpoint
            return (Decimal(q.numerator) / Decimal(q.denominator)).quantize(Decimal(10) ** -places)

    def width(self) -> Fraction:
        return self.upper - self.lower


def euler_product(p: int, tolerance) -> DensityInterval:
    """Enclosure of prod_{i >= 1} (1 - p^-i)."""
    tol = Fraction(tolerance)
    if tol <= 0:
        raise InvalidInputError("tolerance must be positive")
    prod = Fraction(1)
    N = 0
    # remaining factors lie in [1 - p^-N/(p-1), 1]
    while True:
        N += 1
        prod *= 1 - Fraction(1, p**N)
        tail = Fraction(1, (p - 1) * p**N)
        if tail < tol:
            return DensityInterval(prod * (1 - tail), prod)


def cl_density_prediction(G: AbelianPGroup, tolerance=Fraction(1, 10**12)) -> DensityInterval:
    """Predicted proportion of imaginary fields whose Sylow p-subgroup is G."""
    eta = euler_product(G.p, tolerance)
    a = aut_order(G)
    return DensityInterval(eta.lower / a, eta.upper / a)


# ---- permutation groups -------------------------------------------------

Perm = tuple[int, ...]


def perm_from_cycles(n: int, text: str) -> Perm:
    """Parse cycle notation on 1..n, e.g. '(1,2,3)(4 5)'; '()' is the identity."""
    img = list(range(n))
    for cyc in re.findall(r"\(([^()]*)\)", text):
        pts = [int(x) - 1 for x in re.split(r"[,\s]+", cyc.strip()) if x]
        for x in pts:
            if not 0 <= x < n:
                raise InvalidInputError(f"point {x + 1} outside 1..{n}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    if sorted(img) != list(range(n)):
        raise InvalidInputError(f"{text!r} is not a permutation")
    return tuple(img)


def _mul(g: Perm, h: Perm) -> Perm:
    """Apply g then h."""
    return tuple(h[x] for x in g)


def _inv(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def malle_index(g: Sequence[int]) -> int:
    """Degree minus the number of cycles (fixed points included)."""
    n = len(g)
    seen = [False] * n
    orbits = 0
    for i in range(n):
        if not seen[i]:
            orbits += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = g[j]
    return n - orbits


def cycle_type(g: Perm) -> tuple[int, ...]:
    n = len(g)
    seen = [False] * n
    lens = []
    for i in range(n):
        if not seen[i]:
            L, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = g[j]
                L += 1
            lens.append(L)
    return tuple(sorted(lens, reverse=True))


@dataclass
class PermGroupSpec:
    n: int
    generators: list[Perm]
    cap: int = DEFAULT_CLOSURE_CAP
    _elements: list[Perm] | None = field(default=None, repr=False)
    _classes: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if isinstance(g, str):
                g = perm_from_cycles(self.n, g)
            g = tuple(int(x) for x in g)
            if len(g) != self.n or sorted(g) != list(range(self.n)):
                raise InvalidInputError(f"{g} is not a permutation of degree {self.n}")
            gens.append(g)
        self.generators = gens

    @property
    def identity(self) -> Perm:
        return tuple(range(self.n))

    def elements(self) -> list[Perm]:
        if self._elements is None:
            seen = {self.identity}
            queue = deque([self.identity])
            while queue:
                x = queue.popleft()
                for g in self.generators:
                    y = _mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        if len(seen) > self.cap:
                            raise ResourceLimitError(f"group closure exceeds cap {self.cap}")
                        queue.append(y)
            self._elements = sorted(seen)
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements())

    def is_transitive(self) -> bool:
        orbit = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for g in self.generators:
                if g[x] not in orbit:
                    orbit.add(g[x])
                    stack.append(g[x])
        return len(orbit) == self.n

    def conjugacy_classes(self) -> dict[str, list[Perm]]:
        """Nontrivial classes keyed by cycle-type label, '#a', '#b' appended on clashes."""
        if self._classes is None:
            remaining = set(self.elements())
            remaining.discard(self.identity)
            found = []
            inv_gens = [_inv(g) for g in self.generators]
            for x in self.elements():
                if x not in remaining:
                    continue
                cls = {x}
                stack = [x]
                while stack:
                    y = stack.pop()
                    for g, gi in zip(self.generators, inv_gens):
                        z = _mul(_mul(gi, y), g)
                        if z not in cls:
                            cls.add(z)
                            stack.append(z)
                remaining -= cls
                found.append(sorted(cls))
            by_type: dict[str, list[list[Perm]]] = {}
            for cls in found:
                label = ".".join(str(c) for c in cycle_type(cls[0]))
                by_type.setdefault(label, []).append(cls)
            out = {}
            for label, group in sorted(by_type.items()):
                group.sort(key=lambda c: c[0])
                if len(group) == 1:
                    out[label] = group[0]
                else:
                    for i, cls in enumerate(group):
                        out[f"{label}#{chr(ord('a') + i)}"] = cls
            self._classes = out
        return self._classes


def malle_exponent(G: PermGroupSpec) -> Fraction:
    """1 / min ind(g) over nontrivial g."""
    if not G.is_transitive():
        raise InvalidInputError("group is not transitive")
    best = min((malle_index(g) for g in G.elements() if g != G.identity), default=None)
    if best is None:
        raise InvalidInputError("trivial group has no Malle exponent")
    return Fraction(1, best)


@dataclass(frozen=True)
class ClassFunction:
    values: Mapping[str, int]
    group_order: int | None = None

    def __post_init__(self):
        vals = {str(k): int(v) for k, v in self.values.items()}
        for k, v in vals.items():
            if v < 0:
                raise InvalidInputError(f"class function value for {k} is negative")
        object.__setattr__(self, "values", vals)

    def __call__(self, label: str) -> int:
        try:
            return self.values[label]
        except KeyError:
            raise InvalidInputError(f"class function has no value for class {label!r}") from None

    @classmethod
    def constant(cls, G: PermGroupSpec, value: int = 1) -> "ClassFunction":
        return cls({label: value for label in G.conjugacy_classes()}, G.order)

    @classmethod
    def index(cls, G: PermGroupSpec) -> "ClassFunction":
        return cls({label: malle_index(c[0]) for label, c in G.conjugacy_classes().items()}, G.order)

    @classmethod
    def from_file(cls, path, group_order: int | None = None) -> "ClassFunction":
        values = {}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            # labels may carry '#a' suffixes, so only whole-line comments are allowed
            line = raw.strip()
            if line.startswith("#"):
                continue
            if not line:
                continue
            if "=" not in line:
                raise InvalidInputError(f"{path}:{lineno}: expected label=value")
            key, val = (s.strip() for s in line.split("=", 1))
            try:
                values[key] = int(val)
            except ValueError:
                raise InvalidInputError(f"{path}:{lineno}: value {val!r} is not an integer") from None
        return cls(values, group_order)


def generalized_malle_exponent(G: PermGroupSpec, f: ClassFunction) -> Fraction:
    """max over nontrivial classes c of 1/f(c)."""
    best = None
    for label in G.conjugacy_classes():
        v = f(label)
        if v == 0:
            raise InvalidInputError(f"class function vanishes on nontrivial class {label}")
        q = Fraction(1, v)
        best = q if best is None or q > best else best
    if best is None:
        raise InvalidInputError("trivial group has no nontrivial classes")
    return best


def f_discriminant(profile: Iterable[tuple[int, str]], f: ClassFunction, group_order: int | None = None) -> int:
    """prod p^f(c_p) over a ramification profile of distinct tame primes."""
    order = group_order if group_order is not None else f.group_order
    seen = set()
    out = 1
    for p, label in profile:
        if not is_prime(p):
            raise InvalidInputError(f"{p} is not prime")
        if p in seen:
            raise InvalidInputError(f"prime {p} repeated in profile")
        if order is not None and order % p == 0:
            raise InvalidInputError(f"prime {p} divides the group order {order}")
        seen.add(p)
        v = f(label)
        if v == 0:
            raise InvalidInputError(f"class function vanishes on nontrivial class {label}")
        out *= p**v
    return out
