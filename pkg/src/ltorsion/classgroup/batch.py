"""Class numbers and class groups across a whole family of discriminants."""

from __future__ import annotations

import numpy as np

from ..arith import _sign_value, fundamental_mask, is_fundamental_discriminant
from ..errors import InvalidInputError
from .._parallel import map_chunks
from .imaginary import class_group_imaginary, imaginary_class_numbers
from .real import NarrowGroup, class_group_real
from .structure import ClassGroup


def class_number_batch(X: int, sign) -> dict[int, int]:
    """{|D|: h(D)} for fundamental D of the given sign with |D| <= X (narrow h for D > 0)."""
    s = _sign_value(sign)
    if X < 3:
        raise InvalidInputError("X must be >= 3")
    mask = fundamental_mask(X, s)
    ns = [int(n) for n in np.flatnonzero(mask)]
    if s < 0:
        counts = imaginary_class_numbers(X)
        return {n: int(counts[n]) for n in ns}
    return {n: NarrowGroup(n).order for n in ns}


def class_group(D: int, kind: str | None = None) -> ClassGroup:
    """Class group of Q(sqrt D); real fields default to the narrow group."""
    if not is_fundamental_discriminant(D):
        raise InvalidInputError(f"{D} is not a fundamental discriminant")
    if D < 0:
        return class_group_imaginary(D)
    return class_group_real(D, kind or "narrow")


def _imag_worker(items):
    return [(D, class_group_imaginary(D, h).divisors) for D, h in items]


class _Cache:
    def __init__(self):
        self.groups: dict[tuple[int, str], dict[int, ClassGroup]] = {}
        self.upto: dict[tuple[int, str], int] = {}


_cache = _Cache()


def _real_wide(Ds):
    return [(D, class_group_real(D, "wide").divisors) for D in Ds]


def _real_narrow(Ds):
    return [(D, class_group_real(D, "narrow").divisors) for D in Ds]


def family_groups(X: int, sign, kind: str = "wide", threads: int = 1, store=None) -> list[ClassGroup]:
    """Class groups of all fundamental D of the given sign with |D| <= X, ordered by |D|.

    Results are memoized per (sign, kind); ``store`` is an optional ClassGroupCache.
    """
    s = _sign_value(sign)
    if X < 3:
        raise InvalidInputError("X must be >= 3")
    if kind not in ("wide", "narrow"):
        raise InvalidInputError(f"kind must be wide or narrow, not {kind!r}")
    if s < 0:
        kind = "wide"
    key = (s, kind)
    have = _cache.groups.setdefault(key, {})
    done = _cache.upto.get(key, 0)
    if X > done:
        mask = fundamental_mask(X, s)
        todo = [s * int(n) for n in np.flatnonzero(mask) if n > done]
        if store is not None:
            for g in store.lookup(todo, kind):
                have[abs(g.D)] = g
            todo = [D for D in todo if abs(D) not in have]
        if todo:
            if s < 0:
                counts = imaginary_class_numbers(X)
                items = [(D, int(counts[-D])) for D in todo]
                rows = map_chunks(_imag_worker, items, threads)
            else:
                rows = map_chunks(_real_wide if kind == "wide" else _real_narrow, todo, threads)
            for D, divs in rows:
                h = 1
                for d in divs:
                    h *= d
                g = ClassGroup(D, h, divs, kind)
                have[abs(D)] = g
        _cache.upto[key] = X
    out = [have[n] for n in sorted(have) if n <= X]
    if store is not None:
        # also persists groups that were already memoized in this process
        store.append(out)
    return out


def clear_cache() -> None:
    _cache.groups.clear()
    _cache.upto.clear()
