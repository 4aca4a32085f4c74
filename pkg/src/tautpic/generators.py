"""Tautological generator symbols and their canonical orbit representatives.

A boundary symbol ``delta(a;A)`` names the divisor of curves with a
separating node splitting off genus ``a`` carrying the markings ``A``.  The
symbols ``(a, A)`` and ``(g - a, A^c)`` name the same divisor; we store only
the representative with the smaller ``a`` (ties broken by the smaller
bitmask).  Marking ``i`` is bit ``i - 1`` of the mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError

LAMBDA = "lambda"
DELTA_IRR = "delta_irr"
BOUNDARY = "delta"

VARIANTS = ("stable", "open", "rpic")


@dataclass(frozen=True, order=True)
class ModuliPair:
    g: int
    n: int

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __str__(self):
        return f"({self.g},{self.n})"


def validate_pair(g: int, n: int, variant: str = "stable") -> ModuliPair:
    """Check hyperbolicity for ``variant`` and return the pair.

    The stable and open moduli need ``3g - 3 + n > 0``; the universal curve
    presentation only needs ``2g - 2 + n > 0``.
    """
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")
    if isinstance(g, bool) or isinstance(n, bool) or not isinstance(g, int) or not isinstance(n, int):
        raise DomainError("g and n must be integers")
    if g < 0 or n < 0:
        raise DomainError(f"g and n must be non-negative, got g={g}, n={n}")
    if variant == "rpic":
        if 2 * g - 2 + n <= 0:
            raise DomainError(f"(g,n)=({g},{n}) violates 2g-2+n > 0 (2g-2+n = {2 * g - 2 + n})")
    elif 3 * g - 3 + n <= 0:
        raise DomainError(f"(g,n)=({g},{n}) violates 3g-3+n > 0 (3g-3+n = {3 * g - 3 + n})")
    return ModuliPair(g, n)


def mask_of(markings, n: int) -> int:
    mask = 0
    for i in markings:
        if not 1 <= i <= n:
            raise DomainError(f"marking index {i} outside [1, {n}]")
        mask |= 1 << (i - 1)
    return mask


def markings_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class GenId:
    """One canonical generator: ``lambda``, ``delta_irr`` or a boundary orbit."""

    kind: str
    a: int | None = None
    mask: int | None = None

    @property
    def name(self) -> str:
        if self.kind == BOUNDARY:
            return boundary_name(self.a, self.mask)
        return self.kind

    def sort_key(self):
        order = {LAMBDA: 0, DELTA_IRR: 1, BOUNDARY: 2}[self.kind]
        return (order, self.a or 0, self.mask or 0)

    def __str__(self):
        return self.name


def boundary_name(a: int, mask: int) -> str:
    return f"delta({a};{','.join(str(i) for i in markings_of(mask))})"


def canonicalize(g: int, a: int, mask: int, n: int) -> GenId:
    """Orbit representative of ``delta(a;A)`` under ``(a, A) -> (g - a, A^c)``.

    >>> canonicalize(2, 1, 0b1, n=1).name
    'delta(1;)'
    """
    full = (1 << n) - 1
    if not 0 <= a <= g:
        raise DomainError(f"genus label a={a} outside [0, {g}]")
    if mask < 0 or mask & ~full:
        raise DomainError(f"marking set {markings_of(mask) if mask >= 0 else mask} not inside [1, {n}]")
    if a == 0 and mask == 0:
        raise DomainError("delta(0;) is excluded (it would be the empty boundary divisor)")
    if a == g and mask == full:
        raise DomainError(f"delta({g};{','.join(map(str, range(1, n + 1)))}) is excluded")
    b, comp = g - a, full ^ mask
    if (b, comp) < (a, mask):
        a, mask = b, comp
    return GenId(BOUNDARY, a, mask)


def orbit_count(g: int, n: int) -> int:
    """Number of boundary orbits: ceil(((g+1) 2^n - 2) / 2)."""
    total = (g + 1) * (1 << n) - 2
    return -(-total // 2)


@lru_cache(maxsize=None)
def _enumerate(g: int, n: int) -> tuple[GenId, ...]:
    full = (1 << n) - 1
    seen = set()
    for a in range(g + 1):
        for mask in range(full + 1):
            if (a, mask) in ((0, 0), (g, full)):
                continue
            seen.add(canonicalize(g, a, mask, n))
    boundary = sorted(seen, key=GenId.sort_key)
    return (GenId(LAMBDA), GenId(DELTA_IRR), *boundary)


def enumerate_generators(pair: ModuliPair) -> list[GenId]:
    """``[lambda, delta_irr, boundary orbits in (a, mask) order]``."""
    return list(_enumerate(pair.g, pair.n))
