"""Finite presentations of the tautological Picard groups.

Three variants are built here:

``stable``
    generators lambda, delta_irr and one column per boundary orbit, with the
    genus-dependent relations for g <= 2 (none for g >= 3);
``open``
    lambda and, for each marking i, the two symbols delta(0;i), delta(g;[n]-i)
    that restrict to -psi_i on the smooth locus;
``rpic``
    the relative Picard group of the universal curve, generated by the
    relative dualizing sheaf ``omega`` and the sections ``sigma_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations, permutations
from math import comb

from .errors import DomainError, IntegrityError
from .generators import (
    DELTA_IRR,
    LAMBDA,
    ModuliPair,
    boundary_name,
    canonicalize,
    enumerate_generators,
    validate_pair,
)
from .lattice import (
    AbGroupStructure,
    IntMatrix,
    hermite_normal_form,
    hnf_basis,
    quotient_invariants,
    smith_normal_form,
    sublattice_equal,
)

OMEGA = "omega"


def sigma_name(i: int) -> str:
    return f"sigma_{i}"


@dataclass(frozen=True, eq=False)
class Presentation:
    """Generators, relation rows and the resulting group structure."""

    pair: ModuliPair
    variant: str
    generators: tuple[str, ...]
    relations: IntMatrix
    structure: AbGroupStructure = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.relations.ncols != len(self.generators):
            raise IntegrityError(
                f"{len(self.generators)} generators but relation matrix has {self.relations.ncols} columns"
            )
        if self.structure is None:
            object.__setattr__(
                self, "structure", quotient_invariants(self.relations, len(self.generators))
            )

    @property
    def g(self) -> int:
        return self.pair.g

    @property
    def n(self) -> int:
        return self.pair.n

    @property
    def rank(self) -> int:
        return len(self.generators)

    def key(self):
        return (self.pair, self.variant, self.generators, self.relations)

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (
            f"Presentation({self.variant}, g={self.g}, n={self.n}, "
            f"{self.rank} generators, {self.relations.nrows} relations, {self.structure})"
        )

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.generators)}

    @cached_property
    def relation_hnf(self) -> IntMatrix:
        return hnf_basis(self.relations)

    @cached_property
    def basis_data(self) -> "BasisData":
        return BasisData.compute(self)


# ---------------------------------------------------------------------------
# normal-form coordinates


@dataclass(frozen=True)
class BasisData:
    """Coordinates on ``Z^generators / relations``.

    ``kind == "generators"``: the quotient is free and a subset ``selected``
    of the generators maps to a basis of it.  With ``C`` the remaining
    columns, every vector satisfies ``x = c H + y`` where ``H`` is the HNF of
    the relations, so ``y = x_S - x_C (H_C)^{-1} H_S``.

    ``kind == "smith"``: coordinates ``x V`` from the Smith decomposition,
    torsion coordinates reduced modulo their invariant factor.
    """

    kind: str
    selected: tuple[int, ...] = ()
    eliminated: tuple[int, ...] = ()
    transfer: tuple[tuple[int, ...], ...] = ()
    V: IntMatrix | None = None
    slots: tuple[tuple[int, int], ...] = ()

    @property
    def moduli(self) -> tuple[int, ...]:
        if self.kind == "generators":
            return (0,) * len(self.selected)
        return tuple(d for _, d in self.slots)

    def coordinates(self, x) -> tuple[int, ...]:
        if self.kind == "generators":
            y = [x[j] for j in self.selected]
            for xc, row in zip((x[j] for j in self.eliminated), self.transfer):
                if xc:
                    y = [a - xc * b for a, b in zip(y, row)]
            return tuple(y)
        cols = self.V.rows
        out = []
        for col, d in self.slots:
            v = sum(x[i] * cols[i][col] for i in range(len(x)) if x[i])
            out.append(v % d if d else v)
        return tuple(out)

    @classmethod
    def compute(cls, pres: Presentation) -> "BasisData":
        if pres.structure.is_free:
            found = _greedy_generator_basis(pres)
            if found is not None:
                return found
        return _smith_basis(pres)


def _greedy_generator_basis(pres: Presentation):
    H = pres.relation_hnf
    m, r = pres.rank, H.nrows
    k = m - r
    if r == 0:
        return BasisData("generators", tuple(range(m)), (), ())
    selected = []
    remaining = list(range(m))
    for j in range(m):
        if len(selected) == k:
            break
        trial = [c for c in remaining if c != j]
        # killing the chosen generators must leave a free quotient of the right rank
        st = quotient_invariants(H.select_columns(trial), len(trial))
        if st.is_free and st.free_rank == len(trial) - r:
            selected.append(j)
            remaining = trial
    if len(selected) != k:
        return None
    HC = H.select_columns(remaining)
    HS = H.select_columns(selected)
    inv_HC = hermite_normal_form(HC)[1]
    transfer = inv_HC @ HS
    return BasisData("generators", tuple(selected), tuple(remaining), transfer.rows)


def _smith_basis(pres: Presentation) -> BasisData:
    dec = smith_normal_form(pres.relations)
    diag = dec.diagonal
    nonzero = [i for i, d in enumerate(diag) if d]
    free_cols = [j for j in range(pres.rank) if j >= len(nonzero)]
    torsion = [(i, diag[i]) for i in nonzero if diag[i] > 1]
    slots = tuple((j, 0) for j in free_cols) + tuple(torsion)
    return BasisData("smith", V=dec.V, slots=slots)


# ---------------------------------------------------------------------------
# stable presentation


class _RowBuilder:
    """Collects sparse relation rows and removes duplicates up to sign."""

    def __init__(self, ncols):
        self.ncols = ncols
        self.rows = []
        self._seen = set()

    def add(self, entries: dict[int, int]):
        entries = {j: v for j, v in entries.items() if v}
        if not entries:
            return
        key = tuple(sorted(entries.items()))
        if key[0][1] < 0:
            key = tuple((j, -v) for j, v in key)
        if key in self._seen:
            return
        self._seen.add(key)
        row = [0] * self.ncols
        for j, v in entries.items():
            row[j] = v
        self.rows.append(row)

    def matrix(self) -> IntMatrix:
        return IntMatrix(self.rows, ncols=self.ncols)


def _stable_columns(pair: ModuliPair):
    gens = enumerate_generators(pair)
    col = {gid: i for i, gid in enumerate(gens)}

    def boundary(a, mask):
        return col[canonicalize(pair.g, a, mask, pair.n)]

    return gens, boundary


def _subsets(n, inside, outside):
    """Masks A of [n] containing every marking of ``inside`` and none of ``outside``."""
    need = sum(1 << (i - 1) for i in inside)
    ban = sum(1 << (i - 1) for i in outside)
    for mask in range(1 << n):
        if mask & need == need and not mask & ban:
            yield mask


def _add_boundary_sum(entries, boundary, a, masks, coeff):
    for mask in masks:
        j = boundary(a, mask)
        entries[j] = entries.get(j, 0) + coeff


@lru_cache(maxsize=None)
def _relation_rows(g: int, n: int) -> IntMatrix:
    pair = ModuliPair(g, n)
    gens, boundary = _stable_columns(pair)
    lam, irr = 0, 1
    rows = _RowBuilder(len(gens))
    full = (1 << n) - 1
    if g == 2:
        # one term per boundary divisor of type (1, A)
        orbits = sorted({boundary(1, mask) for mask in range(full + 1)})
        entries = {lam: 10, irr: -1}
        for j in orbits:
            entries[j] = entries.get(j, 0) - 2
        rows.add(entries)
    elif g == 1:
        rows.add({lam: 12, irr: -1})
        for p in range(1, n + 1):
            entries = {lam: 1}
            _add_boundary_sum(entries, boundary, 0, _subsets(n, [p], []), 1)
            rows.add(entries)
    elif g == 0:
        rows.add({lam: 1})
        rows.add({irr: 1})
        marks = range(1, n + 1)
        for x, y in combinations(marks, 2):
            for z in marks:
                if z in (x, y):
                    continue
                entries = {}
                _add_boundary_sum(entries, boundary, 0, _subsets(n, [z], [x, y]), 1)
                rows.add(entries)
        for p, q, r, s in permutations(marks, 4):
            entries = {}
            _add_boundary_sum(entries, boundary, 0, _subsets(n, [p, q], [r, s]), 1)
            _add_boundary_sum(entries, boundary, 0, _subsets(n, [p, r], [q, s]), -1)
            rows.add(entries)
    return rows.matrix()


def build_relation_rows(pair: ModuliPair) -> IntMatrix:
    """Relation rows of the stable presentation in canonical-generator coordinates."""
    pair = validate_pair(pair.g, pair.n, "stable")
    return _relation_rows(pair.g, pair.n)


def expected_rank(pair: ModuliPair) -> int:
    """Closed-form rank of the tautological Picard group of the stable moduli."""
    g, n = pair.g, pair.n
    if g >= 3:
        return 1 + -(-(2**n * (g + 1)) // 2)
    if g == 2:
        return -(-(2**n * (g + 1)) // 2)
    if g == 1:
        return 2**n - n
    return 2 ** (n - 1) - comb(n, 2) - 1


@lru_cache(maxsize=None)
def _build_lambda(g: int, n: int) -> Presentation:
    pair = ModuliPair(g, n)
    names = tuple(gid.name for gid in enumerate_generators(pair))
    pres = Presentation(pair, "stable", names, _relation_rows(g, n))
    if not pres.structure.is_free:
        raise IntegrityError(f"stable presentation for {pair} has torsion: {pres.structure}")
    return pres


def build_lambda(pair: ModuliPair) -> Presentation:
    pair = validate_pair(pair.g, pair.n, "stable")
    return _build_lambda(pair.g, pair.n)


# ---------------------------------------------------------------------------
# open presentation


def open_generator_names(pair: ModuliPair) -> tuple[str, ...]:
    g, n = pair.g, pair.n
    full = (1 << n) - 1
    names = [LAMBDA]
    for i in range(1, n + 1):
        bit = 1 << (i - 1)
        names.append(boundary_name(0, bit))
        names.append(boundary_name(g, full ^ bit))
    return tuple(names)


@lru_cache(maxsize=None)
def _build_open(g: int, n: int) -> Presentation:
    pair = ModuliPair(g, n)
    names = open_generator_names(pair)
    m = len(names)
    rows = _RowBuilder(m)

    def small(i):
        return 2 * i - 1

    def big(i):
        return 2 * i

    if g == 0:
        # the smooth locus has trivial tautological Picard group
        for j in range(m):
            rows.add({j: 1})
    else:
        for i in range(1, n + 1):
            rows.add({small(i): 1, big(i): -1})
        if g == 2:
            rows.add({0: 10})
        elif g == 1:
            rows.add({0: 12})
            for p in range(1, n + 1):
                rows.add({0: 1, small(p): 1})
    return Presentation(pair, "open", names, rows.matrix())


def build_open(pair: ModuliPair) -> Presentation:
    pair = validate_pair(pair.g, pair.n, "open")
    return _build_open(pair.g, pair.n)


def expected_open_structure(pair: ModuliPair) -> AbGroupStructure:
    g, n = pair.g, pair.n
    if g >= 3:
        return AbGroupStructure(n + 1)
    if g == 2:
        return AbGroupStructure(n, (10,))
    if g == 1:
        return AbGroupStructure(0, (12,))
    return AbGroupStructure(0)


def _full_gamma(pair: ModuliPair):
    """Column index of every (a, A) symbol before the orbit identification."""
    g, n = pair.g, pair.n
    full = (1 << n) - 1
    col = {LAMBDA: 0, DELTA_IRR: 1}
    for a in range(g + 1):
        for mask in range(full + 1):
            if (a, mask) not in ((0, 0), (g, full)):
                col[(a, mask)] = len(col)
    return col


def projected_relations(pair: ModuliPair) -> IntMatrix:
    """Image of the stable relation lattice under the projection onto the open generators.

    The stable relations are taken in the unidentified group, i.e. with one
    column per symbol (a, A) together with the rows delta(a;A) - delta(g-a;A^c);
    the projection keeps lambda, delta(0;i) and delta(g;[n]-i) and kills the rest.
    """
    g, n = pair.g, pair.n
    full = (1 << n) - 1
    col = _full_gamma(pair)
    target = {0: 0}
    for i in range(1, n + 1):
        bit = 1 << (i - 1)
        target[col[(0, bit)]] = 2 * i - 1
        target[col[(g, full ^ bit)]] = 2 * i
    m_open = 2 * n + 1

    def project(entries):
        out = {}
        for j, v in entries.items():
            t = target.get(j)
            if t is not None:
                out[t] = out.get(t, 0) + v
        return out

    rows = _RowBuilder(m_open)
    for (a, mask), j in ((k, v) for k, v in col.items() if isinstance(k, tuple)):
        other = (g - a, full ^ mask)
        if other != (a, mask):
            rows.add(project({j: 1, col[other]: -1}))
    # every stable relation, written with the canonical representative symbols
    gens = enumerate_generators(pair)
    to_full = []
    for gid in gens:
        to_full.append(col[gid.kind] if gid.kind in (LAMBDA, DELTA_IRR) else col[(gid.a, gid.mask)])
    for row in _relation_rows(g, n).rows:
        rows.add(project({to_full[j]: v for j, v in enumerate(row) if v}))
    return rows.matrix()


def verify_open_projection(pair: ModuliPair) -> bool:
    pair = validate_pair(pair.g, pair.n, "stable")
    if pair.g < 1:
        raise DomainError("the open projection identity is stated for g >= 1")
    return sublattice_equal(projected_relations(pair), _build_open(pair.g, pair.n).relations)


# ---------------------------------------------------------------------------
# relative Picard group of the universal curve


@lru_cache(maxsize=None)
def _build_rpic(g: int, n: int) -> Presentation:
    pair = ModuliPair(g, n)
    names = (OMEGA, *(sigma_name(i) for i in range(1, n + 1)))
    rows = _RowBuilder(n + 1)
    if g == 1:
        rows.add({0: 1})
    elif g == 0:
        for i in range(2, n + 1):
            rows.add({i: 1, 1: -1})
        rows.add({0: 1, 1: 2})
    return Presentation(pair, "rpic", names, rows.matrix())


def build_rpic(pair: ModuliPair) -> Presentation:
    pair = validate_pair(pair.g, pair.n, "rpic")
    return _build_rpic(pair.g, pair.n)


def expected_rpic_structure(pair: ModuliPair) -> AbGroupStructure:
    if pair.g >= 2:
        return AbGroupStructure(pair.n + 1)
    if pair.g == 1:
        return AbGroupStructure(pair.n)
    return AbGroupStructure(1)


BUILDERS = {"stable": build_lambda, "open": build_open, "rpic": build_rpic}


def build(g: int, n: int, variant: str = "stable") -> Presentation:
    pair = validate_pair(g, n, variant)
    return BUILDERS[variant](pair)
