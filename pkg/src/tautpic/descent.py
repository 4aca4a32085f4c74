"""Divisor class group of the coarse moduli space inside the stable Picard group.

A line bundle on the stack descends to the smooth locus of the coarse space
when every generic curve automorphism acts trivially on its fibre.  The
relevant automorphisms are involutions, so their action on the tautological
generators is a homomorphism to Z/2 (``1`` encodes the sign ``-1``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classes import (
    DivisorClass,
    classes_equal,
    generator_class,
    normal_form,
    parse_class,
    subgroup_quotient,
)
from .errors import DomainError, IntegrityError
from .generators import ModuliPair, canonicalize
from .lattice import AbGroupStructure, IntMatrix, hnf_basis, kernel_mod_m, sublattice_equal
from .presentations import Presentation, build_lambda

EXPLICIT = "explicit_list"
KERNEL = "character_kernel"
BOTH = "both_agree"


@dataclass(frozen=True)
class Character:
    """Homomorphism from the canonical generators to Z/2."""

    presentation: Presentation
    values: tuple[int, ...]
    label: str = ""

    def __getitem__(self, name: str) -> int:
        return self.values[self.presentation.index[name]]

    def __call__(self, c: DivisorClass) -> int:
        return sum(a * v for a, v in zip(c.coeffs, self.values)) % 2

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.presentation.generators, self.values))

    def is_well_defined(self) -> bool:
        """Vanishes (mod 2) on every relation of the presentation."""
        return all(sum(a * v for a, v in zip(row, self.values)) % 2 == 0 for row in self.presentation.relations)


def _require_stable(pres):
    if pres.variant != "stable":
        raise DomainError("characters are defined on the stable presentation")


def _orbit_name(pres, a, mask):
    return canonicalize(pres.g, a, mask, pres.n).name


def elliptic_character(pres: Presentation) -> Character:
    """Elliptic-tail involution: -1 on lambda and on delta(1;), +1 elsewhere."""
    _require_stable(pres)
    if pres.g < 1:
        raise DomainError("the elliptic-tail involution needs g >= 1")
    values = [0] * pres.rank
    values[pres.index["lambda"]] = 1
    values[pres.index[_orbit_name(pres, 1, 0)]] = 1
    return Character(pres, tuple(values), "elliptic")


def hyperelliptic_character(pres: Presentation) -> Character:
    """Hyperelliptic involution fixing the markings: (-1)^g on lambda, -1 on each psi_i."""
    _require_stable(pres)
    if pres.g < 1 or pres.g + pres.n != 3:
        raise DomainError("the hyperelliptic character is used only when g + n = 3 and g >= 1")
    values = [0] * pres.rank
    values[pres.index["lambda"]] = pres.g % 2
    for i in range(1, pres.n + 1):
        values[pres.index[_orbit_name(pres, 0, 1 << (i - 1))]] = 1
    return Character(pres, tuple(values), "hyperelliptic")


@dataclass(frozen=True)
class ClResult:
    pair: ModuliPair
    generators: tuple[str, ...]
    subgroup_basis: IntMatrix
    quotient: AbGroupStructure
    method: str
    warning: str | None = None
    characters: tuple[str, ...] = field(default=())


# explicit generator lists of the class group, written in the expression grammar
_SPECIAL_LISTS = {
    (2, 1): ["2*lambda", "2*psi_1", "lambda + delta(1;)", "delta_irr"],
    (1, 2): ["2*lambda", "delta_irr", "2*psi_1", "2*psi_2", "2*delta(1;)"],
    (2, 0): ["2*lambda", "2*delta(1;)", "delta_irr"],
    (1, 1): ["delta_irr"],
}

# equalities displayed alongside those lists; each must hold in the presentation
_SPECIAL_IDENTITIES = {
    (2, 1): [("delta_irr", "10*lambda - 2*delta(1;)")],
    (1, 2): [("delta_irr", "12*lambda"), ("2*psi_1", "2*psi_2"), ("2*delta(1;)", "2*psi_1 - 2*lambda")],
    (2, 0): [("delta_irr", "10*lambda - 2*delta(1;)")],
    (1, 1): [("delta_irr", "12*lambda"), ("12*lambda", "12*psi_1")],
}

EXPECTED_CL_QUOTIENT = {
    (2, 1): AbGroupStructure(0, (2, 2)),
    (1, 2): AbGroupStructure(0, (2, 2)),
    (2, 0): AbGroupStructure(0, (2, 2)),
    (1, 1): AbGroupStructure(0, (12,)),
}


def expected_cl_quotient(pair: ModuliPair) -> AbGroupStructure:
    if pair.g == 0:
        return AbGroupStructure(0)
    return EXPECTED_CL_QUOTIENT.get((pair.g, pair.n), AbGroupStructure(0, (2,)))


def explicit_cl_generators(pres: Presentation) -> list[DivisorClass]:
    """The generator list of the class group for ``pres`` (g >= 1)."""
    key = (pres.g, pres.n)
    if key in _SPECIAL_LISTS:
        return [parse_class(pres, e) for e in _SPECIAL_LISTS[key]]
    tail = _orbit_name(pres, 1, 0)
    gens = [parse_class(pres, "2*lambda"), parse_class(pres, f"lambda + {tail}")]
    gens.append(generator_class(pres, "delta_irr"))
    for name in pres.generators[2:]:
        if name != tail:
            gens.append(generator_class(pres, name))
    return gens


def _check_identities(pres):
    for lhs, rhs in _SPECIAL_IDENTITIES.get((pres.g, pres.n), ()):
        if not classes_equal(pres, parse_class(pres, lhs), parse_class(pres, rhs)):
            raise IntegrityError(f"{lhs} = {rhs} fails in the presentation for ({pres.g},{pres.n})")


def _nf_rows(pres, rows):
    data = pres.basis_data
    return [data.coordinates(r) for r in rows]


def character_kernel(pres: Presentation, characters) -> IntMatrix:
    """Kernel of the characters in normal-form coordinates (HNF basis)."""
    A = IntMatrix([ch.values for ch in characters], ncols=pres.rank)
    K = kernel_mod_m(A, 2)
    return hnf_basis(IntMatrix(_nf_rows(pres, K.rows), ncols=len(pres.basis_data.moduli)))


def cl_subgroup(pres: Presentation) -> ClResult:
    if pres.variant != "stable":
        raise DomainError("the class group is computed inside the stable presentation")
    pair = pres.pair
    g, n = pair.g, pair.n
    k = len(pres.basis_data.moduli)
    if g == 0:
        basis = IntMatrix.identity(k)
        return ClResult(pair, pres.generators, basis, AbGroupStructure(0), EXPLICIT,
                        warning="g = 0: the coarse space equals the stack, Cl is all of Pic")
    _check_identities(pres)
    gens = explicit_cl_generators(pres)
    names = tuple(str(c) for c in gens)
    quotient = subgroup_quotient(pres, gens)
    basis = hnf_basis(IntMatrix(_nf_rows(pres, [c.coeffs for c in gens]), ncols=k))
    if (g, n) in ((2, 0), (1, 1)):
        return ClResult(pair, names, basis, quotient, EXPLICIT)
    chars = [elliptic_character(pres)]
    if g + n == 3 and (g, n) != (3, 0):
        chars.append(hyperelliptic_character(pres))
    for ch in chars:
        if not ch.is_well_defined():
            raise IntegrityError(f"{ch.label} character does not vanish on the relations of {pair}")
    kernel = character_kernel(pres, chars)
    if not sublattice_equal(basis, kernel):
        raise IntegrityError(f"explicit list and character kernel disagree for {pair}")
    return ClResult(pair, names, basis, quotient, BOTH, characters=tuple(ch.label for ch in chars))


def rigidification_fixtures():
    """Subgroups cut out by removing the generic involution of M_{1,1} and M_2.

    Returns ``(pair, generators, expected quotient)`` triples.
    """
    p11 = build_lambda(ModuliPair(1, 1))
    p20 = build_lambda(ModuliPair(2, 0))
    return [
        (p11.pair, [parse_class(p11, "2*lambda")], AbGroupStructure(0, (2,))),
        (p20.pair, [generator_class(p20, name) for name in p20.generators], AbGroupStructure(0)),
    ]
