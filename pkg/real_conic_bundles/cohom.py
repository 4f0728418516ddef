"""
Second cohomology of the real locus and its algebraic subgroup.

``H^2(X(R), Z)`` splits as one ``Z`` per orientable component and one
``Z/2`` per nonorientable component. The restriction images of the
Neron-Severi generators span the algebraic subgroup; the quotient ``Gamma``
and subgroup membership are both read off a Smith normal form computed with
exact Python integers held in numpy object arrays.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bundle import SurfaceState, SurfaceType, component_census
from .errors import InvalidInput

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LatticeElement:
    free_coords: tuple[int, ...] = ()
    torsion_coords: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "free_coords", tuple(int(v) for v in self.free_coords))
        object.__setattr__(self, "torsion_coords", tuple(int(v) % 2 for v in self.torsion_coords))

    @property
    def is_zero(self) -> bool:
        return not any(self.free_coords) and not any(self.torsion_coords)

    def __add__(self, other: "LatticeElement") -> "LatticeElement":
        if (len(self.free_coords), len(self.torsion_coords)) != (
            len(other.free_coords),
            len(other.torsion_coords),
        ):
            raise InvalidInput("cannot add elements of different lattices", "cohom")
        return LatticeElement(
            tuple(a + b for a, b in zip(self.free_coords, other.free_coords)),
            tuple(a + b for a, b in zip(self.torsion_coords, other.torsion_coords)),
        )

    def as_row(self) -> list[int]:
        return list(self.free_coords) + list(self.torsion_coords)


@dataclass(frozen=True)
class CohomologyLattice:
    """
    ``Z^a + (Z/2)^b`` with one labelled slot per real component.

    ``free_slots`` and ``torsion_slots`` hold component ids, the slot of
    component ``j`` carrying its generator class ``eta_j``.
    """

    free_slots: tuple[int, ...] = ()
    torsion_slots: tuple[int, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.free_slots) + len(self.torsion_slots)

    def zero(self) -> LatticeElement:
        return LatticeElement((0,) * len(self.free_slots), (0,) * len(self.torsion_slots))

    def element(self, free=(), torsion=()) -> LatticeElement:
        x = LatticeElement(tuple(free), tuple(torsion))
        self.check(x)
        return x

    def eta(self, component_id: int) -> LatticeElement:
        """The generator class of one component."""
        free = [int(s == component_id) for s in self.free_slots]
        torsion = [int(s == component_id) for s in self.torsion_slots]
        if not any(free) and not any(torsion):
            raise InvalidInput(f"no slot for component M{component_id}", "cohom")
        return LatticeElement(tuple(free), tuple(torsion))

    def check(self, x: LatticeElement) -> None:
        if len(x.free_coords) != len(self.free_slots) or len(x.torsion_coords) != len(
            self.torsion_slots
        ):
            raise InvalidInput(
                f"element with {len(x.free_coords)}+{len(x.torsion_coords)} coordinates "
                f"does not live in {self}",
                "cohom",
            )

    def describe(self, x: LatticeElement) -> str:
        """Render ``x`` as a combination of the labelled classes ``eta_j``."""
        terms = []
        for slot, value in zip(self.free_slots, x.free_coords):
            if value:
                terms.append(f"η{slot}" if value == 1 else f"{value}·η{slot}")
        for slot, bit in zip(self.torsion_slots, x.torsion_coords):
            if bit:
                terms.append(f"η{slot}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def __str__(self) -> str:
        return str(GroupInvariants(len(self.free_slots), (2,) * len(self.torsion_slots)))


def lattice_of(state: SurfaceState) -> CohomologyLattice:
    """One ``Z`` slot per sphere or torus, one ``Z/2`` slot per nonorientable component."""
    return CohomologyLattice(
        free_slots=tuple(c.id for c in state.components if c.orientable),
        torsion_slots=tuple(c.id for c in state.components if not c.orientable),
    )


@dataclass(frozen=True)
class NSRestrictionTable:
    """
    Restriction images ``i*`` of the Neron-Severi generators.

    Rows are ``(symbol, element)`` pairs: the fiber ``f``, a section ``h``,
    the components ``E_j^1, E_j^2`` of the singular fibers over each sphere
    ``j``, the canonical class ``K_X`` and one ``L_j`` per component met by a
    real exceptional curve. ``K_X = r*f - 2*h + sum E_j^c`` with ``r`` never
    pinned down; only its restriction is used.
    """

    lattice: CohomologyLattice
    rows: tuple[tuple[str, LatticeElement], ...]
    tori: tuple[int, ...] = ()
    canonical_class: str = "K_X = r·f - 2·h + Σ E_j^c  (r unspecified)"

    def row(self, symbol: str) -> LatticeElement:
        for name, value in self.rows:
            if name == symbol:
                return value
        raise KeyError(symbol)

    def generators(self) -> list[LatticeElement]:
        """Distinct nonzero rows, in table order."""
        out = []
        for _, value in self.rows:
            if not value.is_zero and value not in out:
                out.append(value)
        return out

    def check(self, minimal: bool) -> list[str]:
        """Violated table invariants (empty when the table is consistent)."""
        problems = []
        if not self.row("f").is_zero:
            problems.append("i*(f) must vanish")
        if minimal and not self.row("K_X").is_zero:
            problems.append("i*(K_X) must vanish on a minimal conic bundle")
        h = self.row("h")
        torus_slots = set(self.tori)
        if any(v for s, v in zip(self.lattice.free_slots, h.free_coords) if s in torus_slots):
            problems.append("i*(h) must vanish on torus components")
        return problems


def restriction_table(state: SurfaceState) -> NSRestrictionTable:
    """
    Build the restriction table of ``state``.

    The section class restricts to the sum of the classes of the components
    that were dominating Klein bottles once all elementary transformations
    were applied; its sphere coordinates are taken as 0 since every
    spherical class is already the image of ``E_j^1``. The canonical class
    restricts to the sum of the classes of the nonorientable components with
    odd Euler characteristic, which is 0 on a minimal conic bundle.
    """
    lattice = lattice_of(state)
    zero = lattice.zero()
    section = zero
    canonical = zero
    for c in state.components:
        if c.in_section_sum:
            section = section + lattice.eta(c.id)
        if not c.orientable and c.euler_characteristic % 2:
            canonical = canonical + lattice.eta(c.id)
    rows = [("f", zero), ("h", section)]
    for c in state.components:
        if c.topology is SurfaceType.SPHERE:
            rows.append((f"E_{c.id}^1", lattice.eta(c.id)))
            rows.append((f"E_{c.id}^2", lattice.eta(c.id)))
    rows.append(("K_X", canonical))
    for c in state.components:
        if c.has_real_exceptional:
            rows.append((f"L_{c.id}", lattice.eta(c.id)))
    tori = tuple(c.id for c in state.components if c.topology is SurfaceType.TORUS)
    return NSRestrictionTable(lattice=lattice, rows=tuple(rows), tori=tori)


def algebraic_generators(state: SurfaceState) -> list[LatticeElement]:
    """
    Generators of the algebraic subgroup of ``H^2(X(R), Z)``.

    Spherical classes, the sum of the Klein classes carried by a section,
    and the class of every component meeting a real exceptional curve.
    Torus classes never appear.

    Examples
    --------
    .. code-block:: python

        lattice = lattice_of(state)
        [lattice.describe(x) for x in algebraic_generators(state)]
        # ['η4 + η5 + η6', 'η1', 'η2']
    """
    return restriction_table(state).generators()


@dataclass(frozen=True)
class GroupInvariants:
    """
    A finitely generated abelian group ``Z^free_rank + Z/d_1 + ... + Z/d_m``
    with ``d_1 | d_2 | ... | d_m`` and every ``d_i >= 2``.
    """

    free_rank: int = 0
    torsion_factors: tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.torsion_factors)
        object.__setattr__(self, "torsion_factors", factors)
        if self.free_rank < 0:
            raise InvalidInput(f"negative free rank {self.free_rank}", "cohom")
        if any(d < 2 for d in factors):
            raise InvalidInput(f"torsion factors must be >= 2, got {factors}", "cohom")
        if any(b % a for a, b in zip(factors, factors[1:])):
            raise InvalidInput(f"torsion factors {factors} are not a divisibility chain", "cohom")

    @classmethod
    def closed_form(cls, tori: int, kleins: int) -> "GroupInvariants":
        """``Z^tori + (Z/2)^max(kleins - 1, 0)``."""
        return cls(tori, (2,) * max(kleins - 1, 0))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion_factors

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion_factors)}

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for d in sorted(set(self.torsion_factors)):
            n = self.torsion_factors.count(d)
            parts.append(f"Z/{d}" if n == 1 else f"(Z/{d})^{n}")
        return " ⊕ ".join(parts)


def _matrix(rows: Sequence[Sequence[int]], ncols: int) -> np.ndarray:
    out = np.zeros((len(rows), ncols), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = int(v)
    return out


def _identity(n: int) -> np.ndarray:
    return _matrix([[int(i == j) for j in range(n)] for i in range(n)], n)


def _pivot(D: np.ndarray, t: int) -> Optional[tuple[int, int]]:
    best = None
    m, n = D.shape
    for i in range(t, m):
        for j in range(t, n):
            v = D[i, j]
            if v and (best is None or abs(v) < abs(D[best])):
                best = (i, j)
    return best


def smith_normal_form(A) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Smith normal form ``U @ A @ V == D`` over the integers.

    ``D`` is diagonal with ``d_1 | d_2 | ...`` and non-negative entries;
    ``U`` and ``V`` are unimodular. The pivot is always the entry of
    minimal absolute value in the remaining block. All arrays have object
    dtype and hold Python integers.

    Examples
    --------
    .. code-block:: python

        U, D, V = smith_normal_form([[2, 4], [6, 8]])
        D.diagonal().tolist()    # [2, 4]
    """
    A = np.asarray(A, dtype=object)
    if A.ndim != 2:
        A = A.reshape(len(A), -1) if A.size else np.zeros((0, 0), dtype=object)
    m, n = A.shape
    D = _matrix(A.tolist(), n) if m else np.zeros((0, n), dtype=object)
    U, V = _identity(m), _identity(n)

    for t in range(min(m, n)):
        while True:
            pivot = _pivot(D, t)
            if pivot is None:
                return U, D, V
            i, j = pivot
            if i != t:
                D[[t, i], :] = D[[i, t], :]
                U[[t, i], :] = U[[i, t], :]
            if j != t:
                D[:, [t, j]] = D[:, [j, t]]
                V[:, [t, j]] = V[:, [j, t]]
            p = D[t, t]
            clean = True
            for r in range(t + 1, m):
                q = D[r, t] // p
                if q:
                    D[r, :] -= q * D[t, :]
                    U[r, :] -= q * U[t, :]
                clean = clean and D[r, t] == 0
            for c in range(t + 1, n):
                q = D[t, c] // p
                if q:
                    D[:, c] -= q * D[:, t]
                    V[:, c] -= q * V[:, t]
                clean = clean and D[t, c] == 0
            if not clean:
                continue
            offending = next(
                (r for r in range(t + 1, m) for c in range(t + 1, n) if D[r, c] % p),
                None,
            )
            if offending is None:
                break
            D[t, :] += D[offending, :]
            U[t, :] += U[offending, :]
        if D[t, t] < 0:
            D[t, :] *= -1
            U[t, :] *= -1
    return U, D, V


def integer_determinant(M) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    rows = [[int(v) for v in row] for row in np.asarray(M, dtype=object).tolist()]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InvalidInput("determinant of a non-square matrix", "cohom")
    sign, prev = 1, 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k]), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
        prev = rows[k][k]
    return sign * rows[n - 1][n - 1] if n else 1


def _relations(lattice: CohomologyLattice, gens: Sequence[LatticeElement]) -> np.ndarray:
    a, b = len(lattice.free_slots), len(lattice.torsion_slots)
    rows = [[0] * a + [2 * int(i == j) for j in range(b)] for i in range(b)]
    for g in gens:
        lattice.check(g)
        rows.append(g.as_row())
    return _matrix(rows, a + b)


def quotient_group(lattice: CohomologyLattice, gens: Sequence[LatticeElement]) -> GroupInvariants:
    """
    Invariant factors of ``(Z^a + (Z/2)^b) / <gens>``.

    Examples
    --------
    .. code-block:: python

        lattice = CohomologyLattice((1, 2), (3, 4, 5))
        quotient_group(lattice, [lattice.element((0, 0), (1, 1, 1))])
        # GroupInvariants(free_rank=2, torsion_factors=(2, 2))
    """
    R = _relations(lattice, gens)
    _, D, _ = smith_normal_form(R)
    diagonal = [D[i, i] for i in range(min(D.shape))]
    nonzero = [int(d) for d in diagonal if d]
    logger.debug("relation matrix %s, invariant factors %s", R.shape, nonzero)
    return GroupInvariants(
        free_rank=lattice.dimension - len(nonzero),
        torsion_factors=tuple(d for d in nonzero if d > 1),
    )


def is_member(
    lattice: CohomologyLattice, gens: Sequence[LatticeElement], x: LatticeElement
) -> bool:
    """
    Whether ``x`` lies in the subgroup generated by ``gens``.

    With ``U R V = D`` for the relation matrix ``R``, ``y R = x`` has an
    integer solution iff ``x V`` is divisible coordinatewise by the diagonal
    of ``D`` (and vanishes past its rank).
    """
    lattice.check(x)
    if lattice.dimension == 0:
        return True
    R = _relations(lattice, gens)
    _, D, V = smith_normal_form(R)
    w = np.asarray(x.as_row(), dtype=object).dot(V)
    for i, value in enumerate(w.tolist()):
        d = D[i, i] if i < min(D.shape) else 0
        if (d == 0 and value != 0) or (d and value % d):
            return False
    return True


@dataclass(frozen=True)
class GammaReport:
    """``Gamma`` computed from the generators, next to its closed form."""

    group: GroupInvariants
    predicted: Optional[GroupInvariants]
    rule: str

    @property
    def matches(self) -> Optional[bool]:
        if self.predicted is None:
            return None
        return self.group == self.predicted

    def to_dict(self) -> dict:
        return {
            "group": self.group.to_dict(),
            "text": str(self.group),
            "predicted": None if self.predicted is None else self.predicted.to_dict(),
            "rule": self.rule,
            "match": self.matches,
        }


def closed_form_gamma(state: SurfaceState) -> tuple[Optional[GroupInvariants], str]:
    """The closed-form prediction for ``Gamma`` and the rule it comes from."""
    census = component_census(state)
    if state.minimal:
        return (
            GroupInvariants.closed_form(census.t, census.k),
            "minimal conic bundle: Z^t ⊕ (Z/2)^max(k-1,0)",
        )
    if not state.c_rational:
        return (
            GroupInvariants.closed_form(census.t, census.k_prime),
            "C-ruled, not C-rational: Z^t ⊕ (Z/2)^max(k'-1,0)",
        )
    return None, "C-rational with blow-ups: no closed form, see the C-rational catalogue"


def gamma(state: SurfaceState) -> GammaReport:
    """
    ``Gamma = H^2(X(R), Z) / H^2_C-alg`` via Smith normal form.

    Examples
    --------
    .. code-block:: python

        report = gamma(state)
        str(report.group), report.matches    # ('Z^2 ⊕ (Z/2)^2', True)
    """
    group = quotient_group(lattice_of(state), algebraic_generators(state))
    predicted, rule = closed_form_gamma(state)
    report = GammaReport(group=group, predicted=predicted, rule=rule)
    if report.matches is False:
        logger.warning("Gamma %s disagrees with closed form %s", group, predicted)
    return report
