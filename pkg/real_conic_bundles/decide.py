"""
Approximation decisions for smooth maps out of the real locus.

A smooth map ``X(R) -> S^2`` is described by its degree on every orientable
component and its mod-2 degree on every nonorientable one. It can be
approximated by regular maps iff the pulled-back generator class is
algebraic; :func:`decide_approx_sphere` answers that by lattice membership
and :func:`decide_by_criterion` by the direct degree criterion.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Mapping, Optional

from .bundle import RealComponent, SurfaceState, SurfaceType
from .cohom import (
    GroupInvariants,
    LatticeElement,
    algebraic_generators,
    gamma,
    is_member,
    lattice_of,
)
from .errors import InvalidInput

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MapDescriptor:
    """
    Degree data of a smooth map to ``S^2``, keyed by component id.

    Degrees on nonorientable components are only meaningful mod 2.
    """

    degrees: Mapping[int, int] = field(default_factory=dict)
    name: Optional[str] = None

    def __post_init__(self):
        degrees = {}
        for key, value in dict(self.degrees).items():
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidInput(f"degree on M{key} must be an integer, got {value!r}", "decide")
            degrees[int(key)] = value
        object.__setattr__(self, "degrees", dict(sorted(degrees.items())))

    def __hash__(self):
        return hash((self.name, tuple(self.degrees.items())))

    def label(self) -> str:
        return self.name or "map"


def _check_indexing(state: SurfaceState, f: MapDescriptor) -> None:
    expected, given = set(state.ids), set(f.degrees)
    if expected != given:
        missing = sorted(expected - given)
        extra = sorted(given - expected)
        raise InvalidInput(
            f"degrees of {f.label()} must be indexed by the components {sorted(expected)}"
            f" (missing {missing}, unknown {extra})",
            "decide",
        )


def to_lattice_element(state: SurfaceState, f: MapDescriptor) -> LatticeElement:
    """The class ``f*(kappa)`` as a lattice element."""
    _check_indexing(state, f)
    lattice = lattice_of(state)
    return lattice.element(
        free=[f.degrees[j] for j in lattice.free_slots],
        torsion=[f.degrees[j] % 2 for j in lattice.torsion_slots],
    )


@dataclass(frozen=True)
class Decision:
    approximable: bool
    reasons: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"approximable": self.approximable, "reasons": list(self.reasons)}


def _dominating_kleins(state: SurfaceState) -> list[RealComponent]:
    return [
        c for c in state.components if c.topology is SurfaceType.KLEIN and c.dominates_circle
    ]


def _obstructions(state: SurfaceState, f: MapDescriptor) -> list[str]:
    reasons = []
    for c in state.components:
        if c.topology is SurfaceType.TORUS and f.degrees[c.id]:
            reasons.append(f"M{c.id} is a torus and the degree there is {f.degrees[c.id]}, not 0")
    for a, b in combinations(_dominating_kleins(state), 2):
        da, db = f.degrees[a.id] % 2, f.degrees[b.id] % 2
        if da != db:
            reasons.append(
                f"M{a.id} and M{b.id} are dominating Klein bottles with mod-2 degrees {da} and {db}"
            )
    return reasons


def decide_by_criterion(state: SurfaceState, f: MapDescriptor) -> Decision:
    """
    The direct degree criterion.

    Approximable iff the degree vanishes on every torus and the mod-2
    degrees agree on all dominating Klein bottles. Spheres and components
    carrying a real exceptional curve impose nothing.
    """
    _check_indexing(state, f)
    reasons = _obstructions(state, f)
    return Decision(approximable=not reasons, reasons=tuple(reasons))


def decide_approx_sphere(state: SurfaceState, f: MapDescriptor) -> Decision:
    """
    Decide approximability of ``f`` by membership of ``f*(kappa)`` in the
    algebraic subgroup.

    Examples
    --------
    .. code-block:: python

        f = MapDescriptor({1: 0, 2: 0, 3: 1}, name="wrap-torus")
        decide_approx_sphere(state, f).reasons
        # ('M3 is a torus and the degree there is 1, not 0',)
    """
    x = to_lattice_element(state, f)
    lattice = lattice_of(state)
    member = is_member(lattice, algebraic_generators(state), x)
    logger.debug("%s: class %s, member=%s", f.label(), lattice.describe(x), member)
    if member:
        return Decision(True, (f"f*(κ) = {lattice.describe(x)} is algebraic",))
    reasons = _obstructions(state, f) or [
        f"f*(κ) = {lattice.describe(x)} is not in the algebraic subgroup"
    ]
    return Decision(False, tuple(reasons))


@dataclass(frozen=True)
class ClosedSurface:
    """
    A closed connected surface: orientable of genus ``genus`` or
    nonorientable with ``genus`` crosscaps.
    """

    orientable: bool
    genus: int

    def __post_init__(self):
        if self.genus < 0 or (not self.orientable and self.genus < 1):
            raise InvalidInput(f"no closed surface with these invariants: {self}", "decide")

    @classmethod
    def sphere(cls) -> "ClosedSurface":
        return cls(True, 0)

    @classmethod
    def torus(cls) -> "ClosedSurface":
        return cls(True, 1)

    @classmethod
    def klein(cls) -> "ClosedSurface":
        return cls(False, 2)

    @classmethod
    def of_component(cls, component: RealComponent) -> "ClosedSurface":
        if component.topology is SurfaceType.SPHERE:
            return cls.sphere()
        if component.topology is SurfaceType.TORUS:
            return cls.torus()
        return cls(False, component.crosscaps)

    @classmethod
    def parse(cls, text: str) -> "ClosedSurface":
        """Read ``sphere``, ``torus``, ``klein``, ``orientable:g`` or ``nonorientable:q``."""
        named = {"sphere": cls.sphere, "torus": cls.torus, "klein": cls.klein}
        key = text.strip().lower()
        if key in named:
            return named[key]()
        kind, _, count = key.partition(":")
        if kind in ("orientable", "nonorientable") and count.isdigit():
            return cls(kind == "orientable", int(count))
        raise InvalidInput(f"unknown surface {text!r}", "decide")

    @property
    def is_sphere(self) -> bool:
        return self.orientable and self.genus == 0

    @property
    def is_torus(self) -> bool:
        return self.orientable and self.genus == 1

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus if self.orientable else 2 - self.genus

    def key(self) -> str:
        """Inverse of :meth:`parse`."""
        if self.is_sphere:
            return "sphere"
        if self.is_torus:
            return "torus"
        if not self.orientable and self.genus == 2:
            return "klein"
        return f"{'orientable' if self.orientable else 'nonorientable'}:{self.genus}"

    def __str__(self) -> str:
        names = {"sphere": "sphere", "torus": "torus", "klein": "Klein bottle"}
        if self.key() in names:
            return names[self.key()]
        if self.orientable:
            return f"orientable surface of genus {self.genus}"
        return "real projective plane" if self.genus == 1 else f"N{self.genus}"


@dataclass(frozen=True)
class RationalTargetDescriptor:
    """
    The real locus ``W`` of a connected real rational surface.

    An orientable rational real locus is a sphere or a torus, so higher
    orientable genus is rejected.
    """

    surface: ClosedSurface
    name: Optional[str] = None

    def __post_init__(self):
        if self.surface.orientable and self.surface.genus >= 2:
            raise InvalidInput(
                f"{self.surface} is not the real locus of a rational surface "
                "(orientable components are spheres or tori)",
                "decide",
            )

    def label(self) -> str:
        return self.name or str(self.surface)


class TargetDecision(str, Enum):
    DENSE = "dense"
    CLOSURE_NULL_HOMOTOPIC = "closure_null_homotopic"


def decide_approx_rational_target(
    source: ClosedSurface, target: RationalTargetDescriptor
) -> TargetDecision:
    """
    Closure of the regular maps ``V -> W`` inside the smooth maps.

    Dense, except from a torus to a sphere where the closure is exactly the
    null homotopic maps.
    """
    if source.is_torus and target.surface.is_sphere:
        return TargetDecision.CLOSURE_NULL_HOMOTOPIC
    return TargetDecision.DENSE


class CRationalKind(str, Enum):
    TORUS_MODEL = "torus-model"
    MAXIMAL_DEL_PEZZO_2 = "maximal-del-pezzo-degree-2"
    OTHER = "other"


@dataclass(frozen=True)
class CRationalSurfaceKind:
    """Declared classification of a ``C``-rational surface with its real components."""

    kind: CRationalKind
    components: tuple[SurfaceType, ...] = ()

    def __post_init__(self):
        try:
            kind = CRationalKind(self.kind)
        except ValueError:
            raise InvalidInput(f"unknown C-rational surface kind {self.kind!r}", "decide")
        components = tuple(SurfaceType(c) for c in self.components)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "components", components)
        if kind is CRationalKind.MAXIMAL_DEL_PEZZO_2 and components != (SurfaceType.SPHERE,) * 4:
            raise InvalidInput(
                "a maximal Del Pezzo surface of degree 2 has four spheres as real locus, "
                f"got {[c.value for c in components]}",
                "decide",
            )
        if kind is CRationalKind.TORUS_MODEL and components != (SurfaceType.TORUS,):
            raise InvalidInput(
                f"the torus model has a single torus as real locus, got {[c.value for c in components]}",
                "decide",
            )

    @classmethod
    def of_state(cls, kind, state: SurfaceState) -> "CRationalSurfaceKind":
        return cls(kind, tuple(c.topology for c in state.components))


def gamma_c_rational(kind: CRationalSurfaceKind) -> GroupInvariants:
    """
    Catalogue value of ``Gamma`` for a ``C``-rational surface.

    Examples
    --------
    .. code-block:: python

        torus = CRationalSurfaceKind(CRationalKind.TORUS_MODEL, (SurfaceType.TORUS,))
        str(gamma_c_rational(torus))    # 'Z'
    """
    if kind.kind is CRationalKind.TORUS_MODEL:
        return GroupInvariants(free_rank=1)
    if kind.kind is CRationalKind.MAXIMAL_DEL_PEZZO_2:
        return GroupInvariants(torsion_factors=(2,))
    return GroupInvariants()


def canonical_class_vanishes(state: SurfaceState) -> bool:
    """Whether ``K_X`` restricts to 0: every nonorientable component has even Euler characteristic."""
    return all(c.euler_characteristic % 2 == 0 for c in state.components if not c.orientable)


def spherical_density(
    state: SurfaceState, kind: Optional[CRationalSurfaceKind] = None
) -> Decision:
    """
    Whether every smooth map ``X(R) -> S^2`` can be approximated.

    That happens iff ``Gamma`` vanishes. For an orientable locus this means
    every component is a sphere, the maximal Del Pezzo surface of degree 2
    being the exception. A declared ``C``-rational kind takes the catalogue
    value instead of the computed group.
    """
    if kind is not None and state.c_rational:
        group = gamma_c_rational(kind)
        source = f"catalogue value for {kind.kind.value}"
    else:
        group = gamma(state).group
        source = "computed"
    if group.is_trivial:
        return Decision(True, (f"Γ = 0 ({source})",))
    reasons = [f"Γ = {group} ({source})"]
    if state.components and all(c.orientable for c in state.components):
        non_spherical = [f"M{c.id}" for c in state.components if c.topology is not SurfaceType.SPHERE]
        if non_spherical:
            reasons.append(f"non-spherical components: {', '.join(non_spherical)}")
    return Decision(False, tuple(reasons))
