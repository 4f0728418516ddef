"""
Real conic bundles ``x^2 + y^2 = g(z)`` and their birational modifications.

A :class:`ConicBundleSpec` describes the base curve, the sign pattern of
``g`` on each real circle of the base and an ordered list of elementary
transformations followed by blow-ups. :func:`realize` turns it into a
:class:`SurfaceState`, the list of real connected components with their
topology. Every operation returns a new state; states are never mutated.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Union

from .config import DEFAULT_REFINE_BITS
from .errors import InvalidInput, InvalidSpec
from .exactpoly import (
    INFINITY,
    GValidation,
    RationalFunction,
    sign_on_circle,
    validate_g,
)

logger = logging.getLogger(__name__)


class BaseKind(str, Enum):
    EXPLICIT_P1 = "p1"
    ABSTRACT = "abstract"


class SurfaceType(str, Enum):
    SPHERE = "sphere"
    TORUS = "torus"
    KLEIN = "klein"
    CROSS_SURFACE = "cross_surface"


class TransformationKind(str, Enum):
    ELM_REAL = "elm_real"
    ELM_CONJ_PAIR = "elm_conj_pair"
    BLOWUP_REAL = "blowup_real"
    BLOWUP_CONJ_PAIR = "blowup_conj_pair"

    @property
    def is_elm(self) -> bool:
        return self in (TransformationKind.ELM_REAL, TransformationKind.ELM_CONJ_PAIR)

    @property
    def is_real(self) -> bool:
        return self in (TransformationKind.ELM_REAL, TransformationKind.BLOWUP_REAL)


Issue = tuple[str, str]


@dataclass(frozen=True)
class BaseCurve:
    """
    The base curve ``B`` of the ruling.

    ``EXPLICIT_P1`` is the projective line, genus 0 with one real circle.
    ``ABSTRACT`` bases carry only their genus and number of real circles.
    """

    kind: BaseKind = BaseKind.ABSTRACT
    genus: int = 0
    real_circle_count: int = 1

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", BaseKind(self.kind))
        except ValueError:
            raise InvalidInput(f"unknown base kind {self.kind!r}", "bundle") from None

    @classmethod
    def explicit_p1(cls) -> "BaseCurve":
        return cls(BaseKind.EXPLICIT_P1, 0, 1)

    @property
    def c_rational(self) -> bool:
        return self.genus == 0

    def problems(self) -> list[Issue]:
        out = []
        if self.genus < 0:
            out.append(("base.genus", f"genus must be non-negative, got {self.genus}"))
        if self.real_circle_count < 0:
            out.append(
                (
                    "base.real_circles",
                    f"circle count must be non-negative, got {self.real_circle_count}",
                )
            )
        if self.kind is BaseKind.EXPLICIT_P1:
            if self.genus != 0 or self.real_circle_count != 1:
                out.append(("base", "an explicit P^1 base has genus 0 and one real circle"))
        elif self.real_circle_count > self.genus + 1:
            out.append(
                (
                    "base.real_circles",
                    f"a real curve of genus {self.genus} has at most "
                    f"{self.genus + 1} real circles, got {self.real_circle_count}",
                )
            )
        return out


@dataclass(frozen=True)
class CircleData:
    """Zero count of ``g`` on one real circle, and its sign when zero-free."""

    zeros: int
    sign: Optional[str] = None

    def problems(self, location: str) -> list[Issue]:
        out = []
        if self.zeros < 0:
            out.append((f"{location}.zeros", f"zero count must be non-negative, got {self.zeros}"))
        elif self.zeros % 2:
            out.append(
                (
                    f"{location}.zeros",
                    f"the number of real zeros of g on a circle is even, got {self.zeros}",
                )
            )
        if self.zeros == 0 and self.sign not in ("+", "-"):
            out.append((f"{location}.sign", "a zero-free circle needs sign '+' or '-'"))
        if self.zeros != 0 and self.sign is not None:
            out.append((f"{location}.sign", "sign is only given for zero-free circles"))
        return out


@dataclass(frozen=True)
class Transformation:
    kind: TransformationKind
    target: Optional[int] = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", TransformationKind(self.kind))
        except ValueError:
            raise InvalidInput(f"unknown transformation kind {self.kind!r}", "bundle") from None

    def problems(self, location: str) -> list[Issue]:
        if self.kind.is_real and self.target is None:
            return [(f"{location}.target", f"{self.kind.value} needs a target component")]
        if not self.kind.is_real and self.target is not None:
            return [(f"{location}.target", f"{self.kind.value} takes no target component")]
        return []

    def __str__(self) -> str:
        if self.target is None:
            return self.kind.value
        return f"{self.kind.value}(M{self.target})"


GData = Union[RationalFunction, tuple[CircleData, ...]]


@dataclass(frozen=True)
class ConicBundleSpec:
    """
    Declarative description of a real conic bundle.

    Parameters
    ----------
    base : BaseCurve
    g_data : RationalFunction or tuple of CircleData
        An explicit ``g`` for a ``P^1`` base, one :class:`CircleData` per real
        circle for an abstract base.
    transformations : tuple of Transformation
        All elementary transformations first, then all blow-ups.
    """

    base: BaseCurve
    g_data: GData
    transformations: tuple[Transformation, ...] = ()

    def __post_init__(self):
        if not isinstance(self.g_data, RationalFunction):
            object.__setattr__(self, "g_data", tuple(self.g_data))
        object.__setattr__(self, "transformations", tuple(self.transformations))

    @property
    def explicit(self) -> bool:
        return isinstance(self.g_data, RationalFunction)

    def problems(self, refine_bits: int = DEFAULT_REFINE_BITS) -> list[Issue]:
        """Every rule the spec breaks, as ``(location, message)`` pairs."""
        out = list(self.base.problems())
        if self.base.kind is BaseKind.EXPLICIT_P1:
            if not self.explicit:
                out.append(("g", "an explicit P^1 base needs an explicit g"))
            elif self.g_data.numerator.is_zero:
                out.append(("g.explicit.numerator", "g must be nonzero"))
            else:
                validation = validate_g(self.g_data, refine_bits)
                out.extend(("g.explicit", msg) for msg in validation.failures())
                if validation.is_valid and validation.zero_count % 2:
                    # unreachable for a genuine rational function
                    out.append(("g.explicit", "odd number of real zeros on the circle"))
        else:
            if self.explicit:
                out.append(("g", "an abstract base takes per-circle zero data"))
            else:
                if len(self.g_data) != self.base.real_circle_count:
                    out.append(
                        (
                            "g.abstract",
                            f"expected {self.base.real_circle_count} circle entries, "
                            f"got {len(self.g_data)}",
                        )
                    )
                for i, circle in enumerate(self.g_data):
                    out.extend(circle.problems(f"g.abstract[{i}]"))
        seen_blowup = False
        for i, t in enumerate(self.transformations):
            loc = f"transformations[{i}]"
            out.extend(t.problems(loc))
            if t.kind.is_elm and seen_blowup:
                out.append(
                    (
                        loc,
                        "elementary transformation after a blow-up; the pipeline order "
                        "is minimal model, then elms, then blow-ups",
                    )
                )
            seen_blowup = seen_blowup or not t.kind.is_elm
        return out

    def validate(self, refine_bits: int = DEFAULT_REFINE_BITS) -> None:
        issues = self.problems(refine_bits)
        if issues:
            clauses = [f"{loc}: {msg}" for loc, msg in issues]
            raise InvalidSpec("; ".join(clauses), clauses=clauses, module="bundle")


@dataclass(frozen=True)
class RealComponent:
    """
    One connected component ``M`` of the real locus.

    ``crosscaps`` is 0 for orientable components and the number of
    crosscaps ``q`` otherwise (2 for a Klein bottle).
    """

    id: int
    topology: SurfaceType
    crosscaps: int = 0
    dominates_circle: bool = False
    real_elm_count: int = 0
    has_real_exceptional: bool = False
    circle: int = 1
    label: str = ""

    def __post_init__(self):
        t = self.topology
        if t in (SurfaceType.SPHERE, SurfaceType.TORUS) and self.crosscaps:
            raise InvalidInput(f"orientable component M{self.id} with crosscaps", "bundle")
        if t is SurfaceType.KLEIN and self.crosscaps != 2:
            raise InvalidInput(f"Klein component M{self.id} needs 2 crosscaps", "bundle")
        if t is SurfaceType.CROSS_SURFACE and self.crosscaps < 1:
            raise InvalidInput(f"cross surface M{self.id} needs q >= 1", "bundle")
        if t in (SurfaceType.TORUS, SurfaceType.KLEIN) and not self.dominates_circle:
            raise InvalidInput(f"{t.value} component M{self.id} must dominate its circle", "bundle")
        if self.dominates_circle and (
            t is SurfaceType.SPHERE or (t is SurfaceType.CROSS_SURFACE and self.crosscaps <= 2)
        ):
            raise InvalidInput(f"M{self.id} cannot dominate a circle", "bundle")
        if self.has_real_exceptional and self.orientable:
            raise InvalidInput(f"M{self.id} carries a real (-1)-curve but is orientable", "bundle")

    @property
    def orientable(self) -> bool:
        return self.topology in (SurfaceType.SPHERE, SurfaceType.TORUS)

    @property
    def euler_characteristic(self) -> int:
        if self.topology is SurfaceType.SPHERE:
            return 2
        if self.topology is SurfaceType.TORUS:
            return 0
        return 2 - self.crosscaps

    @property
    def is_klein_bottle(self) -> bool:
        return self.topology is SurfaceType.KLEIN or (
            self.topology is SurfaceType.CROSS_SURFACE and self.crosscaps == 2
        )

    @property
    def in_section_sum(self) -> bool:
        """Whether this was a dominating Klein component once all elms were applied."""
        return self.dominates_circle and self.real_elm_count % 2 == 1

    def describe(self) -> str:
        if self.topology is SurfaceType.SPHERE:
            return "sphere"
        if self.topology is SurfaceType.TORUS:
            return "torus"
        if self.topology is SurfaceType.KLEIN:
            return "Klein bottle"
        if self.crosscaps == 1:
            return "real projective plane"
        if self.crosscaps == 2:
            return "Klein bottle (non-dominating)"
        return f"N{self.crosscaps}"


@dataclass(frozen=True)
class Census:
    s: int
    t: int
    k: int
    k_prime: int
    orientable_ids: tuple[int, ...] = ()
    nonorientable_ids: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "t": self.t,
            "k": self.k,
            "k_prime": self.k_prime,
            "orientable_ids": list(self.orientable_ids),
            "nonorientable_ids": list(self.nonorientable_ids),
        }


@dataclass(frozen=True)
class SurfaceState:
    """
    The real locus of a conic bundle after some transformations.

    ``minimal`` is true until the first blow-up. ``history`` keeps one entry
    per applied transformation; ``assumptions`` records the steps whose
    effect is a modelling choice rather than a proven rule.
    """

    components: tuple[RealComponent, ...]
    base: BaseCurve
    minimal: bool = True
    history: tuple[str, ...] = ()
    assumptions: tuple[str, ...] = field(default=())

    def __post_init__(self):
        ids = [c.id for c in self.components]
        if len(set(ids)) != len(ids):
            raise InvalidInput(f"duplicate component ids {ids}", "bundle")
        if self.minimal and any(c.topology is SurfaceType.CROSS_SURFACE for c in self.components):
            raise InvalidInput("a minimal state cannot carry blown-up components", "bundle")

    @property
    def c_rational(self) -> bool:
        return self.base.c_rational

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(c.id for c in self.components)

    def component(self, component_id: int) -> RealComponent:
        for c in self.components:
            if c.id == component_id:
                return c
        raise InvalidSpec(
            f"no real component M{component_id} (components: {list(self.ids)})",
            clauses=[f"missing target M{component_id}"],
            module="bundle",
        )

    def _with(self, new: RealComponent, entry: str, **changes) -> "SurfaceState":
        components = tuple(new if c.id == new.id else c for c in self.components)
        return replace(self, components=components, history=self.history + (entry,), **changes)


def _positive_arcs(g: RationalFunction, validation: GValidation) -> list[str]:
    finite = validation.finite_zeros
    if not finite and not validation.zero_at_infinity:
        return ["whole circle"] if sign_on_circle(g, 0) > 0 else []

    def near(iv) -> str:
        return "∞" if iv.at_infinity else f"{iv.approximate():.6g}"

    # one rational sample strictly inside every arc cut out by the zeros
    arcs = [
        (f"({near(a)}, {near(b)})", a.high) for a, b in zip(finite, finite[1:])
    ]
    if validation.zero_at_infinity:
        arcs.append((f"({near(finite[-1])}, ∞)", finite[-1].high))
        arcs.append((f"(∞, {near(finite[0])})", finite[0].low))
    else:
        arcs.append((f"({near(finite[-1])}, ∞, {near(finite[0])})", INFINITY))
    return [label for label, sample in arcs if sign_on_circle(g, sample) > 0]


def build_minimal_surface(
    spec: ConicBundleSpec, refine_bits: int = DEFAULT_REFINE_BITS
) -> SurfaceState:
    """
    Real locus of the minimal model ``X^g`` (transformations are ignored).

    Over each real circle, ``2m > 0`` zeros give ``m`` spheres (one per arc
    where ``g > 0``), a zero-free circle with ``g > 0`` gives a torus and one
    with ``g < 0`` gives nothing.

    Raises
    ------
    InvalidSpec
        With every failing clause when the spec is not valid.

    Examples
    --------
    .. code-block:: python

        spec = ConicBundleSpec(
            BaseCurve(genus=1, real_circle_count=2),
            (CircleData(4), CircleData(0, "+")),
        )
        [c.topology.value for c in build_minimal_surface(spec).components]
        # ['sphere', 'sphere', 'torus']
    """
    spec.validate(refine_bits)
    components = []

    def add(topology, circle, label):
        dominating = topology is SurfaceType.TORUS
        components.append(
            RealComponent(
                id=len(components) + 1,
                topology=topology,
                dominates_circle=dominating,
                circle=circle,
                label=label,
            )
        )

    if spec.explicit:
        validation = validate_g(spec.g_data, refine_bits)
        arcs = _positive_arcs(spec.g_data, validation)
        if arcs == ["whole circle"]:
            add(SurfaceType.TORUS, 1, "whole circle")
        else:
            for label in arcs:
                add(SurfaceType.SPHERE, 1, f"arc {label}")
    else:
        for index, circle in enumerate(spec.g_data, start=1):
            if circle.zeros:
                for arc in range(1, circle.zeros // 2 + 1):
                    add(SurfaceType.SPHERE, index, f"circle {index}, positive arc {arc}")
            elif circle.sign == "+":
                add(SurfaceType.TORUS, index, f"circle {index}")

    state = SurfaceState(components=tuple(components), base=spec.base)
    logger.debug("minimal model: %s", [c.describe() for c in state.components])
    return state


def apply_elm(state: SurfaceState, t: Transformation) -> SurfaceState:
    """
    Apply an elementary transformation to a minimal state.

    A real elm flips a torus into a dominating Klein component and back;
    spheres keep their topology. A conjugate pair leaves the real locus
    untouched and is only logged.
    """
    if not t.kind.is_elm:
        raise InvalidInput(f"{t} is not an elementary transformation", "bundle")
    if not state.minimal:
        raise InvalidSpec(
            f"{t} after a blow-up breaks the pipeline order",
            clauses=["elms must precede blow-ups"],
            module="bundle",
        )
    if t.kind is TransformationKind.ELM_CONJ_PAIR:
        return replace(state, history=state.history + (f"{t}: real locus unchanged",))

    comp = state.component(t.target)
    count = comp.real_elm_count + 1
    assumptions = state.assumptions
    if comp.topology is SurfaceType.SPHERE:
        new = replace(comp, real_elm_count=count)
    elif comp.topology is SurfaceType.TORUS:
        new = replace(comp, topology=SurfaceType.KLEIN, crosscaps=2, real_elm_count=count)
    elif comp.topology is SurfaceType.KLEIN:
        new = replace(comp, topology=SurfaceType.TORUS, crosscaps=0, real_elm_count=count)
        note = f"{t}: Klein -> torus flip assumed from the parity of real elm centers"
        logger.warning(note)
        assumptions = assumptions + (note,)
    else:
        raise InvalidSpec(f"{t} targets a blown-up component", module="bundle")
    return state._with(
        new, f"{t}: {comp.describe()} -> {new.describe()}", assumptions=assumptions
    )


def apply_blowup(state: SurfaceState, t: Transformation) -> SurfaceState:
    """
    Blow up a real point (adds a crosscap) or a conjugate pair of points.

    Sphere becomes ``RP^2``, torus and Klein bottle become ``N3``, and ``Nq``
    becomes ``N(q+1)``. Dominance over the base circle is preserved.
    """
    if t.kind.is_elm:
        raise InvalidInput(f"{t} is not a blow-up", "bundle")
    if t.kind is TransformationKind.BLOWUP_CONJ_PAIR:
        return replace(
            state, minimal=False, history=state.history + (f"{t}: real locus unchanged",)
        )
    comp = state.component(t.target)
    handles = {SurfaceType.SPHERE: 0, SurfaceType.TORUS: 2, SurfaceType.KLEIN: 2}
    q = handles.get(comp.topology, comp.crosscaps) + 1
    new = replace(
        comp,
        topology=SurfaceType.CROSS_SURFACE,
        crosscaps=q,
        has_real_exceptional=True,
    )
    return state._with(new, f"{t}: {comp.describe()} -> {new.describe()}", minimal=False)


def realize(spec: ConicBundleSpec, refine_bits: int = DEFAULT_REFINE_BITS) -> SurfaceState:
    """Minimal model, then every elm, then every blow-up."""
    state = build_minimal_surface(spec, refine_bits)
    for t in spec.transformations:
        state = apply_elm(state, t) if t.kind.is_elm else apply_blowup(state, t)
    return state


def component_census(state: SurfaceState) -> Census:
    """
    Count spheres ``s``, tori ``t``, Klein bottles ``k`` and dominating
    Klein components ``k'``.

    Examples
    --------
    .. code-block:: python

        census = component_census(state)
        census.s, census.t, census.k, census.k_prime    # (2, 1, 0, 0)
    """
    comps = state.components
    return Census(
        s=sum(c.topology is SurfaceType.SPHERE for c in comps),
        t=sum(c.topology is SurfaceType.TORUS for c in comps),
        k=sum(c.is_klein_bottle for c in comps),
        k_prime=sum(c.topology is SurfaceType.KLEIN and c.dominates_circle for c in comps),
        orientable_ids=tuple(c.id for c in comps if c.orientable),
        nonorientable_ids=tuple(c.id for c in comps if not c.orientable),
    )
