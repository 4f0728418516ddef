import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from real_conic_bundles.bundle import (
    BaseCurve,
    BaseKind,
    CircleData,
    ConicBundleSpec,
    RealComponent,
    SurfaceType,
    Transformation,
    TransformationKind,
    apply_blowup,
    apply_elm,
    build_minimal_surface,
    component_census,
    realize,
)
from real_conic_bundles.errors import InvalidInput, InvalidSpec
from real_conic_bundles.exactpoly import Polynomial, RationalFunction, sign_on_circle, validate_g

from conftest import abstract_spec

ELM = Transformation(TransformationKind.ELM_REAL, 3)


def topologies(state):
    return [c.topology for c in state.components]


@pytest.mark.parametrize(
    "genus,circles,expected",
    [
        (1, ["+"], [SurfaceType.TORUS]),
        (1, [4], [SurfaceType.SPHERE, SurfaceType.SPHERE]),
        (2, ["-", 2], [SurfaceType.SPHERE]),
        (1, [4, "+"], [SurfaceType.SPHERE, SurfaceType.SPHERE, SurfaceType.TORUS]),
        (0, ["-"], []),
    ],
)
def test_build_minimal_surface_abstract(genus, circles, expected):
    state = build_minimal_surface(abstract_spec(genus, circles))
    assert topologies(state) == expected
    assert state.minimal
    assert [c.id for c in state.components] == list(range(1, len(expected) + 1))


def test_build_minimal_surface_records_circles():
    state = build_minimal_surface(abstract_spec(2, ["-", 2]))
    assert state.components[0].circle == 2
    assert not state.components[0].dominates_circle


def test_build_minimal_surface_explicit(worked_g):
    spec = ConicBundleSpec(BaseCurve.explicit_p1(), worked_g)
    state = build_minimal_surface(spec)
    assert topologies(state) == [SurfaceType.SPHERE, SurfaceType.SPHERE]
    assert any("∞" in c.label for c in state.components)


@pytest.mark.parametrize(
    "coefficients,expected",
    [
        (((1,), (1,)), [SurfaceType.TORUS]),
        (((-1,), (1,)), []),
        (((-1, 0, 1), (1, 0, 1)), [SurfaceType.SPHERE]),
        (((0, 1), (1, 0, 1)), [SurfaceType.SPHERE]),
        (((0, -1, 0, 1), (1, 0, 0, 0, 1)), [SurfaceType.SPHERE, SurfaceType.SPHERE]),
    ],
)
def test_build_minimal_surface_explicit_cases(coefficients, expected):
    spec = ConicBundleSpec(BaseCurve.explicit_p1(), RationalFunction.from_coefficients(*coefficients))
    assert topologies(build_minimal_surface(spec)) == expected


def test_odd_zero_count_is_rejected():
    with pytest.raises(InvalidSpec) as err:
        build_minimal_surface(abstract_spec(1, [3]))
    assert any("even" in clause for clause in err.value.clauses)


def test_arc_labels_use_exact_rational_zeros():
    # z (z - 2) / (z^2 + 1) is positive from 2 through infinity to 0
    g = RationalFunction.from_coefficients((0, -2, 1), (1, 0, 1))
    (sphere,) = build_minimal_surface(ConicBundleSpec(BaseCurve.explicit_p1(), g)).components
    assert sphere.label == "arc (2, ∞, 0)"


def test_invalid_explicit_g_is_rejected():
    spec = ConicBundleSpec(BaseCurve.explicit_p1(), RationalFunction.from_coefficients((1,), (0, 1)))
    with pytest.raises(InvalidSpec) as err:
        build_minimal_surface(spec)
    assert any("pole" in clause for clause in err.value.clauses)


@pytest.mark.parametrize(
    "base,issue",
    [
        (BaseCurve(genus=1, real_circle_count=3), "at most 2 real circles"),
        (BaseCurve(genus=-1, real_circle_count=0), "non-negative"),
        (BaseCurve(BaseKind.EXPLICIT_P1, genus=2, real_circle_count=1), "genus 0"),
    ],
)
def test_base_curve_problems(base, issue):
    assert any(issue in msg for _, msg in base.problems())


def test_unknown_kinds_are_rejected():
    with pytest.raises(InvalidInput):
        BaseCurve("sphere")
    with pytest.raises(InvalidInput):
        Transformation("flip", 1)


def test_circle_sign_rules():
    assert CircleData(0).problems("c")
    assert CircleData(2, "+").problems("c")
    assert not CircleData(0, "-").problems("c")


def test_elm_after_blowup_is_rejected():
    spec = abstract_spec(1, [2, "+"], [("blowup_real", 1), ("elm_real", 2)])
    issues = spec.problems()
    assert any("pipeline order" in msg for _, msg in issues)
    with pytest.raises(InvalidSpec):
        realize(spec)


def test_transformation_target_rules():
    assert Transformation(TransformationKind.ELM_REAL).problems("t")
    assert Transformation(TransformationKind.ELM_CONJ_PAIR, 1).problems("t")
    assert str(Transformation(TransformationKind.ELM_REAL, 3)) == "elm_real(M3)"


@pytest.fixture
def genus1_state():
    return build_minimal_surface(abstract_spec(1, [4, "+"]))


def test_elm_on_torus_gives_dominating_klein(genus1_state):
    state = apply_elm(genus1_state, ELM)
    klein = state.component(3)
    assert klein.topology is SurfaceType.KLEIN and klein.dominates_circle
    assert klein.in_section_sum


def test_elm_twice_restores_the_torus(genus1_state):
    state = apply_elm(apply_elm(genus1_state, ELM), ELM)
    assert state.component(3).topology is SurfaceType.TORUS
    assert state.assumptions


def test_elm_on_sphere_keeps_the_sphere(genus1_state):
    state = apply_elm(genus1_state, Transformation(TransformationKind.ELM_REAL, 1))
    assert state.component(1).topology is SurfaceType.SPHERE
    assert state.component(1).real_elm_count == 1
    assert not state.component(1).in_section_sum


def test_conjugate_pairs_leave_the_real_locus_alone(genus1_state):
    for kind in (TransformationKind.ELM_CONJ_PAIR, TransformationKind.BLOWUP_CONJ_PAIR):
        state = (apply_elm if kind.is_elm else apply_blowup)(genus1_state, Transformation(kind))
        assert state.components == genus1_state.components
        assert len(state.history) == 1
    assert not apply_blowup(genus1_state, Transformation(TransformationKind.BLOWUP_CONJ_PAIR)).minimal


def test_missing_target_is_rejected(genus1_state):
    with pytest.raises(InvalidSpec):
        apply_elm(genus1_state, Transformation(TransformationKind.ELM_REAL, 9))
    with pytest.raises(InvalidSpec):
        apply_blowup(genus1_state, Transformation(TransformationKind.BLOWUP_REAL, 9))


def test_elm_on_non_minimal_state_is_rejected(genus1_state):
    state = apply_blowup(genus1_state, Transformation(TransformationKind.BLOWUP_REAL, 1))
    with pytest.raises(InvalidSpec):
        apply_elm(state, ELM)


@pytest.mark.parametrize(
    "target,times,crosscaps,dominating",
    [(1, 1, 1, False), (1, 2, 2, False), (3, 1, 3, True), (3, 2, 4, True)],
)
def test_blowups_add_crosscaps(genus1_state, target, times, crosscaps, dominating):
    state = genus1_state
    for _ in range(times):
        state = apply_blowup(state, Transformation(TransformationKind.BLOWUP_REAL, target))
    comp = state.component(target)
    assert comp.topology is SurfaceType.CROSS_SURFACE
    assert comp.crosscaps == crosscaps
    assert comp.has_real_exceptional
    assert comp.dominates_circle is dominating
    assert comp.euler_characteristic == 2 - crosscaps
    assert not state.minimal


def test_blowup_of_dominating_klein():
    state = realize(abstract_spec(1, ["+"], [("elm_real", 1), ("blowup_real", 1)]))
    comp = state.component(1)
    assert comp.crosscaps == 3 and comp.in_section_sum and comp.dominates_circle


def test_census_examples(genus1_state):
    census = component_census(genus1_state)
    assert (census.s, census.t, census.k, census.k_prime) == (2, 1, 0, 0)
    census = component_census(apply_elm(genus1_state, ELM))
    assert (census.s, census.t, census.k, census.k_prime) == (2, 0, 1, 1)
    assert census.nonorientable_ids == (3,)


def test_census_sphere_blown_up_twice():
    state = realize(abstract_spec(0, [2], [("blowup_real", 1), ("blowup_real", 1)]))
    census = component_census(state)
    assert (census.s, census.k, census.k_prime) == (0, 1, 0)
    assert state.component(1).is_klein_bottle


def test_realize_keeps_history():
    spec = abstract_spec(
        2, [2, "+", "+"], [("elm_real", 2), ("elm_conj_pair", None), ("blowup_real", 1)]
    )
    state = realize(spec)
    assert len(state.history) == 3
    assert topologies(state) == [SurfaceType.CROSS_SURFACE, SurfaceType.KLEIN, SurfaceType.TORUS]


def test_real_component_invariants():
    with pytest.raises(InvalidInput):
        RealComponent(1, SurfaceType.TORUS)
    with pytest.raises(InvalidInput):
        RealComponent(1, SurfaceType.SPHERE, dominates_circle=True)
    with pytest.raises(InvalidInput):
        RealComponent(1, SurfaceType.SPHERE, has_real_exceptional=True)
    with pytest.raises(InvalidInput):
        RealComponent(1, SurfaceType.KLEIN, crosscaps=3, dominates_circle=True)


@pytest.mark.parametrize("n", range(21))
def test_elm_parity_soak(n):
    state = build_minimal_surface(abstract_spec(1, ["+"]))
    for _ in range(n):
        state = apply_elm(state, Transformation(TransformationKind.ELM_REAL, 1))
    expected = SurfaceType.KLEIN if n % 2 else SurfaceType.TORUS
    assert state.component(1).topology is expected
    assert state.component(1).dominates_circle


@st.composite
def explicit_g(draw):
    roots = draw(st.lists(st.integers(-6, 6), unique=True, max_size=5))
    shifts = draw(st.lists(st.integers(1, 9), max_size=2))
    numerator = Polynomial.from_roots(roots, draw(st.sampled_from([1, -1])))
    for c in shifts:
        numerator = numerator * Polynomial((c, 0, 1))
    denominator = Polynomial((1,))
    for _ in range((numerator.degree + 1) // 2):
        denominator = denominator * Polynomial((draw(st.integers(1, 30)), 0, 1))
    return RationalFunction(numerator, denominator)


@settings(max_examples=50, deadline=None)
@given(explicit_g())
def test_explicit_g_matches_the_abstract_spec(g):
    explicit = build_minimal_surface(ConicBundleSpec(BaseCurve.explicit_p1(), g))
    zeros = validate_g(g).zero_count
    circle = zeros if zeros else ("+" if sign_on_circle(g, 0) > 0 else "-")
    abstract = build_minimal_surface(abstract_spec(0, [circle]))
    assert [(c.topology, c.circle) for c in explicit.components] == [
        (c.topology, c.circle) for c in abstract.components
    ]
    assert component_census(explicit) == component_census(abstract)
