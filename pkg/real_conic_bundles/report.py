"""
Analysis reports.

:func:`analyze` runs the whole pipeline on a parsed document and returns a
:class:`Report`, which renders either as text or as deterministic JSON.
Directory runs produce a polars summary frame with one row per document.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import polars as pl
from tqdm.auto import tqdm

from .bundle import Census, RealComponent, SurfaceState, build_minimal_surface, component_census, realize
from .cohom import GammaReport, GroupInvariants, gamma, lattice_of, restriction_table
from .config import AnalysisOptions
from .decide import (
    ClosedSurface,
    CRationalSurfaceKind,
    Decision,
    TargetDecision,
    canonical_class_vanishes,
    decide_approx_rational_target,
    decide_approx_sphere,
    decide_by_criterion,
    gamma_c_rational,
    spherical_density,
)
from .errors import ConicBundleError, InvalidInput, InvalidSpec, OracleDisagreement, OracleInconclusive
from .exactpoly import squarefree_part
from .io import SpecDocument, read_spec
from .oracle import ComponentCount, NumericRootCount, confirm_components, confirm_root_count

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_MISMATCH = 3
EXIT_ORACLE = 4

C_RATIONAL_CAVEAT = (
    "the base has genus 0, so X is C-rational: algebraic classes beyond the generator "
    "list may exist and Gamma is computed from the generators only; see the C-rational "
    "catalogue (torus model Z, maximal Del Pezzo of degree 2 Z/2, otherwise 0)"
)


def exit_code_for(error: BaseException) -> int:
    """Process exit code for an error raised while analysing a document."""
    if isinstance(error, (OracleDisagreement, OracleInconclusive)):
        return EXIT_ORACLE
    if isinstance(error, (InvalidSpec, InvalidInput)):
        return EXIT_INVALID
    return EXIT_MISMATCH


@dataclass(frozen=True)
class MapResult:
    name: str
    decision: Decision
    criterion: Decision

    @property
    def match(self) -> bool:
        return self.decision.approximable == self.criterion.approximable

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            **self.decision.to_dict(),
            "criterion": self.criterion.approximable,
            "match": self.match,
        }


@dataclass(frozen=True)
class TargetResult:
    name: str
    source: Optional[str]
    decision: Optional[TargetDecision]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "source": self.source,
            "decision": None if self.decision is None else self.decision.value,
        }


@dataclass(frozen=True)
class Report:
    """Everything :func:`analyze` learns about one document."""

    state: SurfaceState
    census: Census
    gamma: GammaReport
    generators: tuple[str, ...]
    canonical_class_vanishes: bool
    spherical_density: Decision
    maps: tuple[MapResult, ...] = ()
    targets: tuple[TargetResult, ...] = ()
    catalogue: Optional[GroupInvariants] = None
    table_problems: tuple[str, ...] = ()
    warnings: tuple[str, ...] = field(default=())

    @property
    def mismatches(self) -> list[str]:
        out = list(self.table_problems)
        if self.gamma.matches is False:
            out.append(f"Gamma {self.gamma.group} differs from closed form {self.gamma.predicted}")
        for m in self.maps:
            if not m.match:
                out.append(f"map {m.name}: membership and degree criterion disagree")
        return out

    @property
    def exit_code(self) -> int:
        return EXIT_MISMATCH if self.mismatches else EXIT_OK

    def component_table(self) -> pl.DataFrame:
        """One row per real component."""
        return component_frame(self.state.components)

    def map_result(self, name: str) -> MapResult:
        for m in self.maps:
            if m.name == name:
                return m
        raise InvalidInput(f"no map named {name!r} (maps: {[m.name for m in self.maps]})", "report")

    def to_dict(self) -> dict:
        return {
            "census": {k: v for k, v in self.census.to_dict().items() if "_ids" not in k},
            "components": self.component_table().to_dicts(),
            "gamma": self.gamma.to_dict(),
            "c_rational_catalogue": None if self.catalogue is None else self.catalogue.to_dict(),
            "algebraic_generators": list(self.generators),
            "canonical_class_vanishes": self.canonical_class_vanishes,
            "spherical_density": self.spherical_density.to_dict(),
            "maps": [m.to_dict() for m in self.maps],
            "rational_targets": [t.to_dict() for t in self.targets],
            "history": list(self.state.history),
            "warnings": list(self.warnings),
            "mismatches": self.mismatches,
            "exit_code": self.exit_code,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def render(self) -> str:
        c = self.census
        lines = [f"census: s={c.s} t={c.t} k={c.k} k'={c.k_prime}"]
        if self.state.components:
            with pl.Config(tbl_rows=-1, tbl_hide_dataframe_shape=True):
                lines.append(str(self.component_table()))
        predicted = "none" if self.gamma.predicted is None else str(self.gamma.predicted)
        lines.append(f"Gamma: {self.gamma.group}  (closed form: {predicted}; {self.gamma.rule})")
        if self.catalogue is not None:
            lines.append(f"C-rational catalogue: {self.catalogue}")
        lines.append("H^2_C-alg generated by: " + (", ".join(self.generators) or "0"))
        lines.append(f"K_X restricts to 0: {'yes' if self.canonical_class_vanishes else 'no'}")
        lines.append(
            "every map to S^2 approximable: "
            + ("yes" if self.spherical_density.approximable else "no")
        )
        for m in self.maps:
            verdict = "approximable" if m.decision.approximable else "not approximable"
            lines.append(f"map {m.name}: {verdict}")
            lines.extend(f"  - {r}" for r in m.decision.reasons)
        for t in self.targets:
            verdict = "undecided" if t.decision is None else t.decision.value
            lines.append(f"rational target {t.name}: {verdict}")
        for step in self.state.history:
            lines.append(f"step: {step}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        for m in self.mismatches:
            lines.append(f"MISMATCH: {m}")
        return "\n".join(lines) + "\n"


def component_frame(components: tuple[RealComponent, ...]) -> pl.DataFrame:
    return pl.DataFrame(
        {
            "id": [c.id for c in components],
            "topology": [c.describe() for c in components],
            "crosscaps": [c.crosscaps for c in components],
            "euler_characteristic": [c.euler_characteristic for c in components],
            "orientable": [c.orientable for c in components],
            "dominating": [c.dominates_circle for c in components],
            "circle": [c.circle for c in components],
            "real_elms": [c.real_elm_count for c in components],
            "real_exceptional": [c.has_real_exceptional for c in components],
            "label": [c.label for c in components],
        },
        schema={
            "id": pl.Int64,
            "topology": pl.String,
            "crosscaps": pl.Int64,
            "euler_characteristic": pl.Int64,
            "orientable": pl.Boolean,
            "dominating": pl.Boolean,
            "circle": pl.Int64,
            "real_elms": pl.Int64,
            "real_exceptional": pl.Boolean,
            "label": pl.String,
        },
    )


def _warnings(state: SurfaceState, vanishes: bool) -> list[str]:
    out = []
    if state.c_rational:
        out.append(C_RATIONAL_CAVEAT)
    if not state.components:
        out.append("the real locus is empty")
    if not vanishes:
        odd = [f"M{c.id}" for c in state.components if not c.orientable and c.euler_characteristic % 2]
        out.append(f"K_X does not restrict to 0: odd Euler characteristic on {', '.join(odd)}")
    if (
        state.c_rational
        and len(state.components) == 1
        and state.components[0].is_klein_bottle
    ):
        out.append("a real rational Klein bottle is RP^2 blown up at one real point")
    out.extend(state.assumptions)
    return out


def analyze(doc: SpecDocument, options: Optional[AnalysisOptions] = None) -> Report:
    """
    Run the full pipeline on a parsed document.

    Parameters
    ----------
    doc : SpecDocument
        Output of :func:`real_conic_bundles.io.parse_spec`.
    options : AnalysisOptions, optional

    Returns
    -------
    Report

    Examples
    --------

    .. code-block:: python

        report = analyze(read_spec("examples/genus1.json"))
        print(report.render())

    .. code-block:: text

        census: s=2 t=1 k=0 k'=0
        ...
        Gamma: Z  (closed form: Z; minimal conic bundle: Z^t ⊕ (Z/2)^max(k-1,0))
    """
    options = options or AnalysisOptions()
    state = realize(doc.spec, options.refine_bits)
    lattice = lattice_of(state)
    table = restriction_table(state)
    vanishes = canonical_class_vanishes(state)
    warnings = _warnings(state, vanishes)

    kind = None
    catalogue = None
    if doc.c_rational_kind is not None:
        if state.c_rational:
            kind = CRationalSurfaceKind.of_state(doc.c_rational_kind, state)
            catalogue = gamma_c_rational(kind)
        else:
            warnings.append("c_rational_kind is ignored: the base has positive genus")

    maps = tuple(
        MapResult(f.label(), decide_approx_sphere(state, f), decide_by_criterion(state, f))
        for f in doc.maps
    )

    targets = []
    if doc.rational_targets and len(state.components) != 1:
        warnings.append(
            f"rational targets need a connected real locus, found {len(state.components)} "
            "component(s); no target decided"
        )
    for w in doc.rational_targets:
        if len(state.components) == 1:
            source = ClosedSurface.of_component(state.components[0])
            targets.append(TargetResult(w.label(), str(source), decide_approx_rational_target(source, w)))
        else:
            targets.append(TargetResult(w.label(), None, None))

    report = Report(
        state=state,
        census=component_census(state),
        gamma=gamma(state),
        generators=tuple(lattice.describe(x) for x in table.generators()),
        canonical_class_vanishes=vanishes,
        spherical_density=spherical_density(state, kind),
        maps=maps,
        targets=tuple(targets),
        catalogue=catalogue,
        table_problems=tuple(table.check(state.minimal)),
        warnings=tuple(warnings),
    )
    for m in report.mismatches:
        logger.warning("internal mismatch: %s", m)
    return report


@dataclass(frozen=True)
class OracleCheck:
    roots: NumericRootCount
    components: ComponentCount

    def to_dict(self) -> dict:
        return {
            "real_zeros": self.roots.count,
            "root_grid": self.roots.samples,
            "spheres": self.components.spheres,
            "tori": self.components.tori,
            "component_grid": self.components.samples,
            "agrees": True,
        }

    def render(self) -> str:
        return (
            f"oracle agrees: {self.roots.count} finite real zero(s) on a {self.roots.samples}-point grid, "
            f"{self.components.spheres} sphere(s) and {self.components.tori} torus/tori on a "
            f"{self.components.samples}-point grid\n"
        )


def oracle_check(doc: SpecDocument, options: Optional[AnalysisOptions] = None) -> OracleCheck:
    """Confirm the exact minimal model of an explicit ``g`` with the float oracle."""
    options = options or AnalysisOptions()
    spec = doc.spec
    if not spec.explicit:
        raise InvalidInput("oracle-check needs an explicit g", "report")
    g = spec.g_data
    state = build_minimal_surface(spec, options.refine_bits)
    roots = confirm_root_count(
        squarefree_part(g.numerator), options.oracle_samples, options.oracle_max_samples
    )
    components = confirm_components(g, state, options.oracle_samples, options.oracle_max_samples)
    return OracleCheck(roots, components)


SUMMARY_SCHEMA = {
    "file": pl.String,
    "s": pl.Int64,
    "t": pl.Int64,
    "k": pl.Int64,
    "k_prime": pl.Int64,
    "gamma": pl.String,
    "predicted": pl.String,
    "match": pl.Boolean,
    "exit_code": pl.Int64,
    "error": pl.String,
}


def analyze_file(path: Union[str, Path], options: Optional[AnalysisOptions] = None) -> dict:
    """Summary row for one document; errors become rows, not exceptions."""
    row = dict.fromkeys(SUMMARY_SCHEMA)
    row["file"] = Path(path).name
    try:
        report = analyze(read_spec(path, (options or AnalysisOptions()).refine_bits), options)
    except ConicBundleError as e:
        row.update(exit_code=exit_code_for(e), error=str(e))
        return row
    except (OSError, UnicodeDecodeError) as e:
        logger.warning("cannot read %s: %s", path, e)
        row.update(exit_code=EXIT_INVALID, error=f"cannot read: {e}")
        return row
    c = report.census
    row.update(
        s=c.s,
        t=c.t,
        k=c.k,
        k_prime=c.k_prime,
        gamma=str(report.gamma.group),
        predicted=None if report.gamma.predicted is None else str(report.gamma.predicted),
        match=report.gamma.matches,
        exit_code=report.exit_code,
    )
    return row


def analyze_directory(
    directory: Union[str, Path],
    options: Optional[AnalysisOptions] = None,
) -> pl.DataFrame:
    """
    Analyze every ``*.json`` document of a directory.

    Files are processed in name order; with ``options.jobs > 1`` they are
    spread over worker processes, each file analysed in isolation.

    Examples
    --------
    .. code-block:: python

        summary = analyze_directory("specs/", AnalysisOptions(jobs=4))
        summary.conic_ext.failures()
    """
    options = options or AnalysisOptions()
    paths = sorted(p for p in Path(directory).glob("*.json") if p.is_file())
    if options.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            results = pool.map(analyze_file, paths, [options] * len(paths))
            rows = list(_progress(results, len(paths), directory, options))
    else:
        rows = [analyze_file(p, options) for p in _progress(paths, len(paths), directory, options)]
    logger.debug("analysed %d document(s) in %s", len(rows), directory)
    return pl.from_dicts(rows, schema=SUMMARY_SCHEMA) if rows else pl.DataFrame(schema=SUMMARY_SCHEMA)


def _progress(iterable, total: int, directory, options: AnalysisOptions):
    if not options.show_progress:
        return iterable
    return tqdm(iterable, desc=f"Analyzing {directory}", unit="spec", total=total, unit_scale=False)


@pl.api.register_dataframe_namespace("conic_ext")
class ConicBundleSummaryNamespace:
    "Queries over batch summaries produced by analyze_directory"

    def __init__(self, df: pl.DataFrame):
        self._df = df

    def mismatches(self) -> pl.DataFrame:
        """Rows whose computed Gamma or decisions disagree with a closed form."""
        return self._df.filter(pl.col("exit_code") == EXIT_MISMATCH)

    def failures(self) -> pl.DataFrame:
        """
        Rows with a nonzero exit code.

        Examples
        --------
        .. code-block:: python

            summary = analyze_directory("specs/")
            summary.conic_ext.failures().select("file", "exit_code", "error")
        """
        return self._df.filter(pl.col("exit_code") != EXIT_OK)

    def worst_exit_code(self) -> int:
        if self._df.is_empty():
            return EXIT_OK
        return int(self._df["exit_code"].max())
