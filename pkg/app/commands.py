"""Command dispatch shared by the CLI and the HTTP routers."""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

from .config import RunConfig
from .core.backends import get_backend
from .core.doublecat import DoubleCategory, LaxFunctor, check_lax_functor, check_pseudodouble
from .core.embed import (
    counit_mono,
    criteria_agreement,
    embed,
    enrich,
    fibrewise_discrete,
    round_trip,
    split_epi_section,
)
from .core.errors import EngineError, ParseError
from .core.hla import HLA, cob_data, change_of_base, check_hla, companion_data
from .core.mates import mate_suite
from .core.matrices import MatDC, mat_samples
from .core.monads import (
    LaxMonad,
    OperadicMonad,
    check_monad,
    identity_morphism,
    monad_from_spec,
    operad_transformation,
    transformation_morphism,
    unit_morphism,
)
from .core.reports import Report
from .core.sampling import rng_for
from .core.spans import SpanDC, span_samples
from .models.structures import (
    Structure,
    backend_monad,
    dump_structure,
    load_structure,
    read_document,
)

logger = logging.getLogger(__name__)

COMMANDS = ("check", "cob", "embed", "enrich", "mate", "discreteness")


@dataclass
class RunResult:
    command: str
    report: Report
    output: Optional[dict] = None
    summary: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.report.passed

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 2

    def render(self, fmt: str = "text") -> str:
        if fmt == "json":
            return self.report.to_json()
        text = self.report.to_text()
        return f"{self.summary}\n{text}" if self.summary else text

    def output_json(self) -> Optional[str]:
        if self.output is None:
            return None
        return json.dumps(self.output, sort_keys=True, indent=2, ensure_ascii=False)


def hypothesis_samples(config: RunConfig) -> int:
    # strongness is sampled more sparsely than the law suites
    return max(1, config.samples // 25)


def samples_for(dc: DoubleCategory, config: RunConfig, count: Optional[int] = None):
    count = config.samples if count is None else count
    rng = rng_for(config.seed, dc.name)
    if isinstance(dc, SpanDC):
        return span_samples(dc, rng, count=count)
    if isinstance(dc, MatDC):
        return mat_samples(dc, rng, count=count)
    raise ParseError(f"no sampler for {dc.name}", {"equipment": dc.name})


def _source(item: Union[str, Path, dict]) -> tuple[Any, str]:
    if isinstance(item, dict):
        return item, "<document>"
    return read_document(item), str(item)


def load(item: Union[str, Path, dict], check: bool = True) -> Structure:
    data, source = _source(item)
    return load_structure(data, source, check=check)


def _algebra(structure: Structure) -> HLA:
    if not structure.is_algebra:
        raise ParseError(f"{structure.name} is a {structure.kind}, not a structure over a monad", {"kind": structure.kind})
    return structure.value


# ─────────────────────────────
#   COMMANDS
# ─────────────────────────────


def check_structure(structure: Structure, config: RunConfig) -> Report:
    """Dispatch on what the document built."""
    value, depth = structure.value, config.depth
    if isinstance(value, HLA):
        return check_hla(value, depth)
    if isinstance(value, DoubleCategory):
        return check_pseudodouble(value, samples_for(value, config), depth)
    if isinstance(value, LaxMonad):
        return check_monad(value, samples_for(value.dc, config), depth)
    if isinstance(value, LaxFunctor):
        return check_lax_functor(value, samples_for(value.source, config), depth)
    raise ParseError(f"nothing to check for {structure.kind}", {"kind": structure.kind})


def cmd_check(config: RunConfig, documents: Optional[list] = None) -> RunResult:
    items = documents if documents is not None else config.inputs
    report = Report("check", depth=config.depth)
    for item in items:
        data, source = _source(item)
        try:
            structure = load_structure(data, source, check=False)
            report.extend(check_structure(structure, config), f"{source}: ")
        except EngineError as exc:
            if exc.exit_code != 2:
                raise
            report.record(exc.message, False, source, exc.witness)
    report.data["inputs"] = len(items)
    logger.info("check: %d inputs, %d checks, passed=%s", len(items), len(report.results), report.passed)
    return RunResult("check", report)


def _label_map(spec: Any):
    if isinstance(spec, dict) and "modulo" in spec:
        k = int(spec["modulo"])
        return lambda o: o % k
    table = {}
    for row in spec or []:
        if len(row) != 2:
            raise ParseError("operad map labels are [source, target] pairs", {"row": row})
        table[row[0]] = row[1]
    return lambda o: table.get(o, o)


def monad_morphism(name: Union[str, dict], h: HLA):
    """``identity``, ``unit`` or an operad map document."""
    if name == "identity":
        return identity_morphism(h.monad)
    if name == "unit":
        return unit_morphism(h.monad)
    spec = name if isinstance(name, dict) else read_document(name)
    if spec.get("kind") != "operad_map":
        raise ParseError(f"unknown monad morphism {name!r}", {"known": ["identity", "unit", "operad_map document"]})
    source = h.monad.base
    if not isinstance(source, OperadicMonad):
        raise ParseError("operad maps act on structures over an operadic monad", {"monad": h.monad.name})
    target = monad_from_spec({"monad": "operadic", **spec.get("target", {})}, source.backend)
    tau = operad_transformation(source, target, _label_map(spec.get("labels")), spec.get("name", "τ"))
    return transformation_morphism(tau)


def cmd_cob(config: RunConfig, morphism: Union[str, dict], document: Union[str, Path, dict]) -> RunResult:
    h = _algebra(load(document))
    mm = monad_morphism(morphism, h)
    if mm.is_lax:
        data = companion_data(mm, config.depth)
    else:
        data = cob_data(mm, samples_for(h.dc, config, hypothesis_samples(config)), config.depth)
    out = change_of_base(mm, h, data)
    report = Report(f"change of base of {h.name} along {mm.name}", depth=config.depth)
    report.extend(data.report, "data: ")
    report.extend(check_hla(out, config.depth), "output: ")
    return RunResult("cob", report, dump_structure(out, depth=config.depth))


def cmd_embed(config: RunConfig, document: Union[str, Path, dict]) -> RunResult:
    structure = load(document)
    e = _algebra(structure)
    if isinstance(e.dc, SpanDC):
        raise ParseError(f"{e.name} is internal; embed takes an enriched structure", {"structure": e.name})
    verdict = fibrewise_discrete(e.monad.base, config.depth)
    out = embed(e, verdict)
    report = Report(f"embedding of {e.name}", depth=config.depth)
    report.extend(check_hla(out, config.depth), "output: ")
    report.extend(out.dc.backend.is_discrete(out.x, config.depth), "objects: ")
    _, trip = round_trip(e, config.depth)
    report.extend(trip, "round trip: ")
    report.data.update({"verdict": verdict.as_dict(), "round_trip_invertible": trip.data["invertible"]})
    summary = f"{verdict.to_text()}\nround trip invertible: {trip.data['invertible']}"
    return RunResult("embed", report, dump_structure(out, depth=config.depth), summary)


def cmd_enrich(config: RunConfig, document: Union[str, Path, dict]) -> RunResult:
    structure = load(document)
    i = _algebra(structure)
    if not isinstance(i.dc, SpanDC):
        raise ParseError(f"{i.name} is enriched; enrich takes an internal structure", {"structure": i.name})
    out = enrich(i)
    report = Report(f"enrichment of {i.name}", depth=config.depth)
    report.extend(check_hla(out, config.depth), "output: ")
    backend = i.dc.backend
    summary = None
    if backend.is_discrete(i.x, config.depth).passed:
        section = split_epi_section(i, config.depth)
        report.extend(section.report, "section: ")
        report.data["two_sided"] = section.two_sided
        report.data["counit_invertible"] = section.report.data.get("counit_invertible")
        summary = f"split section two-sided: {section.two_sided}"
    else:
        report.data["two_sided"] = None
        report.data["counit_mono"] = counit_mono(i.monad.base, config.depth).passed
    return RunResult("enrich", report, dump_structure(out, structure.document, config.depth), summary)


def cmd_mate(config: RunConfig, document: Union[str, Path, dict]) -> RunResult:
    structure = load(document)
    if not isinstance(structure.value, DoubleCategory):
        raise ParseError("mate runs on an equipment document", {"kind": structure.kind})
    dc = structure.value
    report = mate_suite(dc, samples_for(dc, config), config.depth)
    return RunResult("mate", report)


def cmd_discreteness(config: RunConfig, monad: str, backend: str = "fingrph", criteria: bool = False) -> RunResult:
    T = backend_monad({"monad": monad}, get_backend(backend))
    verdict = fibrewise_discrete(T, config.depth, min(config.depth, config.set_bound))
    report = Report(f"fibrewise discreteness of {T.name} on {T.backend.title}", depth=config.depth, exact=verdict.exact)
    report.record("verdict computed", True, T.name, verdict.witness)
    report.data["verdict"] = verdict.as_dict()
    if criteria:
        agreement = criteria_agreement(T, min(config.depth, 3), config.seed, hypothesis_samples(config))
        report.extend(agreement)
        report.data["criteria"] = {k: agreement.data[k] for k in ("fibrewise_discrete", "counit_cartesian", "strong_conjoint")}
    return RunResult("discreteness", report, summary=verdict.to_text())


def run(config: RunConfig, **options) -> RunResult:
    """Dispatch ``config.command``; ``options`` carry the command-specific arguments."""
    command = config.command
    if command == "check":
        return cmd_check(config, options.get("documents"))
    if command == "discreteness":
        return cmd_discreteness(config, options["monad"], options.get("backend", "fingrph"), options.get("criteria", False))
    document = options.get("document")
    if document is None:
        if not config.inputs:
            raise ParseError(f"{command} needs an input structure", {"command": command})
        document = config.inputs[0]
    if command == "cob":
        return cmd_cob(config, options.get("morphism", "identity"), document)
    if command == "embed":
        return cmd_embed(config, document)
    if command == "enrich":
        return cmd_enrich(config, document)
    if command == "mate":
        return cmd_mate(config, document)
    raise ParseError(f"unknown command {command!r}", {"known": list(COMMANDS)})
