"""``fgdyn`` command line: batch analyses that end in a JSON report.

Exit codes: 0 success, 2 input error, 3 budget exhausted, 4 invariant
violation or theorem-violation candidate, 5 refused precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .automorphisms import Automorphism, format_automorphism, invert, load_automorphism
from .boundary import DEFAULT_MERGE_DEPTH, DEFAULT_TARGET_DEPTH, collect_attracting_points
from .cannon_thurston import assemble_singular_lines, ending_lamination_set, identification_graph
from .dynamics import NotHyperbolic, certify_hyperbolicity, two_sided_growth
from .errors import (
    BudgetExceeded,
    InputError,
    InvariantViolation,
    InverseNotFound,
    NoConvergence,
    NoStabilization,
    PreconditionError,
)
from .laminations import common_lamination_check, fingerprints, weak_limit_lines
from .subgroups import has_infinite_index, qc_verdict, stallings_graph
from .words import CyclicWord, parse_letters

SCHEMA = "fgdyn.report/1"
COMMANDS = ("hyperbolic", "fixed-points", "laminate", "limits", "ct-graph", "qc", "compat")

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_INVARIANT, EXIT_PRECONDITION = 0, 2, 3, 4, 5


@dataclass
class RunConfig:
    auto: str = ""
    inverse: str | None = None
    other: str | None = None
    subgroup: str | None = None
    classes: list[str] = field(default_factory=list)
    max_len: int = 6
    max_period: int = 6
    max_iter: int = 80
    k: int = 3
    twist_bound: int = 2
    depth: int = DEFAULT_TARGET_DEPTH
    merge_depth: int = DEFAULT_MERGE_DEPTH
    max_sample_len: int = 2
    qc_k: int = 8
    window: int = 16
    workers: int = 1

    def __post_init__(self):
        for name in ("max_len", "max_period", "max_iter", "k", "depth", "merge_depth", "max_sample_len", "qc_k", "window", "workers"):
            if getattr(self, name) < 1:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.twist_bound < 0:
            raise InputError("--twist-bound must be non-negative")

    def budgets(self) -> dict:
        d = asdict(self)
        for key in ("auto", "inverse", "other", "subgroup", "classes"):
            d.pop(key)
        return d


@dataclass
class Report:
    command: str
    inputs: dict
    verdicts: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)
    budget_exhausted: bool = False
    exit_code: int = EXIT_OK
    error: str | None = None

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "verdicts": self.verdicts,
            "artifacts": self.artifacts,
            "budget_exhausted": self.budget_exhausted,
            "exit_code": self.exit_code,
            "error": self.error,
            "metadata": {"version": __version__},
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


class _Progress:
    """Append-only JSON Lines log of pipeline stages."""

    def __init__(self, path: Path | None):
        self.path = path
        if path is not None:
            path.write_text("")

    def __call__(self, event: str, **data):
        if self.path is None:
            return
        with self.path.open("a") as fh:
            fh.write(json.dumps({"event": event, **data}, sort_keys=True) + "\n")


def _load(config: RunConfig) -> Automorphism:
    if not config.auto:
        raise InputError("--auto FILE is required")
    phi = load_automorphism(config.auto)
    if config.inverse:
        inv = load_automorphism(config.inverse, rank=phi.rank)
        phi = Automorphism(phi.images, inv.images, label=phi.label)
    return phi


def _need_inverse(phi: Automorphism) -> Automorphism:
    try:
        return invert(phi)
    except InverseNotFound as exc:
        raise PreconditionError(f"no inverse supplied and none found: {exc}") from exc


def _guard_hyperbolic(phi: Automorphism, config: RunConfig, report: Report):
    verdict = certify_hyperbolicity(phi, config.max_len, config.max_period, workers=config.workers)
    report.verdicts["hyperbolicity"] = verdict.as_dict()
    if isinstance(verdict, NotHyperbolic):
        raise PreconditionError(
            f"input is not hyperbolic: [{verdict.witness.letters}] returns after {verdict.period} iterates"
        )
    return verdict


def _hyperbolic(phi, config, report, progress):
    phi = _need_inverse(phi)
    verdict = certify_hyperbolicity(phi, config.max_len, config.max_period, workers=config.workers)
    report.verdicts["hyperbolicity"] = verdict.as_dict()
    if isinstance(verdict, NotHyperbolic):
        report.artifacts["growth"] = two_sided_growth(phi)


def _fixed_points(phi, config, report, progress):
    for sign, f in _directions(phi):
        progress("stage", name=f"fixed-points{sign}")
        fps = collect_attracting_points(
            f, config.twist_bound, target_depth=config.depth, merge_depth=config.merge_depth,
            max_iter=config.max_iter, workers=config.workers,
        )
        report.artifacts[f"fixed_points{sign}"] = fps.as_dict()
        if fps.gjll_violations():
            report.verdicts[f"gjll{sign}"] = "violated"
            raise InvariantViolation(f"more than {2 * phi.rank} distinct attracting points on one lift")
        report.verdicts[f"gjll{sign}"] = "ok"


def _directions(phi):
    if not phi.has_inverse:
        try:
            phi = invert(phi)
        except InverseNotFound:
            pass
    out = [("+", phi)]
    if phi.has_inverse:
        out.append(("-", phi.inverse()))
    return out


def _laminate(phi, config, report, progress):
    for sign, f in _directions(phi):
        report.artifacts[f"fingerprints{sign}"] = [fp.as_dict() for fp in fingerprints(f, config.k, config.max_iter)]


def _limits(phi, config, report, progress):
    if not config.classes:
        raise InputError("limits needs at least one --class")
    phi = _need_inverse(phi)
    classes = [CyclicWord(parse_letters(c), phi.rank) for c in config.classes]
    _guard_hyperbolic(phi, config, report)
    fps = collect_attracting_points(phi, config.twist_bound, target_depth=config.depth, merge_depth=config.merge_depth)
    lams = fingerprints(phi, config.k)
    lines = []
    for c in classes:
        progress("stage", name="limits", cls=c.letters)
        found = weak_limit_lines(
            phi, c, config.k, config.max_iter, fixed_points=fps, laminations=lams, merge_depth=config.merge_depth
        )
        lines.extend({"class": c.letters, **ln.as_dict()} for ln in found)
        if any(ln.theorem_violation_candidate for ln in found):
            report.verdicts["limit_classification"] = "unclassified line at converged depth"
    report.artifacts["limit_lines"] = lines
    if "limit_classification" in report.verdicts:
        raise InvariantViolation("a converged limit line is neither leaf-like nor joins attracting fixed points")
    report.verdicts["limit_classification"] = "all converged lines classified"


def _ct_graph(phi, config, report, progress):
    phi = _need_inverse(phi)
    verdict = _guard_hyperbolic(phi, config, report)
    progress("stage", name="ending-lamination")
    els = ending_lamination_set(
        phi, phi.inverse(), max_sample_len=config.max_sample_len, k=config.k, n_max=config.max_iter,
        merge_depth=config.merge_depth, twist_bound=config.twist_bound, verdict=verdict,
    )
    progress("stage", name="identification-graph", lines=len(els))
    graph = identification_graph(els, config.merge_depth)
    report.artifacts["ending_lamination"] = els.as_dict()
    report.artifacts["identification_graph"] = graph.as_dict()
    report.artifacts["singular_lines"] = {
        "+": len(assemble_singular_lines(els.fixed_points_plus)),
        "-": len(assemble_singular_lines(els.fixed_points_minus)),
    }
    report.verdicts["fiber_audit"] = "ok" if graph.sound else "violated"
    if els.violation_candidates():
        report.verdicts["limit_classification"] = "unclassified line at converged depth"
        raise InvariantViolation("a converged ending-lamination line is unclassified")
    if not graph.sound:
        raise InvariantViolation("identification graph failed the branch-point or fiber-size audit")


def _qc(phi, config, report, progress):
    if not config.subgroup:
        raise InputError('qc needs --subgroup "w1,w2,..."')
    gens = [parse_letters(w) for w in config.subgroup.split(",") if w.strip()]
    g = stallings_graph(gens, phi.rank)
    report.artifacts["stallings_graph"] = g.as_dict()
    report.verdicts["infinite_index"] = has_infinite_index(g, phi.rank)
    phi = _need_inverse(phi)
    verdict = _guard_hyperbolic(phi, config, report)
    result = qc_verdict(
        g, phi, phi.inverse(), twist_bound=config.twist_bound, depth=config.depth, k=config.qc_k,
        window=config.window, verdict=verdict,
    )
    report.verdicts["quasiconvexity"] = result.as_dict()


def _compat(phi, config, report, progress):
    if not config.other:
        raise InputError("compat needs --other FILE")
    psi = load_automorphism(config.other, rank=phi.rank)
    phi, psi = _need_inverse(phi), _need_inverse(psi)
    plus = common_lamination_check(phi, psi, config.k, config.max_iter)
    minus = common_lamination_check(phi.inverse(), psi.inverse(), config.k, config.max_iter)
    report.verdicts["common_attracting_lamination"] = plus
    report.verdicts["common_repelling_lamination"] = minus
    report.verdicts["no_common_lamination"] = not (plus or minus)
    report.inputs["other"] = format_automorphism(psi, with_inverse=False)


_HANDLERS = {
    "hyperbolic": _hyperbolic,
    "fixed-points": _fixed_points,
    "laminate": _laminate,
    "limits": _limits,
    "ct-graph": _ct_graph,
    "qc": _qc,
    "compat": _compat,
}


def run(command: str, config: RunConfig, out_dir: str | Path | None = None) -> Report:
    """Dispatch one command; failures are recorded in the report with their exit code."""
    if command not in _HANDLERS:
        raise InputError(f"unknown command {command!r}")
    out = Path(out_dir) if out_dir else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    progress = _Progress(out / "progress.jsonl" if out else None)
    report = Report(command, {"auto": config.auto, "config": config.budgets()})
    progress("start", command=command)
    try:
        phi = _load(config)
        report.inputs["automorphism"] = format_automorphism(phi)
        report.inputs["classes"] = list(config.classes)
        report.inputs["subgroup"] = config.subgroup
        _HANDLERS[command](phi, config, report, progress)
    except InvariantViolation as exc:
        report.exit_code, report.error = EXIT_INVARIANT, str(exc)
    except (PreconditionError, InverseNotFound) as exc:
        report.exit_code, report.error = EXIT_PRECONDITION, str(exc)
    except (BudgetExceeded, NoConvergence, NoStabilization) as exc:
        report.exit_code, report.error = EXIT_BUDGET, str(exc)
        report.budget_exhausted = True
    except (InputError, ValueError) as exc:
        report.exit_code, report.error = EXIT_INPUT, str(exc)
    progress("done", exit_code=report.exit_code)
    if out is not None:
        (out / "report.json").write_text(report.to_json() + "\n")
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fgdyn", description="Dynamics of free group automorphisms.")
    parser.add_argument("--version", action="version", version=f"fgdyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = RunConfig()
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--auto", required=True, help="automorphism file, e.g. 'a->ab; b->ac; c->a'")
        p.add_argument("--inverse", help="file with the inverse automorphism")
        p.add_argument("--other", help="second automorphism (compat)")
        p.add_argument("--subgroup", help="comma separated generators (qc)")
        p.add_argument("--class", dest="classes", action="append", default=[], help="conjugacy class (limits)")
        p.add_argument("--max-len", type=int, default=defaults.max_len)
        p.add_argument("--max-period", type=int, default=defaults.max_period)
        p.add_argument("--max-iter", type=int, default=defaults.max_iter)
        p.add_argument("--k", type=int, default=defaults.k)
        p.add_argument("--twist-bound", type=int, default=defaults.twist_bound)
        p.add_argument("--depth", type=int, default=defaults.depth)
        p.add_argument("--merge-depth", type=int, default=defaults.merge_depth)
        p.add_argument("--max-sample-len", type=int, default=defaults.max_sample_len)
        p.add_argument("--qc-k", type=int, default=defaults.qc_k)
        p.add_argument("--window", type=int, default=defaults.window)
        p.add_argument("--workers", type=int, default=defaults.workers)
        p.add_argument("--json", action="store_true", help="print the report as JSON")
        p.add_argument("--out", help="directory for report.json and progress.jsonl")
    return parser


def _summary(report: Report) -> str:
    lines = [f"{report.command}: exit {report.exit_code}"]
    for key, value in sorted(report.verdicts.items()):
        if isinstance(value, dict):
            value = value.get("status", value)
        lines.append(f"  {key}: {value}")
    if report.error:
        lines.append(f"  error: {report.error}")
    return "\n".join(lines)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    values = vars(args)
    command, as_json, out = values.pop("command"), values.pop("json"), values.pop("out")
    try:
        config = RunConfig(**values)
    except InputError as exc:
        print(f"fgdyn: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = run(command, config, out)
    print(report.to_json() if as_json else _summary(report))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
