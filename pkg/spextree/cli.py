"""Command-line front end: ``spextree analyze|predict|verify|construct|bounds|catalog``."""
import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ._codecs import get_codec
from ._data_structures import PredictionKind, Prediction, SCHEMA
from ._errors import (InputError, SpexError, BudgetExceededError, InconclusiveSearchError, ParameterRangeError,
                      SpectralConvergenceError)
from .extremal import classify, bounds, spider_forcing_order
from .graphs import (construct_S, construct_K_ab_p, construct_G_nl, spectral_radius, quotient_S, quotient_K_ab_p,
                     quotient_spectral_radius, G_nl_parameters, DEFAULT_TOLERANCE)
from .trees import load_tree, profile, covering_family, diameter_spider, catalog_trees
from .verifier import verify_prediction, RHO_TOLERANCE

EXIT_OK = 0
EXIT_DISAGREE = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64


@dataclass
class CommandConfig:
    """ Every setting of one CLI invocation. """
    subcommand: str
    tree: str | None = None
    n_values: list[int] = field(default_factory=list)
    tolerance: float = DEFAULT_TOLERANCE
    budget: int | None = None
    oracle: str = "auto"
    output_format: str = "text"
    output: Path | None = None
    family: str | None = None
    parameters: dict[str, int] = field(default_factory=dict)
    rho: bool = False
    max_order: int = 9

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ParameterRangeError(f"Tolerance must be positive, got {self.tolerance}.")
        if self.subcommand in ("predict", "verify", "bounds") and not self.n_values:
            raise ParameterRangeError("The n range is empty.")
        if self.budget is not None and self.budget < 1:
            raise ParameterRangeError(f"Budget must be positive, got {self.budget}.")


def parse_n_range(text: str) -> list[int]:
    """ ``"30"``, ``"7..8"`` (inclusive) or a comma-separated mix such as ``"7..8,20,30"``. """
    values: set[int] = set()
    try:
        for chunk in text.split(","):
            chunk = chunk.strip()
            if ".." in chunk:
                low, high = (int(x) for x in chunk.split("..", 1))
                values.update(range(low, high + 1))
            elif chunk:
                values.add(int(chunk))
    except ValueError as e:
        raise ParameterRangeError(f"Malformed n range {text!r}.") from e
    if not values:
        raise ParameterRangeError(f"The n range {text!r} is empty.")
    return sorted(values)


class _ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="spextree", description="Spectral extremal graphs for forbidden trees.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    def common(sub, formats, n_required=False):
        sub.add_argument("--format", dest="output_format", choices=formats, default=formats[0])
        sub.add_argument("--output", type=Path, default=None, help="write to this file instead of stdout")
        if n_required:
            sub.add_argument("--n", dest="n_range", required=True, help="n, a..b or a comma list")

    analyze = subparsers.add_parser("analyze", help="structural parameters of a tree")
    analyze.add_argument("--tree", required=True, help="edge-list file or catalog name, e.g. spider(3,3,1)")
    common(analyze, ("text", "json"))

    predict = subparsers.add_parser("predict", help="predicted spectral extremal graphs")
    predict.add_argument("--tree", required=True)
    common(predict, ("text", "json"), n_required=True)

    verify = subparsers.add_parser("verify", help="check predictions against an oracle")
    verify.add_argument("--tree", required=True)
    verify.add_argument("--oracle", choices=("auto", "exhaustive", "joinform", "joinform-exhaustive"),
                        default="auto")
    verify.add_argument("--budget", type=int, default=None, help="node cap per embedding search")
    verify.add_argument("--tol", dest="tolerance", type=float, default=RHO_TOLERANCE,
                        help="tolerance when comparing predicted and oracle spectral radii")
    common(verify, ("text", "json", "csv", "graph6"), n_required=True)

    construct = subparsers.add_parser("construct", help="build an extremal graph")
    construct.add_argument("family", choices=("S", "K", "Gnl", "diameter-spider"))
    for name in ("n", "k", "p", "a", "b", "l", "d"):
        construct.add_argument(f"--{name}", type=int, default=None)
    construct.add_argument("--rho", action="store_true", help="also print the spectral radius")
    construct.add_argument("--tol", dest="tolerance", type=float, default=DEFAULT_TOLERANCE,
                           help="eigensolver tolerance")
    common(construct, ("graph6", "edge-list", "json"))

    bound = subparsers.add_parser("bounds", help="two-sided bound for trees with delta >= 2")
    bound.add_argument("--tree", required=True)
    common(bound, ("text", "json", "csv"), n_required=True)

    catalog = subparsers.add_parser("catalog", help="list built-in trees")
    catalog.add_argument("--max-order", type=int, default=9)
    common(catalog, ("text", "json"))
    return parser


def _config_from_args(args: argparse.Namespace) -> CommandConfig:
    n_values = parse_n_range(args.n_range) if getattr(args, "n_range", None) else []
    parameters = {name: getattr(args, name) for name in ("n", "k", "p", "a", "b", "l", "d")
                  if getattr(args, name, None) is not None}
    return CommandConfig(subcommand=args.subcommand, tree=getattr(args, "tree", None), n_values=n_values,
                         tolerance=getattr(args, "tolerance", DEFAULT_TOLERANCE),
                         budget=getattr(args, "budget", None), oracle=getattr(args, "oracle", "auto"),
                         output_format=args.output_format, output=args.output,
                         family=getattr(args, "family", None), parameters=parameters,
                         rho=getattr(args, "rho", False), max_order=getattr(args, "max_order", 9))


def _dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit(cfg: CommandConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        cfg.output.write_text(text)


def _table(rows: list[tuple[str, Any]]) -> str:
    width = max(len(label) for label, _ in rows)
    return "".join(f"{label:<{width}}  {value}\n" for label, value in rows)


def cmd_analyze(cfg: CommandConfig) -> int:
    tree = load_tree(cfg.tree)
    tree_profile = profile(tree)
    family = None if tree_profile.is_star else covering_family(tree, tree_profile)
    forcing = spider_forcing_order(tree, tree_profile)
    if cfg.output_format == "json":
        data = {"schema": SCHEMA, "tree": cfg.tree, "profile": tree_profile.to_dict(),
                "covering_family": family.to_dict() if family else None, "forcing_k": forcing}
        _emit(cfg, _dump_json(data))
        return EXIT_OK
    spider = tree_profile.spider
    rows = [("tree", cfg.tree), ("l", tree_profile.l),
            ("|A|, |B|", f"{len(tree_profile.side_a)}, {len(tree_profile.side_b)}"), ("q", tree_profile.q),
            ("delta", f"{tree_profile.delta}" + (" (ambiguous orientation)" if tree_profile.ambiguous_orientation
                                                  else "")),
            ("beta", tree_profile.beta), ("nu", tree_profile.nu), ("diameter", tree_profile.diameter),
            ("spider", f"center {spider.center}, legs {spider.legs}, r1={spider.r1} r2={spider.r2} "
                       f"r3={spider.r3} s={spider.s}" if spider else "no")]
    if family is None:
        rows.append(("covering family", "none: F is a star, the spectral extremal problem is trivial"))
    else:
        rows.append(("covering family", family.summary()))
    if forcing is not None:
        rows.append(("forcing", f"rho >= rho(S_{{n,{forcing}}}^0) forces F for large n"))
    _emit(cfg, _table(rows))
    return EXIT_OK


def _prediction_text(prediction: Prediction) -> str:
    rows = [("n", prediction.n), ("kind", prediction.kind.value),
            ("provenance", f"{prediction.theorem} / {prediction.case}")]
    for descriptor in prediction.graphs:
        rows.append(("graph", f"{descriptor.label()}  rho = {descriptor.spectral_radius().value:.10f}"))
    if prediction.lower is not None:
        rows.append(("lower (nominal)", f"{prediction.lower.nominal.value:.10f}"))
        rows.append(("lower (exact)", f"{prediction.lower.exact.value:.10f}"))
        rows.append(("upper", f"{prediction.upper.value:.10f}"))
    if prediction.anchor is not None:
        rows.append(("sqrt(qn)", f"{prediction.anchor:.10f}"))
    rows += [("warning", w) for w in prediction.warnings]
    return _table(rows)


def cmd_predict(cfg: CommandConfig) -> int:
    tree = load_tree(cfg.tree)
    predictions = [classify(tree, n) for n in cfg.n_values]
    if any(p.kind is PredictionKind.OUT_OF_DOMAIN for p in predictions):
        sys.stderr.write(f"{cfg.tree} is a star: the spectral extremal problem is trivial.\n")
        return EXIT_USAGE
    if cfg.output_format == "json":
        data = predictions[0].to_dict() if len(predictions) == 1 else {
            "schema": SCHEMA, "predictions": {str(p.n): p.to_dict() for p in predictions}}
        _emit(cfg, _dump_json(data))
    else:
        _emit(cfg, "\n".join(_prediction_text(p) for p in predictions))
    return EXIT_OK


def cmd_verify(cfg: CommandConfig) -> int:
    tree = load_tree(cfg.tree)
    report = verify_prediction(tree, cfg.n_values, oracle=cfg.oracle, tol=cfg.tolerance, budget=cfg.budget,
                               name=cfg.tree)
    match cfg.output_format:
        case "json":
            _emit(cfg, _dump_json(report.to_dict(with_runtime=False)))
        case "csv":
            buffer = io.StringIO()
            csv.writer(buffer, lineterminator="\n").writerows(report.csv_rows())
            _emit(cfg, buffer.getvalue())
        case "graph6":
            _emit(cfg, "".join(f"{g}\n" for r in report.results for g in r.maximizers))
        case _:
            lines = []
            for r in report.results:
                oracle = r.oracle.value if r.oracle else "-"
                predicted = f"{r.predicted_rho:.10f}" if r.predicted_rho is not None else "-"
                found = f"{r.oracle_rho:.10f}" if r.oracle_rho is not None else "-"
                flag = " (below threshold)" if r.below_threshold else ""
                lines.append(f"n={r.n:<6} {oracle:<22} predicted {predicted}  oracle {found}  "
                             f"{r.outcome.value}{flag}")
                lines += [f"    warning: {w}" for w in r.warnings]
            _emit(cfg, "\n".join(lines) + "\n")
    if report.confirmed_disagreement:
        return EXIT_DISAGREE
    if report.inconclusive:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _require(cfg: CommandConfig, *names: str) -> list[int]:
    missing = [name for name in names if name not in cfg.parameters]
    if missing:
        raise ParameterRangeError(f"construct {cfg.family} needs --{', --'.join(missing)}.")
    return [cfg.parameters[name] for name in names]


def cmd_construct(cfg: CommandConfig) -> int:
    exact = None
    if cfg.family in ("S", "K"):
        cfg.parameters.setdefault("p", 0)
    match cfg.family:
        case "S":
            n, k, p = _require(cfg, "n", "k", "p")
            graph, exact = construct_S(n, k, p), quotient_S(n, k, p)
        case "K":
            a, b, p = _require(cfg, "a", "b", "p")
            graph, exact = construct_K_ab_p(a, b, p), quotient_K_ab_p(a, b, p)
        case "Gnl":
            n, l = _require(cfg, "n", "l")
            graph = construct_G_nl(n, l)
            exact = quotient_S(n, *G_nl_parameters(l))
        case _:
            l, d = _require(cfg, "l", "d")
            graph = diameter_spider(l, d)
    rho = {}
    if cfg.rho:
        rho["power-iteration"] = spectral_radius(graph, cfg.tolerance).value
        if exact is not None:
            rho["quotient-exact"] = quotient_spectral_radius(exact).value
    if cfg.output_format == "json":
        data = {"schema": SCHEMA, "family": cfg.family, "parameters": cfg.parameters, "n": graph.n,
                "edges": graph.number_of_edges, "graph6": get_codec("graph6").encode(graph)}
        if rho:
            data["rho"] = rho
        _emit(cfg, _dump_json(data))
    else:
        text = get_codec(cfg.output_format).encode(graph).rstrip("\n") + "\n"
        text += "".join(f"# rho ({method}) = {value:.12f}\n" for method, value in rho.items())
        _emit(cfg, text)
    return EXIT_OK


def cmd_bounds(cfg: CommandConfig) -> int:
    tree = load_tree(cfg.tree)
    tree_profile = profile(tree)
    results = {n: bounds(tree, n, tree_profile) for n in cfg.n_values}
    if cfg.output_format == "json":
        data = {"schema": SCHEMA, "tree": cfg.tree, "q": tree_profile.q, "delta": tree_profile.delta,
                "bounds": {str(n): {"lower": {"paper": b.lower.nominal.value, "exact": b.lower.exact.value},
                                    "upper": b.upper.value, "anchor": b.anchor} for n, b in results.items()}}
        _emit(cfg, _dump_json(data))
        return EXIT_OK
    rows = [["n", "lower_nominal", "lower_exact", "upper", "sqrt_qn"]]
    rows += [[n, f"{b.lower.nominal.value:.10f}", f"{b.lower.exact.value:.10f}", f"{b.upper.value:.10f}",
              f"{b.anchor:.10f}"] for n, b in results.items()]
    if cfg.output_format == "csv":
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(rows)
        _emit(cfg, buffer.getvalue())
    else:
        _emit(cfg, "".join("  ".join(f"{cell:>16}" for cell in row) + "\n" for row in rows))
    return EXIT_OK


def cmd_catalog(cfg: CommandConfig) -> int:
    entries = []
    for entry in catalog_trees(cfg.max_order):
        tree_profile = profile(entry.tree)
        entries.append({"name": entry.name, "l": tree_profile.l, "q": tree_profile.q, "delta": tree_profile.delta,
                        "beta": tree_profile.beta, "spider": tree_profile.spider is not None})
    if cfg.output_format == "json":
        _emit(cfg, _dump_json({"schema": SCHEMA, "trees": entries}))
    else:
        width = max(len(e["name"]) for e in entries)
        lines = [f"{'name':<{width}}  l  q  delta  beta  spider"]
        lines += [f"{e['name']:<{width}}  {e['l']}  {e['q']}  {e['delta']:>5}  {e['beta']:>4}  "
                  f"{'yes' if e['spider'] else 'no'}" for e in entries]
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "predict": cmd_predict, "verify": cmd_verify, "construct": cmd_construct,
            "bounds": cmd_bounds, "catalog": cmd_catalog}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level={0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG),
                        format="%(levelname)s: %(message)s")
    try:
        cfg = _config_from_args(args)
        return COMMANDS[cfg.subcommand](cfg)
    except (BudgetExceededError, InconclusiveSearchError, SpectralConvergenceError) as e:
        sys.stderr.write(f"spextree: {e}\n")
        return EXIT_INCONCLUSIVE
    except InputError as e:
        sys.stderr.write(f"spextree: {e}\n")
        return EXIT_USAGE
    except SpexError as e:
        sys.stderr.write(f"spextree: {e}\n")
        return EXIT_DISAGREE
