"""Command-line front end.

    python -m app.hdx generate complete --n 5 --d 2
    python -m app.hdx decompose --config exp.json
    python -m app.hdx spectrum --complex complete --n 3 --d 2
    python -m app.hdx verify --config exp.json --seed 7 --out out/
    python -m app.hdx sweep --config exp.json --axis n=6,8,10 --jobs 4

Flags override fields of the JSON config, which overrides defaults.
Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 bad configuration,
3 infeasible parameters, 4 numerical failure.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from .checks import known_checks
from .complex import write_complex
from .config import get_settings
from .decomposition import bottom_up_explicit, hd_level_set
from .errors import ConfigurationError, HDXError
from .expansion import measure_gamma
from .logging_config import setup_logging
from .models import ExperimentConfig
from .orchestrator import build_complex, build_function, build_walk, run
from .pseudorandom import pseudorandomness_profile
from .reporting import emit
from .spectral import approximate_eigenvalues, st_rank

logger = logging.getLogger(__name__)


# ===== CONFIG MERGING =====


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _parse_axis(spec: str) -> tuple:
    if "=" not in spec:
        raise ConfigurationError(f"Sweep axis must look like name=v1,v2,..., got {spec!r}")
    name, values = spec.split("=", 1)
    return name.strip(), [_parse_value(v.strip()) for v in values.split(",") if v.strip()]


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """JSON file (if any) overlaid with command-line flags."""
    data: Dict[str, Any] = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"Cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError("Config must be a JSON object")

    def section(name: str) -> Dict[str, Any]:
        return data.setdefault(name, {})

    overrides = {
        ("complex", "generator"): getattr(args, "complex", None),
        ("complex", "n"): getattr(args, "n", None),
        ("complex", "d"): getattr(args, "d", None),
        ("complex", "faces"): getattr(args, "faces", None),
        ("complex", "path"): getattr(args, "complex_file", None),
        ("function", "generator"): getattr(args, "function", None),
        ("function", "level"): getattr(args, "k", None),
        ("function", "alpha"): getattr(args, "alpha", None),
        ("function", "face"): getattr(args, "face", None),
        ("function", "bit"): getattr(args, "bit", None),
        ("function", "path"): getattr(args, "function_file", None),
        ("walk", "kind"): getattr(args, "walk", None),
        ("walk", "i"): getattr(args, "walk_i", None),
        ("walk", "rho"): getattr(args, "rho", None),
    }
    for (name, key), value in overrides.items():
        if value is not None:
            section(name)[key] = value
    for key in ("seed", "jobs"):
        if getattr(args, key, None) is not None:
            data[key] = getattr(args, key)
    if getattr(args, "out", None) is not None and args.command in ("verify", "sweep"):
        data["output_dir"] = args.out
    if getattr(args, "check", None):
        data["checks"] = [{"id": check_id} for check_id in args.check]
    for spec in getattr(args, "axis", None) or []:
        name, values = _parse_axis(spec)
        data.setdefault("sweep", {})[name] = values

    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid config: {exc}") from exc


# ===== SUBCOMMANDS =====


def cmd_generate(args: argparse.Namespace) -> int:
    config = load_config(args)
    complex_ = build_complex(config)
    if complex_ is None:
        raise ConfigurationError("Monte Carlo anti-tribes instances have no enumerated complex to emit")
    if args.out:
        write_complex(complex_, args.out)
        logger.info("Wrote %s (%d top faces)", args.out, len(complex_.top_faces))
    else:
        write_complex(complex_, sys.stdout)
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    config = load_config(args)
    f = build_function(config, build_complex(config))
    if f is None:
        raise ConfigurationError("decompose needs an enumerated complex")
    result: Dict[str, Any] = {"complex_id": f.complex.uid, "level": f.level}
    if args.basis in ("bottom-up", "both"):
        result["bottom_up"] = bottom_up_explicit(f).to_dict()
    if args.basis in ("hd-level-set", "both"):
        result["hd_level_set"] = hd_level_set(f).to_dict()
    emit(result, Path(args.out) if args.out else None)
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    config = load_config(args)
    complex_ = build_complex(config)
    if complex_ is None:
        raise ConfigurationError("spectrum needs an enumerated complex")
    result: Dict[str, Any] = {"complex_id": complex_.uid, "d": complex_.dimension}
    if complex_.dimension >= 2:
        result["local_spectral"] = measure_gamma(complex_).to_dict()
        result["gamma"] = result["local_spectral"]["gamma"]
    if args.strips:
        f = build_function(config, complex_)
        walk = build_walk(config, f)
        result["strips"] = approximate_eigenvalues(complex_, walk).to_dict()
        if args.delta is not None:
            result["st_rank"] = st_rank(complex_, walk, args.delta)
        if f is not None and f.level > 0:
            result["pseudorandomness"] = [report.to_dict() for report in pseudorandomness_profile(f)]
    emit(result, Path(args.out) if args.out else None)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    config = load_config(args)
    result = run(config)
    logger.info("Verdicts: %s", result.summary["statuses"])
    return result.exit_code


def cmd_sweep(args: argparse.Namespace) -> int:
    config = load_config(args)
    if not config.sweep:
        raise ConfigurationError("sweep needs at least one axis (config 'sweep' or --axis)")
    result = run(config)
    logger.info("Sweep verdicts: %s", result.summary["statuses"])
    return result.exit_code


# ===== PARSER =====


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON experiment config")
    parser.add_argument("--seed", type=int, default=None, help="Seed for every stochastic generator and estimator")
    parser.add_argument("--jobs", type=int, default=None, help="Worker threads (default: available CPUs)")
    parser.add_argument("--out", default=None, help="Output path (file for generate/decompose/spectrum, dir otherwise)")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--json-logs", action="store_true", default=None, help="JSON log lines on stderr")


def _add_sources(parser: argparse.ArgumentParser, complex_positional: bool = False) -> None:
    if complex_positional:
        parser.add_argument("complex", nargs="?", default=None,
                            choices=["complete", "hypercube", "random", "anti-tribes", "file"])
    else:
        parser.add_argument("--complex", default=None, help="complete, hypercube, random, anti-tribes or file")
    parser.add_argument("--n", type=int, default=None)
    parser.add_argument("--d", type=int, default=None)
    parser.add_argument("--faces", type=int, default=None, help="Top-face count for random complexes")
    parser.add_argument("--complex-file", default=None)
    parser.add_argument("--function", default=None,
                        help="random-sparse, random-real, link-indicator, dictator, anti-tribes, constant or file")
    parser.add_argument("--k", type=int, default=None, help="Function level")
    parser.add_argument("--alpha", type=float, default=None)
    parser.add_argument("--face", type=int, nargs="*", default=None, help="Link anchor for link-indicator")
    parser.add_argument("--bit", type=int, default=None)
    parser.add_argument("--function-file", default=None)
    parser.add_argument("--walk", default=None, help="canonical, lower, noise or identity")
    parser.add_argument("--walk-i", type=int, default=None)
    parser.add_argument("--rho", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdx", description="Boolean function analysis on weighted simplicial complexes")
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="Emit a complex file")
    _add_common(generate)
    _add_sources(generate, complex_positional=True)
    generate.set_defaults(handler=cmd_generate)

    decompose = commands.add_parser("decompose", help="Emit Bottom-Up / HD-Level-Set decompositions as JSON")
    _add_common(decompose)
    _add_sources(decompose)
    decompose.add_argument("--basis", choices=["bottom-up", "hd-level-set", "both"], default="bottom-up")
    decompose.set_defaults(handler=cmd_decompose)

    spectrum = commands.add_parser("spectrum", help="Emit gamma and walk strips as JSON")
    _add_common(spectrum)
    _add_sources(spectrum)
    spectrum.add_argument("--strips", action="store_true", help="Also compute strips of the configured walk")
    spectrum.add_argument("--delta", type=float, default=None, help="Report the ST-rank above delta")
    spectrum.set_defaults(handler=cmd_spectrum)

    for name, handler, help_text in (("verify", cmd_verify, "Run the configured checks"),
                                     ("sweep", cmd_sweep, "Run the checks over a parameter grid")):
        sub = commands.add_parser(name, help=help_text)
        _add_common(sub)
        _add_sources(sub)
        sub.add_argument("--check", action="append", default=None, help=f"Check id ({', '.join(known_checks())})")
        sub.add_argument("--axis", action="append", default=None, help="Sweep axis name=v1,v2,...")
        sub.set_defaults(handler=handler)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    settings = get_settings()
    setup_logging(json_format=args.json_logs if args.json_logs is not None else settings.json_logs,
                  level=args.log_level or settings.log_level)
    try:
        return args.handler(args)
    except HDXError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code


def run_cli(argv: Optional[List[str]] = None) -> None:
    sys.exit(main(argv))
