"""
Command-line front end.

    python cli.py singular --p 2 --n 4 --c symbolic
    python cli.py hilbert  --p 3 --n 3
    python cli.py verify   --p 2 --n 4 --c random --seed 7
    python cli.py sweep    --p 5 --n 5 --c all-Fp
    python cli.py series   --p 2 --n 2

Exit codes: 0 all checks passed, 1 a mathematical check failed,
2 invalid configuration.
"""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from math import comb
from typing import List, Optional, Sequence, Tuple

from coeff import extension_field, prime_field
from config import (
    DEFAULT_SEED,
    DEFAULT_RELATION_DEGREE,
    DEFAULT_THREADS,
    LOG_LEVEL,
    MONOMIAL_WARN_THRESHOLD,
    RECOMMENDED_PAIRS,
    SPECIALIZATION_SAMPLES,
    SessionConfig,
    socle_degree,
)
from contraform import ContravariantForm, compare_ideals, kernel_dims_agree, verify_containment
from dunkl import check_relations, singular_defects
from errors import CheckFailure, CherednikError, ConfigError, InvalidArgument
from graded import check_complete_intersection, check_linear_independence, hilbert_report, hilbert_series, sweep_c
from poly import specialize_poly
from reports import (
    COMPARISON_COLUMNS,
    HILBERT_COLUMNS,
    RECORD_COLUMNS,
    SWEEP_COLUMNS,
    VerificationReport,
    render_csv,
    render_json,
    render_text,
    run_check,
    write_output,
)
from series import SingularVectorBuilder, expected_witness, specialization_witness
from session import Session, random_sessions, specialized_session, symbolic_session

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

# --c when the flag is omitted
DEFAULT_C_MODES = {
    "singular": "symbolic",
    "hilbert": "random",
    "verify": "random",
    "sweep": "all-Fp",
    "series": "symbolic",
}


# ============== Argument Parsing ==============

def parse_c(raw: str) -> Tuple[str, List[int]]:
    """Map the --c flag to (mode, integer values)."""
    text = raw.strip()
    if text in ("symbolic", "random", "all-Fp"):
        return text, []
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"--c must be symbolic, random, all-Fp, an integer or a list, got {raw!r}")
    if "," in text or not values:
        return "list", values
    return "value", values


def parse_modulus(raw: Optional[str]) -> Optional[Tuple[int, ...]]:
    if not raw:
        return None
    try:
        return tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"--modulus must be a comma-separated coefficient list, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="characteristic (prime)")
    common.add_argument("--n", type=int, required=True, help="number of ambient variables, divisible by p")
    common.add_argument("--c", default=None, help="symbolic | random | all-Fp | integer | comma list")
    common.add_argument("--symbolic", action="store_true", help="shorthand for --c symbolic")
    common.add_argument("--ext-degree", type=int, default=None, help="degree k of GF(p^k) for specializations")
    common.add_argument("--modulus", default=None, help="irreducible modulus, leading coefficient first")
    common.add_argument("--d-max", type=int, default=None, help="top degree for graded computations")
    common.add_argument("--relation-degree", type=int, default=DEFAULT_RELATION_DEGREE)
    common.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", choices=["json", "csv", "text"], default=None)
    common.add_argument("--out", default=None, help="output file (stdout if omitted)")
    common.add_argument("--no-timings", action="store_true", help="omit wall times from reports")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cherednik", description="Modular Cherednik singular-vector verifier")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("singular", parents=[common], help="build f_1..f_{n-1} and check they are singular")
    commands.add_parser("hilbert", parents=[common], help="Hilbert series of A/I_c")
    commands.add_parser("verify", parents=[common], help="run the full verification suite")
    commands.add_parser("sweep", parents=[common], help="scan specializations of c")
    commands.add_parser("series", parents=[common], help="dump g, F and F_i")
    return parser


def build_config(args: argparse.Namespace) -> SessionConfig:
    raw_c = "symbolic" if args.symbolic else args.c
    if raw_c is None:
        raw_c = DEFAULT_C_MODES[args.command]
    c_mode, c_values = parse_c(raw_c)
    output_format = args.format or ("csv" if args.command == "sweep" else "json")
    if args.command == "series" and args.format is None:
        output_format = "text"
    config = SessionConfig(
        p=args.p,
        n=args.n,
        c_mode=c_mode,
        c_values=c_values,
        ext_degree=args.ext_degree,
        modulus=parse_modulus(args.modulus),
        d_max=args.d_max,
        relation_degree=args.relation_degree,
        threads=args.threads,
        seed=args.seed,
        output_format=output_format,
        out=args.out,
        timings=not args.no_timings,
    )
    config.validate(needs_hilbert=args.command in ("hilbert", "verify", "sweep"))
    if args.command == "sweep" and c_mode == "symbolic":
        raise ConfigError("sweep needs specialized values of c")
    if args.command != "sweep" and c_mode in ("all-Fp", "list"):
        raise ConfigError(f"--c {raw_c} is only accepted by sweep")
    return config


# ============== Sessions ==============

def _specialization_field(config: SessionConfig):
    if config.ext_degree is not None or config.modulus is not None:
        return extension_field(config.p, config.ext_degree, config.modulus)
    return prime_field(config.p)


def build_sessions(config: SessionConfig, samples: int = 1) -> List[Session]:
    if config.c_mode == "symbolic":
        return [symbolic_session(config.p, config.n)]
    if config.c_mode == "random":
        return random_sessions(config.p, config.n, samples, config.seed, config.ext_degree, config.modulus)
    field = _specialization_field(config)
    return [specialized_session(config.p, config.n, field(v)) for v in config.c_values]


def sweep_values(config: SessionConfig) -> list:
    if config.c_mode == "all-Fp":
        return prime_field(config.p).elements()
    if config.c_mode == "random":
        return [s.c for s in random_sessions(config.p, config.n, 1, config.seed, config.ext_degree, config.modulus)]
    field = _specialization_field(config)
    return [field(v) for v in config.c_values]


def desk_scale_guard(config: SessionConfig) -> None:
    s = socle_degree(config.p, config.n)
    count = comb(s + config.n - 2, config.n - 2)
    if count > MONOMIAL_WARN_THRESHOLD:
        logger.warning(
            f"dim A_{s} = {count} monomials at the socle degree exceeds {MONOMIAL_WARN_THRESHOLD}; "
            f"recommended (p, n) pairs: {', '.join(map(str, RECOMMENDED_PAIRS))}"
        )


@contextmanager
def worker_pool(threads: int):
    """A thread pool, or None when a single thread is requested."""
    if threads <= 1:
        yield None
        return
    with ThreadPoolExecutor(max_workers=threads) as executor:
        yield executor


def _specialization_entry(session: Session, seed: int) -> dict:
    return {"c": str(session.c), "seed": seed, "field": repr(session.field)}


# ============== Checks ==============

def _check_singular(f, c, k: int) -> dict:
    defects = singular_defects(f, c)
    if defects:
        raise CheckFailure(
            f"f_{k} is not annihilated by D_(y_i - y_1) for i in {[i for i, _ in defects]}",
            {"k": k, "polynomial": str(f), "images": {str(i): str(image) for i, image in defects}}
        )
    return {"polynomial": str(f)}


def _check_independent(generators) -> dict:
    if not check_linear_independence(generators):
        raise CheckFailure("f_1, ..., f_{n-1} are linearly dependent", {"generators": [str(f) for f in generators]})
    return {"rank": len(generators)}


def _check_witnesses(session: Session, generators) -> dict:
    for j in range(1, session.n):
        values = specialization_witness(generators, j)
        expected = expected_witness(session, j)
        if values != expected:
            raise CheckFailure(
                f"witness values at x_{j} = 1, x_n = -1 differ from the closed form",
                {"j": j, "values": [str(v) for v in values], "expected": [str(v) for v in expected]}
            )
    return {"points": session.n - 1}


def _check_relations(session: Session, degree: int, executor) -> dict:
    records = check_relations(session, degree, executor)
    return {"groups": len(records), "checked": sum(r["checked"] for r in records)}


def _check_kernel_agreement(forms: Sequence[ContravariantForm], d_max: int) -> dict:
    agree, dims = kernel_dims_agree(forms, d_max)
    if not agree:
        raise CheckFailure("J_c dimensions differ between specializations", {"dims": dims})
    return {"dims": dims[0]}


def _check_coherence(session: Session, symbolic_generators, generators) -> dict:
    specialized = [specialize_poly(f, session.c, session.ring) for f in symbolic_generators]
    if specialized != generators:
        raise CheckFailure(
            "specialized symbolic generators differ from generators built at c",
            {"c": str(session.c)}
        )
    return {"generators": len(generators)}


# ============== Commands ==============

def _emit_report(report: VerificationReport, config: SessionConfig, extra_text: str = "") -> str:
    if config.output_format == "json":
        return render_json(report.to_dict(config.timings), "verification_report")
    if config.output_format == "csv":
        rows = [r.to_dict(config.timings) for r in report.records]
        return render_csv(rows, RECORD_COLUMNS)
    return render_text(report, config.timings) + extra_text


def cmd_singular(config: SessionConfig, executor=None) -> Tuple[int, str]:
    sessions = build_sessions(config)
    report = VerificationReport("singular", sessions[0].to_dict())
    lines = []
    for session in sessions:
        generators = SingularVectorBuilder(session).generators(executor)
        for k, f in enumerate(generators, start=1):
            report.add(run_check("singular", {"k": k, "c": session.label}, _check_singular, f, session.c, k))
            lines.append(f"f_{k} = {f}")
        if "generators" not in report.extra:
            report.extra["generators"] = [str(f) for f in generators]
    if config.c_mode == "random":
        report.extra["specializations"] = [_specialization_entry(s, config.seed) for s in sessions]
    text = _emit_report(report, config, "\n".join(lines) + "\n")
    return (EXIT_PASS if report.verdict == "pass" else EXIT_FAIL), text


def cmd_hilbert(config: SessionConfig, executor=None) -> Tuple[int, str]:
    sessions = build_sessions(config, SPECIALIZATION_SAMPLES)
    reports = []
    for session in sessions:
        generators = SingularVectorBuilder(session).generators(executor)
        series = hilbert_series(generators, config.effective_d_max, executor)
        reports.append(hilbert_report(series, config.p, config.n))
        if not reports[-1]["formula_match"]:
            logger.error(f"c = {session.label}: Hilbert series {series.dims} does not match {reports[-1]['formula']}")
    report = reports[0]
    verdict = "pass" if all(r["formula_match"] for r in reports) else "fail"
    document = {"session": sessions[0].to_dict(), **report, "verdict": verdict}
    if config.c_mode == "random":
        document["specializations"] = [
            {**_specialization_entry(s, config.seed), "dims": r["dims"], "formula_match": r["formula_match"]}
            for s, r in zip(sessions, reports)
        ]
    if config.output_format == "json":
        text = render_json(document, "hilbert")
    elif config.output_format == "csv":
        rows = [{"d": d, "dim": dim, "formula": want} for d, (dim, want) in enumerate(zip(report["dims"], report["formula"]))]
        text = render_csv(rows, HILBERT_COLUMNS)
    else:
        text = (
            f"hilbert: {verdict.upper()}\n"
            f"  dims:         {report['dims']}\n"
            f"  formula:      {report['formula']}\n"
            f"  socle degree: {report['socle_degree']}\n"
            f"  total dim:    {report['total_dim']}\n"
        )
    return (EXIT_PASS if verdict == "pass" else EXIT_FAIL), text


def _verify_session(report: VerificationReport, session: Session, config: SessionConfig, executor, symbolic_generators=None):
    label = session.label
    builder = SingularVectorBuilder(session)
    d_max = config.effective_d_max
    report.add(run_check("lemma_g", {"c": label}, builder.check_lemma_g))
    report.add(run_check("lemma_V", {"c": label}, builder.check_lemma_V))
    report.add(run_check("lemma_G", {"c": label}, builder.check_lemma_G))
    report.add(run_check("zero_degeneration", {"c": label}, builder.check_zero_degeneration))
    report.add(run_check(
        "relations", {"c": label, "degree": config.relation_degree},
        _check_relations, session, config.relation_degree, executor
    ))
    generators = builder.generators(executor)
    for k, f in enumerate(generators, start=1):
        report.add(run_check("singular", {"k": k, "c": label}, _check_singular, f, session.c, k))
    report.add(run_check("independence", {"c": label}, _check_independent, generators))
    report.add(run_check("witness", {"c": label}, _check_witnesses, session, generators))
    if symbolic_generators is not None:
        report.add(run_check("coherence", {"c": label}, _check_coherence, session, symbolic_generators, generators))
    report.add(run_check(
        "complete_intersection", {"c": label, "d_max": d_max},
        check_complete_intersection, generators, d_max, executor
    ))
    form = ContravariantForm(session, executor)
    comparison = run_check(
        "compare_ideals", {"c": label, "d_max": d_max},
        compare_ideals, session, generators, d_max, form=form
    )
    if comparison.passed:
        rows = comparison.result
        comparison.result = {"degrees": len(rows)}
    else:
        rows = comparison.witness.get("records", [])
    report.add(comparison)
    report.extra.setdefault("comparison", rows)
    return form


def cmd_verify(config: SessionConfig, executor=None) -> Tuple[int, str]:
    sessions = build_sessions(config, SPECIALIZATION_SAMPLES)
    report = VerificationReport("verify", sessions[0].to_dict())
    symbolic = None
    symbolic_generators = None
    if config.c_mode == "random":
        symbolic = symbolic_session(config.p, config.n)
        symbolic_generators = SingularVectorBuilder(symbolic).generators(executor)
        report.extra["specializations"] = [_specialization_entry(s, config.seed) for s in sessions]
    forms = [_verify_session(report, session, config, executor, symbolic_generators) for session in sessions]
    if symbolic is not None:
        report.add(run_check(
            "symbolic_containment", {"c": symbolic.label, "d_max": config.effective_d_max},
            verify_containment, symbolic, symbolic_generators, config.effective_d_max,
            form=ContravariantForm(symbolic, executor)
        ))
    if len(sessions) > 1:
        report.add(run_check(
            "kernel_agreement", {"samples": len(sessions), "d_max": config.effective_d_max},
            _check_kernel_agreement, forms, config.effective_d_max
        ))
    extra_text = ""
    if report.extra.get("comparison"):
        extra_text = render_csv(report.extra["comparison"], COMPARISON_COLUMNS)
    text = _emit_report(report, config, extra_text)
    failure = report.first_failure
    if failure is not None:
        logger.error(f"First failing check: {failure.name} {failure.parameters}")
    return (EXIT_PASS if failure is None else EXIT_FAIL), text


def cmd_sweep(config: SessionConfig, executor=None) -> Tuple[int, str]:
    values = sweep_values(config)
    session = symbolic_session(config.p, config.n)
    generators = SingularVectorBuilder(session).generators(executor) if values else []
    rows = sweep_c(generators, values, config.effective_d_max, executor)
    documents = [row.to_dict() for row in rows]
    if config.output_format == "json":
        text = render_json({"session": {"p": config.p, "n": config.n}, "rows": documents}, "sweep")
    elif config.output_format == "csv":
        text = render_csv(documents, SWEEP_COLUMNS)
    else:
        text = "".join(
            f"c = {row.c}: independent={row.independent}, hilbert_match={row.hilbert_match}, "
            f"first_deviation={row.first_deviation}" + (f", error={row.error}" if row.error else "") + "\n"
            for row in rows
        )
    return EXIT_PASS, text


def cmd_series(config: SessionConfig, executor=None) -> Tuple[int, str]:
    session = build_sessions(config)[0]
    builder = SingularVectorBuilder(session)
    dumps = {"g": builder.build_g(), "F": builder.build_F()}
    for i in range(1, config.n):
        dumps[f"F_{i}"] = builder.build_Fi(i)
    if config.output_format == "json":
        document = {
            "session": session.to_dict(),
            "series": {name: [str(a) for a in s.coeffs] for name, s in dumps.items()},
        }
        return EXIT_PASS, render_json(document, "series")
    if config.output_format == "csv":
        rows = [
            {"series": name, "order": l, "coefficient": str(a)}
            for name, s in dumps.items() for l, a in enumerate(s.coeffs)
        ]
        return EXIT_PASS, render_csv(rows, ["series", "order", "coefficient"])
    return EXIT_PASS, "".join(f"{name}(z):\n{s.dump()}\n" for name, s in dumps.items())


COMMANDS = {
    "singular": cmd_singular,
    "hilbert": cmd_hilbert,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "series": cmd_series,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else getattr(logging, LOG_LEVEL, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    try:
        config = build_config(args)
    except (ConfigError, InvalidArgument) as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    desk_scale_guard(config)
    logger.info(f"{args.command}: p = {config.p}, n = {config.n}, c = {config.c_mode} {config.c_values or ''}".rstrip())
    try:
        with worker_pool(config.threads) as executor:
            code, text = COMMANDS[args.command](config, executor)
    except (ConfigError, InvalidArgument) as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except CherednikError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    write_output(text, config.output_path())
    logger.info(f"{args.command}: exit {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
