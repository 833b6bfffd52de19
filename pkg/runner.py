#!/usr/bin/env python3
"""
chebdyn command-line runner.

Subcommands:
  analyze   fixed points, critical points and the ∞-series of C_f or N_f
  render    basin image of C_n (or N_{z e^{z^n}}) as binary PPM
  verify    numeric checks of the statements about C_n, as a JSON array
  profile   sign table of C_n(x) − x and C_n′(x) on the real line

Exit codes: 0 ok, 1 failed claim, 2 usage/parse error, 3 degenerate input
or analysis failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, List, Optional, Sequence, Tuple

from chebdyn.config import DEFAULT_BUDGET, VERIFY_N_MAX, load_settings
from chebdyn.dynamics import real_line_profile, render_basins
from chebdyn.errors import ChebdynError, DegenerateInput, NotParabolicAtInfinity
from chebdyn.fixed import critical_points, fixed_points
from chebdyn.maps import (
    build_chebyshev,
    build_cn,
    build_newton,
    build_newton_cn,
    cn_function,
    series_at_infinity,
)
from chebdyn.types import BASIN_INFINITY, BASIN_ZERO, UNRESOLVED, ComplexPoly, ExpPolyFunction, Viewport
from chebdyn.verify import CLAIM_IDS, run_all, run_claim
from utils.report_codec import (
    analysis_document,
    claim_report_to_dict,
    dumps_document,
    profile_document,
)
from utils.step_logger import StepLogger
from visualizer import create_visualization

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_IO = 4


class CliError(RuntimeError):
    """Raised when a command cannot run; carries the exit code."""

    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


# ============================================================================
# ARGUMENT PARSING
# ============================================================================

def _split_imaginary(body: str) -> Tuple[str, str]:
    """Split 'a+b' (the part before the trailing i) at the last sign that is not an exponent sign."""
    for idx in range(len(body) - 1, 0, -1):
        if body[idx] in "+-" and body[idx - 1] not in "eE":
            return body[:idx], body[idx:]
    return "", body


def parse_complex(token: str) -> complex:
    """Parse `a`, `bi` or `a+bi` (e.g. `-1.5+2i`, `3i`, `2`, `-i`)."""
    text = token.strip()
    if not text or " " in text:
        raise ValueError(f"bad complex literal '{token}'")
    try:
        if not text.endswith("i"):
            value = complex(float(text), 0.0)
        else:
            real_text, imag_text = _split_imaginary(text[:-1])
            real = float(real_text) if real_text else 0.0
            if imag_text in ("", "+"):
                imag = 1.0
            elif imag_text == "-":
                imag = -1.0
            else:
                imag = float(imag_text)
            value = complex(real, imag)
    except ValueError:
        raise ValueError(f"bad complex literal '{token}'") from None
    if value != value or abs(value) == float("inf"):
        raise ValueError(f"bad complex literal '{token}'")
    return value


def complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def coefficient_list(text: str) -> ComplexPoly:
    """Comma-separated ascending coefficients."""
    coeffs = []
    for token in text.split(","):
        try:
            coeffs.append(parse_complex(token))
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e))
    return ComplexPoly(tuple(coeffs))


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def n_max_arg(text: str) -> int:
    value = positive_int(text)
    if value > VERIFY_N_MAX:
        raise argparse.ArgumentTypeError(f"--n-max must be at most {VERIFY_N_MAX}, got {value}")
    return value


def size_arg(text: str) -> Tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected WxH, got '{text}'")
    try:
        width, height = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got '{text}'")
    if width < 1 or height < 1:
        raise argparse.ArgumentTypeError(f"image size must be positive, got '{text}'")
    return width, height


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got '{text}'")
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"expected a positive number, got '{text}'")
    return value


# Options whose values may start with '-' (complex numbers, coefficient lists)
VALUE_OPTIONS = ("--p", "--q", "--center")


def join_value_options(argv: Sequence[str]) -> List[str]:
    """Rewrite ``--p -1,2`` as ``--p=-1,2``; argparse would take -1,2 for an option."""
    joined: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        value = next(tokens, None) if token in VALUE_OPTIONS else None
        joined.append(token if value is None else f"{token}={value}")
    return joined


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="runner.py",
        description="Chebyshev and Newton iteration maps of p(z)e^{q(z)}: analysis, basin images and checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="Fixed/critical point report as JSON")
    source = analyze.add_mutually_exclusive_group(required=True)
    source.add_argument("--n", type=positive_int, help="Use f = z e^{z^n}")
    source.add_argument("--p", type=coefficient_list, help="Ascending coefficients of p, e.g. 0,1")
    analyze.add_argument("--q", type=coefficient_list, default=None, help="Ascending coefficients of q (default 0)")
    analyze.add_argument("--method", choices=("chebyshev", "newton"), default="chebyshev")

    render = sub.add_parser("render", help="Basin image as binary PPM")
    render.add_argument("--n", type=positive_int, required=True)
    render.add_argument("--out", required=True, help="Output .ppm path")
    render.add_argument("--center", type=complex_arg, default=0j)
    render.add_argument("--half-width", type=positive_float, default=3.0)
    render.add_argument("--size", type=size_arg, default=(512, 512), help="WxH (default 512x512)")
    render.add_argument("--budget", type=positive_int, default=DEFAULT_BUDGET)
    render.add_argument("--view", choices=("plane", "infinity"), default="plane")
    render.add_argument("--method", choices=("chebyshev", "newton"), default="chebyshev")

    verify = sub.add_parser("verify", help="Run the claim checks and print ClaimReports")
    verify.add_argument("--n-max", type=n_max_arg, default=16)
    verify.add_argument("--claim", choices=CLAIM_IDS, default=None)

    profile = sub.add_parser("profile", help="Real-line sign table of C_n")
    profile.add_argument("--n", type=positive_int, required=True)

    return parser


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_analyze(args: argparse.Namespace, logger: StepLogger) -> Tuple[int, Any]:
    if args.n is not None:
        f = cn_function(args.n)
    else:
        if args.p.is_zero:
            raise CliError("p must not be the zero polynomial", EXIT_USAGE)
        f = ExpPolyFunction(args.p, args.q if args.q is not None else ComplexPoly(()))

    logger.log_step_start("build_map", {"method": args.method, "n": args.n})
    R = build_chebyshev(f) if args.method == "chebyshev" else build_newton(f)
    logger.log_step_complete({"degree": R.degree})

    logger.log_step_start("fixed_and_critical_points")
    fixed = fixed_points(R, f.p)
    critical = critical_points(R, f.p)
    try:
        series = series_at_infinity(R)
    except NotParabolicAtInfinity:
        series = None
    logger.log_step_complete(
        {"fixed": len(fixed), "critical": len(critical)},
        metadata={"parabolic_infinity": series is not None},
    )
    return EXIT_OK, analysis_document(f, R, fixed, critical, series, args.method)


def cmd_render(args: argparse.Namespace, logger: StepLogger, workers: int) -> Tuple[int, Any]:
    width, height = args.size
    R = build_cn(args.n) if args.method == "chebyshev" else build_newton_cn(args.n)
    viewport = Viewport(args.center, args.half_width, width, height)

    logger.log_step_start("render", {
        "n": args.n, "method": args.method, "view": args.view,
        "size": [width, height], "budget": args.budget, "half_width": args.half_width,
    })
    print(f"[PARALLEL] Rendering {width}x{height} on {workers} threads", file=sys.stderr)
    grid = render_basins(R, viewport, args.budget, workers=workers, view=args.view)
    fractions = {
        "basin-zero": grid.fraction(BASIN_ZERO),
        "basin-infinity": grid.fraction(BASIN_INFINITY),
        "unresolved": grid.fraction(UNRESOLVED),
    }
    logger.log_step_complete(fractions)
    if fractions["unresolved"] > 0:
        print(f"[WARN] {fractions['unresolved']:.2%} of pixels unresolved within budget", file=sys.stderr)

    try:
        create_visualization(grid, args.out)
    except OSError as e:
        raise CliError(f"cannot write {args.out}: {e}", EXIT_IO)
    return EXIT_OK, None


def cmd_verify(args: argparse.Namespace, logger: StepLogger, workers: int) -> Tuple[int, Any]:
    if args.claim is None:
        reports = run_all(args.n_max, workers=workers)
    else:
        reports = run_claim(args.claim, args.n_max, workers=workers)

    documents = [claim_report_to_dict(r) for r in reports]
    for doc in documents:
        suffix = "_".join(f"{k}{v}" for k, v in doc["parameters"].items() if k == "n")
        logger.log_step_start(f"{doc['claim_id']}{'_' + suffix if suffix else ''}", doc["parameters"])
        logger.log_step_complete(doc, metadata={"verdict": doc["verdict"]})

    failed = [d for d in documents if d["verdict"] == "fail"]
    for doc in failed:
        print(f"[ERROR] claim {doc['claim_id']} {doc['parameters']} failed", file=sys.stderr)
    if not failed:
        print(f"[OK] {len(documents)} claim reports, none failed", file=sys.stderr)
    return (EXIT_CLAIM_FAILED if failed else EXIT_OK), documents


def cmd_profile(args: argparse.Namespace, logger: StepLogger) -> Tuple[int, Any]:
    logger.log_step_start("real_line_profile", {"n": args.n})
    document = profile_document(real_line_profile(args.n))
    logger.log_step_complete(document, metadata={"ordered": document["ordered"]})
    if not document["ordered"]:
        print(f"[WARN] breakpoints of C_{args.n} are not in the expected order", file=sys.stderr)
    return EXIT_OK, document


# ============================================================================
# CLI INTERFACE
# ============================================================================

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(join_value_options(sys.argv[1:] if argv is None else argv))

    try:
        settings = load_settings()
    except ValueError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_USAGE

    subject = args.command if getattr(args, "n", None) is None else f"{args.command}_n{args.n}"
    logger = StepLogger(subject, enabled=settings.step_logging, log_dir=settings.log_dir)

    try:
        if args.command == "analyze":
            code, document = cmd_analyze(args, logger)
        elif args.command == "render":
            code, document = cmd_render(args, logger, settings.worker_count())
        elif args.command == "verify":
            code, document = cmd_verify(args, logger, settings.worker_count())
        else:
            code, document = cmd_profile(args, logger)
    except CliError as e:
        if e.exit_code == EXIT_USAGE:
            parser.error(str(e))
        print(f"[ERROR] {e}", file=sys.stderr)
        return e.exit_code
    except DegenerateInput as e:
        print(f"[ERROR] degenerate input: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ChebdynError as e:
        print(f"[ERROR] {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DEGENERATE

    if document is not None:
        sys.stdout.write(dumps_document(document))
        logger.log_final_output(document)
    return code


if __name__ == "__main__":
    sys.exit(main())
