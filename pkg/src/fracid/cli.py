"""Command-line front end: ``fracid simulate|derive|fit|identify``.

Errors are reported as one line ``<ErrorClass>: <message>`` on stderr with
exit status 2.
"""

import argparse
import sys

from .core import MemoryPolicy, ModelParameters, SampledSeries, fractional_derivative, simulate, steady_state_gain
from .errors import FracIdError, SingularNormalMatrix
from .identify import SearchConfig, approximation_criterion, fit_linear_coefficients, identify
from .seriesio import (
    format_fit_report,
    format_identification_report,
    load_series,
    write_report,
    write_series,
)

DEFAULT_STEP = 0.05
DEFAULT_HORIZON = 20.0


class UsageError(FracIdError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _memory(args):
    if args.memory == "truncated":
        if args.memory_length is None:
            raise UsageError("--memory truncated needs --memory-length")
        return MemoryPolicy.truncated(args.memory_length)
    return MemoryPolicy.full()


def _need_output(path, what):
    inp, out = load_series(path)
    if out is None:
        raise UsageError(f"{path}: {what} needs a three-column file (time input output)")
    return inp, out


def cmd_simulate(args):
    model = ModelParameters(args.a2, args.a1, args.a0, args.alpha, args.beta)
    if args.gain:
        print(f"gain: {steady_state_gain(model):.6g}", file=sys.stderr)
    if args.input:
        u, _ = load_series(args.input)
    else:
        u = SampledSeries.unit_step(args.step, args.horizon)
    y = simulate(model, u, _memory(args))
    if args.with_input:
        write_series(args.output, u.step, u.values, y.values, names=("time", "input", "output"))
    else:
        write_series(args.output, y.step, y.values, names=("time", "output"))


def cmd_derive(args):
    inp, out = load_series(args.input)
    if args.column == "input" or (args.column == "auto" and out is None):
        signal = inp
    elif out is None:
        raise UsageError(f"{args.input}: no output column to differentiate")
    else:
        signal = out
    d = fractional_derivative(signal, args.order, _memory(args))
    write_series(args.output, d.step, d.values, names=("time", "derivative"))


def cmd_fit(args):
    u, y = _need_output(args.input, "fit")
    memory = _memory(args)
    try:
        fit = fit_linear_coefficients(y, u, args.alpha, args.beta, memory, kind=args.model_kind)
    except SingularNormalMatrix as exc:
        raise SingularNormalMatrix(
            f"{exc}; hint: check that the output is excited by the input and that alpha != beta"
        ) from None
    q = None
    if args.output or args.with_criterion:
        modeled = simulate(fit.model(), u, memory)
        q = approximation_criterion(y, modeled)
        if args.output:
            write_series(args.output, u.step, y.values, modeled.values, names=("time", "measured", "model"))
    write_report(args.report, format_fit_report(fit, q))


def cmd_identify(args):
    u, y = _need_output(args.input, "identify")
    two = args.model_kind == "two_member"
    if two:
        a_iv = None
    else:
        if args.alpha_min is None or args.alpha_max is None:
            raise UsageError("--alpha-min and --alpha-max are required unless --model-kind two_member")
        a_iv = (args.alpha_min, args.alpha_max)
    restarts = tuple(
        (None if two else (r[0], r[1]), (r[2], r[3])) for r in (args.restart or [])
    )
    config = SearchConfig(
        alpha_interval=a_iv,
        beta_interval=(args.beta_min, args.beta_max),
        epsilon=args.epsilon,
        accuracy=args.accuracy,
        max_rounds=args.max_rounds,
        model_kind=args.model_kind,
        restarts=restarts,
    )
    memory = _memory(args)
    result = identify(y, u, config, memory, workers=args.workers)
    if args.output:
        modeled = simulate(result.model, u, memory)
        write_series(args.output, u.step, y.values, modeled.values, names=("time", "measured", "model"))
    write_report(args.report, format_identification_report(result))


def build_parser():
    parser = _Parser(prog="fracid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--memory", choices=("full", "truncated"), default="full",
                        help="GL memory policy (default: full)")
    common.add_argument("--memory-length", type=float, help="memory length L in time units")

    p = sub.add_parser("simulate", parents=[common], help="step/forced response of a model")
    p.add_argument("--a2", type=float, required=True)
    p.add_argument("--a1", type=float, required=True)
    p.add_argument("--a0", type=float, required=True)
    p.add_argument("--alpha", type=float, help="order of the a2 term (omit when a2 = 0)")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--input", help="input series file; default is a unit step")
    p.add_argument("--step", type=float, default=DEFAULT_STEP, help="step of the synthesized unit step")
    p.add_argument("--horizon", type=float, default=DEFAULT_HORIZON, help="horizon of the synthesized unit step")
    p.add_argument("--output", default="-", help="output series file (default: stdout)")
    p.add_argument("--with-input", action="store_true",
                   help="write time, input, output so the file feeds fit/identify")
    p.add_argument("--gain", action="store_true", help="print the steady-state gain 1/a0 on stderr")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("derive", parents=[common], help="GL fractional derivative of a series")
    p.add_argument("--input", required=True)
    p.add_argument("--order", type=float, required=True)
    p.add_argument("--column", choices=("auto", "input", "output"), default="auto",
                   help="column to differentiate; auto picks output when present")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("fit", parents=[common], help="least-squares a2, a1, a0 at fixed orders")
    p.add_argument("--input", required=True, help="file with time, input, output columns")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--model-kind", choices=("three_member", "two_member"), default="three_member")
    p.add_argument("--report", default="-")
    p.add_argument("--output", help="write measured and fitted response series here")
    p.add_argument("--with-criterion", action="store_true", help="also report Q of the fitted model")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("identify", parents=[common], help="identify a2, a1, a0, alpha, beta")
    p.add_argument("--input", required=True, help="file with time, input, output columns")
    p.add_argument("--alpha-min", type=float)
    p.add_argument("--alpha-max", type=float)
    p.add_argument("--beta-min", type=float, required=True)
    p.add_argument("--beta-max", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=0.05, help="fineness of division")
    p.add_argument("--accuracy", type=float, default=1e-4, help="stop when both intervals are this narrow")
    p.add_argument("--max-rounds", type=int, default=20)
    p.add_argument("--model-kind", choices=("three_member", "two_member", "fixed_orders"),
                   default="three_member")
    p.add_argument("--restart", type=float, nargs=4, action="append",
                   metavar=("AMIN", "AMAX", "BMIN", "BMAX"),
                   help="extra starting intervals; repeatable")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--report", default="-")
    p.add_argument("--output", help="write measured and fitted response series here")
    p.set_defaults(func=cmd_identify)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.command == "fit" and args.model_kind == "three_member" and args.alpha is None:
            raise UsageError("--alpha is required for a three-member fit")
        args.func(args)
    except (FracIdError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"{type(exc).__name__}: {msg}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
