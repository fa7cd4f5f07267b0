import argparse
import logging
import sys

from pyautotune import __version__
from pyautotune._functions import FUNCTIONS
from pyautotune._trace import FORMATS
from pyautotune.autotuning import DEFAULT_SEED


LOG_FORMAT = '%(asctime)-15s: %(message)s'

EXIT_RUNTIME_ERROR = 1
EXIT_USAGE_ERROR = 2

BENCH_DEFAULTS = dict(lower=-5.0, upper=5.0, dim=2, num_opt=4, max_iter=200, ignore=0)
RBGS_DEFAULTS = dict(lower=1.0, upper=None, num_opt=4, max_iter=10, ignore=1)


def check_positive_int(value):
    try:
        value = int(value)
        if value <= 0:
            raise argparse.ArgumentTypeError("Argument must a be positive integer.")
    except ValueError:
        raise argparse.ArgumentTypeError("{} is not an integer".format(value))
    return value


def check_non_negative_int(value):
    try:
        value = int(value)
        if value < 0:
            raise argparse.ArgumentTypeError("Argument must a be non-negative integer.")
    except ValueError:
        raise argparse.ArgumentTypeError("{} is not an integer".format(value))
    return value


def check_positive(value):
    try:
        value = float(value)
        if not value > 0:
            raise argparse.ArgumentTypeError("Argument must a be positive number.")
    except ValueError:
        raise argparse.ArgumentTypeError("{} is not a number".format(value))
    return value


def tuning_opts(cmd):
    cmd.add_argument("--config", metavar="FILENAME",
                     help="TOML file with default values for these options")
    cmd.add_argument("-v", "--verbose", action="store_true",
                     help="Log every evaluation and the optimizer state")
    cmd.add_argument("--optimizer", choices=("csa", "nm"), default="csa",
                     help="Numerical optimizer (default: csa)")
    cmd.add_argument("--lower", type=float,
                     help="Lower bound of every tuned parameter")
    cmd.add_argument("--upper", type=float,
                     help="Upper bound of every tuned parameter")
    cmd.add_argument("--ignore", type=check_non_negative_int,
                     help="Executions discarded per candidate before the measured one")
    cmd.add_argument("--num-opt", type=check_positive_int,
                     help="Number of coupled annealers (csa)")
    cmd.add_argument("--max-iter", type=check_non_negative_int,
                     help="Iterations (csa) or evaluation limit, 0 = none (nm)")
    cmd.add_argument("--nm-error", type=check_positive, default=1e-6,
                     help="Stopping spread of the simplex costs (nm, default: 1e-6)")
    cmd.add_argument("--seed", type=int, default=DEFAULT_SEED,
                     help="Random seed (default: %s)" % DEFAULT_SEED)
    cmd.add_argument("--entropy", action="store_true",
                     help="Seed from OS entropy instead of --seed")
    cmd.add_argument("--output", choices=FORMATS, default="csv",
                     help="Trace format (default: csv)")
    cmd.add_argument("--output-path", metavar="FILENAME",
                     help="Write the trace to FILENAME instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(
        prog='pyautotune',
        description=("Tunes runtime parameters with coupled simulated "
                     "annealing or Nelder-Mead and reports every evaluation."))
    parser.add_argument('-V', '--version', action='version',
                        version=f'%(prog)s {__version__}')

    subparsers = parser.add_subparsers(dest='action')
    cmds = {}

    # bench
    cmd = subparsers.add_parser(
        'bench', help='Minimize an analytic function through exec()')
    tuning_opts(cmd)
    cmd.add_argument("--dim", type=check_positive_int,
                     help="Number of tuned parameters")
    cmd.add_argument("--function", choices=sorted(FUNCTIONS), default="sphere",
                     help="Cost function (default: sphere)")
    cmds['bench'] = cmd

    # rbgs
    cmd = subparsers.add_parser(
        'rbgs', help='Solve a Laplace problem with red-black Gauss-Seidel, '
                     'tuning the scheduling chunk')
    tuning_opts(cmd)
    cmd.add_argument("--threads", type=check_positive_int, default=4,
                     help="Worker threads (default: 4)")
    cmd.add_argument("--n", type=check_positive_int, default=128,
                     help="Interior cells per side (default: 128)")
    cmd.add_argument("--tol", type=check_positive, default=1e-6,
                     help="Convergence threshold on diff / n^2 (default: 1e-6)")
    cmd.add_argument("--max-sweeps", type=check_positive_int, default=1000,
                     help="Sweep limit (default: 1000)")
    cmd.add_argument("--chunks-mode", choices=("single", "dual"), default="single",
                     help="Tune one chunk for both colours, or one per colour")
    cmd.add_argument("--tuned-mode", choices=("entire", "single", "fixed"),
                     default="entire",
                     help="Tune before the solver loop, inside it, or not at all")
    cmd.add_argument("--fixed-chunk", type=check_positive_int, default=1,
                     help="Chunk for --tuned-mode fixed (default: 1)")
    cmds['rbgs'] = cmd

    return parser, cmds


def _apply_config(argv, cmds):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    from pyautotune import _config
    defaults = _config.load_config(known.config)
    for cmd in cmds.values():
        cmd.set_defaults(**defaults)


CHOICES = {
    'optimizer': ('csa', 'nm'),
    'function': tuple(FUNCTIONS),
    'output': FORMATS,
    'chunks_mode': ('single', 'dual'),
    'tuned_mode': ('entire', 'single', 'fixed'),
}


def validate_options(parser, options):
    # Values from --config bypass argparse's own checks.
    for name, choices in CHOICES.items():
        value = getattr(options, name, None)
        if value is not None and value not in choices:
            parser.error(f'invalid {name} {value!r} (choose from {", ".join(choices)})')

    defaults = BENCH_DEFAULTS if options.action == 'bench' else RBGS_DEFAULTS
    for name, value in defaults.items():
        if getattr(options, name, None) is None:
            setattr(options, name, value)
    if options.action == 'rbgs':
        if options.upper is None:
            options.upper = float(options.n)
        options.dim = 2 if options.chunks_mode == 'dual' else 1

    if not options.lower < options.upper:
        parser.error(f'--lower ({options.lower}) must be smaller than --upper ({options.upper})')
    for name in ('dim', 'num_opt'):
        if getattr(options, name) < 1:
            parser.error(f'--{name.replace("_", "-")} must be a positive integer')
    if options.ignore < 0:
        parser.error('--ignore must be a non-negative integer')
    if options.optimizer == 'csa' and options.max_iter < 1:
        parser.error('--max-iter must be a positive integer with --optimizer csa')
    if options.max_iter < 0:
        parser.error('--max-iter must be a non-negative integer')
    if not options.nm_error > 0:
        parser.error('--nm-error must be positive')
    if options.action == 'rbgs':
        for name in ('threads', 'n', 'max_sweeps', 'fixed_chunk'):
            if getattr(options, name) < 1:
                parser.error(f'--{name.replace("_", "-")} must be a positive integer')
        if not options.tol > 0:
            parser.error('--tol must be positive')
    if options.entropy:
        options.seed = None


def parse_args(argv=None):
    parser, cmds = build_parser()
    try:
        _apply_config(argv, cmds)
    except (OSError, ValueError) as exc:
        parser.error(f'--config: {exc}')

    options = parser.parse_args(argv)

    if not options.action:
        # an action is mandatory
        parser.print_help()
        sys.exit(EXIT_USAGE_ERROR)

    validate_options(parser, options)
    return (parser, options)


def _main(argv=None):
    parser, options = parse_args(argv)

    logging.basicConfig(format=LOG_FORMAT,
                        level=logging.DEBUG if options.verbose else logging.WARNING)

    from pyautotune._domain import AutotuneError
    from pyautotune.commands import cmd_bench, cmd_rbgs

    try:
        if options.action == 'bench':
            cmd_bench(options)
        elif options.action == 'rbgs':
            cmd_rbgs(options)
        else:
            parser.print_help()
            sys.exit(EXIT_USAGE_ERROR)
    except (AutotuneError, OSError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr, flush=True)
        sys.exit(EXIT_RUNTIME_ERROR)


def main(argv=None):
    try:
        _main(argv)
    except KeyboardInterrupt:
        print("Tuning interrupted: exit!", flush=True)
        sys.exit(EXIT_RUNTIME_ERROR)
