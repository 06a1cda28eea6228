import argparse
import sys
from typing import List, Optional

from ninfty.commands import group, seq
from ninfty.utils.config import override_settings
from ninfty.utils.errors import NinftyError
from ninfty.utils.logger import logger, set_verbosity

VERSION = "1.0.0"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ninfty",
        description="Realizability of sequences of families of graph subgroups of G x Sigma_n",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("--cache-dir", help="cache directory (default: NINFTY_CACHE or the platform cache)")
    parser.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    parser.add_argument("--threads", type=int, help="worker threads for internal parallelism")
    parser.add_argument("--progress", action="store_true", help="progress bars on stderr")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("group", help="order, subgroups and conjugacy classes of a group")
    p.add_argument("group", help="builtin spec (C4, S3, D4, K4, C2xC2, ...) or group JSON file")
    p.add_argument("--subgroups", action="store_true")
    p.add_argument("--conjugacy", action="store_true")
    p.set_defaults(handler=group.cmd_group)

    p = commands.add_parser("graphs", help="graph subgroups of G x Sigma_n")
    p.add_argument("group")
    p.add_argument("--arity", type=int, required=True)
    p.set_defaults(handler=group.cmd_graphs)

    seq_parser = commands.add_parser("seq", help="sequences of families")
    seq_commands = seq_parser.add_subparsers(dest="seq_command", required=True)

    p = seq_commands.add_parser("check", help="decide realizability")
    p.add_argument("file")
    p.add_argument("--strict", action="store_true", help="reject levels that are not closed as given")
    p.set_defaults(handler=seq.cmd_check)

    p = seq_commands.add_parser("close", help="realizable closure")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=seq.cmd_close)

    p = seq_commands.add_parser("from-norms", help="minimal realizable sequence admitting norms")
    p.add_argument("group")
    p.add_argument("--max-arity", type=int, required=True)
    p.add_argument("--norm", action="append", metavar="H:K", help="comma-separated generators of H and K")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=seq.cmd_from_norms)

    p = seq_commands.add_parser("enumerate", help="all realizable sequences and their poset")
    p.add_argument("group")
    p.add_argument("--max-arity", type=int, required=True)
    p.add_argument("--mode", default="full", help="full or h:<h-family file>")
    p.add_argument("--poset", metavar="DOT_FILE")
    p.set_defaults(handler=seq.cmd_enumerate)

    p = seq_commands.add_parser("audit", help="coproduct, product and self-induction audits")
    p.add_argument("file")
    p.add_argument("--representatives", choices=["min", "max"], default="min")
    p.set_defaults(handler=seq.cmd_audit)

    p = seq_commands.add_parser("admissible", help="admissible H-sets of a sequence")
    p.add_argument("file")
    p.add_argument("--subgroup", required=True, help="comma-separated generators of H")
    p.set_defaults(handler=seq.cmd_admissible)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    set_verbosity(args.verbose)

    try:
        override_settings(
            cache_dir=args.cache_dir,
            cache_enabled=False if args.no_cache else None,
            threads=args.threads,
            progress=True if args.progress else None,
        )
        return args.handler(args)

    except NinftyError as e:
        logger.error(e.detail)
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code

    except AssertionError as e:
        logger.error(f"internal consistency check failed: {e}")
        print(f"error: internal consistency check failed: {e}", file=sys.stderr)
        return 2

    except Exception as e:
        logger.exception(f"unexpected failure in {args.command}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
