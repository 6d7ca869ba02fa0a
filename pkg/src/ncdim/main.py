#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT
"""
The entry-point methods used when ncdim is invoked from the command line.
"""

import argparse
import sys
from pathlib import Path

import colorama
from colorama import Fore, Style

from . import paths
from .run import run
from .schemas import SchemaError
from .utils import *
from .version import *

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONTRACT = 2
EXIT_CONFIG = 3
EXIT_RESOURCE = 4


def _error(err, suffix=''):
    print(rf'{Style.BRIGHT}{Fore.RED}error:{Style.RESET_ALL} {err}{suffix}', file=sys.stderr)


def _invoker(func, **kwargs):
    colorama.init()
    try:
        func(**kwargs)
    except WarningTreatedAsError as err:
        _error(err, r' (warning treated as error)')
        sys.exit(EXIT_ERROR)
    except ContractViolation as err:
        _error(err)
        sys.exit(EXIT_CONTRACT)
    except SchemaError as err:
        _error(str(err).strip())
        sys.exit(EXIT_CONFIG)
    except (ConfigError, DomainError) as err:
        _error(err)
        sys.exit(EXIT_CONFIG)
    except ResourceError as err:
        _error(err)
        sys.exit(EXIT_RESOURCE)
    except Error as err:
        _error(err)
        sys.exit(EXIT_ERROR)
    except Exception as err:
        print(f'\n{Fore.RED}*************{Style.RESET_ALL}\n', file=sys.stderr)
        print_exception(err, include_type=True, include_traceback=True, skip_frames=1)
        print(
            f'{Fore.RED}*************\n'
            '\nYou appear to have triggered an internal bug!'
            '\nPlease re-run ncdim with --verbose and file an issue at github.com/ncdim/ncdim/issues'
            '\nMany thanks!'
            f'\n\n*************{Style.RESET_ALL}',
            file=sys.stderr,
        )
        sys.exit(EXIT_ERROR)
    sys.exit(EXIT_OK)


def make_boolean_optional_arg(args: argparse.ArgumentParser, name: str, default, help='', **kwargs):
    name = name.strip().lstrip('-')
    if sys.version_info >= (3, 9):
        args.add_argument(rf'--{name}', default=default, help=help, action=argparse.BooleanOptionalAction, **kwargs)
    else:
        dest = name.replace(r'-', r'_')
        args.add_argument(rf'--{name}', action=r'store_true', help=help, dest=dest, default=default, **kwargs)
        args.add_argument(
            rf'--no-{name}',
            action=r'store_false',
            help=(help if help == argparse.SUPPRESS else None),
            dest=dest,
            default=default,
            **kwargs,
        )


def bundled_configs() -> typing.List[str]:
    return sorted(f.stem for f in paths.CONFIGS.iterdir() if f.suffix.lower() in (r'.toml', r'.json'))


def main(invoker=True):
    """
    The entry point when the library is invoked as `ncdim`.
    """
    if invoker:
        _invoker(main, invoker=False)
        return

    # yapf: disable
    args = argparse.ArgumentParser(
        prog=r'ncdim',
        description=
        rf'{Fore.CYAN}{Style.BRIGHT}ncdim{Style.RESET_ALL} v{VERSION_STRING} - github.com/ncdim/ncdim'
        '\n\n'
        r'Finite truncations of Toeplitz spectral triples: operator identities and spectral dimensions.',
        formatter_class=argparse.RawTextHelpFormatter
    )
    # yapf: enable
    args.add_argument(r'--version', action=r'store_true', help=r"print the version and exit", dest=r'print_version')  #
    args.add_argument(r'--where', action=r'store_true', help=argparse.SUPPRESS)  #
    commands = args.add_subparsers(dest=r'command', metavar=r'<command>')

    # --------------------------------------------------------------
    # ncdim run
    # --------------------------------------------------------------

    run_args = commands.add_parser(
        r'run',
        help=r'run an experiment and write its report',
        description=r'Runs the experiment described by a run config and writes report.json, CSV tables,'
        + '\nreport.md and SVG figures.\n\nExit codes: 0 all checks passed, 2 a check failed,'
        + '\n3 configuration or domain error, 4 resource budget exceeded, 1 anything else.',
        formatter_class=argparse.RawTextHelpFormatter,
    )
    run_args.add_argument(
        r'config',
        type=str,
        help=r'path to a .toml or .json run config, or the name of a bundled config (see "ncdim list")',
    )
    run_args.add_argument(
        r'--out',
        type=Path,
        default=Path.cwd(),
        metavar=r'DIR',
        help=r'directory to write the report to (default: .)',
    )
    run_args.add_argument(
        r'--seed',
        type=int,
        default=None,
        metavar=r'N',
        help=r'seed for restart vectors and word subsampling (default: read from config)',
    )
    run_args.add_argument(
        r'--threads',
        type=int,
        default=0,
        metavar=r'N',
        help=r"set the number of threads to use (default: automatic)",  #
    )
    run_args.add_argument(r'-v', r'--verbose', action=r'store_true', help=r"enable very noisy diagnostic output")  #
    make_boolean_optional_arg(
        run_args, r'werror', default=None, help=r'treat warnings as errors (default: read from config)'
    )  #

    # --------------------------------------------------------------
    # ncdim list
    # --------------------------------------------------------------

    commands.add_parser(r'list', help=r'list the bundled run configs')

    args = args.parse_args()

    if args.print_version:
        print(VERSION_STRING)
        return

    if args.where:
        print(paths.PACKAGE)
        return

    if args.command == r'list':
        for name in bundled_configs():
            print(name)
        return

    if args.command != r'run':
        raise Error(r'expected a command (run or list); see ncdim --help')

    print(rf'{Fore.CYAN}{Style.BRIGHT}ncdim{Style.RESET_ALL} v{VERSION_STRING}')

    with ScopeTimer(r'All tasks', print_start=False, print_end=True) as timer:
        run(
            config_path=args.config,
            output_dir=args.out,
            threads=args.threads,
            seed=args.seed,
            verbose=args.verbose,
            logger=True,  # stderr + stdout
            treat_warnings_as_errors=args.werror,
        )


if __name__ == '__main__':
    main()
