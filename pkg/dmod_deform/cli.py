#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Command line interface
~~~~~~~~~~~~~~~~~~~~~
dmod-deform <subcommand> --a <rat> --b <rat> --order <N> [--format json|text]
            [--degree-cap <d>] [--stab-window <w>] [--corpus <path>]

Exit codes: 0 success, 1 usage, 2 singular curve, 3 stabilization
failure, 4 certification failure.
"""
# standard library:
import argparse
import logging
import sys
from typing import List, Optional

from dmod_deform import _version
from dmod_deform import err
from dmod_deform import run_config
from dmod_deform.__main__ import DModDeform

EXIT_OK = 0
EXIT_USAGE = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='dmod-deform',
        description='Ext groups, cover cohomology, cup products and the ' +
                    'hull of deformations of the structure sheaf of an ' +
                    'elliptic curve y^2 = x^3 + ax + b as a D-module.')
    parser.add_argument('--version', action='version',
                        version=f"%(prog)s {_version.__version__}")
    parser.add_argument('subcommand',
                        choices=run_config.SUBCOMMANDS + ('corpus', ))
    parser.add_argument('--a', help='coefficient a (integer or p/q)')
    parser.add_argument('--b', help='coefficient b (integer or p/q)')
    parser.add_argument('--order', type=int, default=6,
                        help='truncation order N of the hull (default 6)')
    parser.add_argument('--format', dest='output_format', default='json',
                        choices=run_config.OUTPUT_FORMATS)
    parser.add_argument('--degree-cap', type=int, default=40,
                        help='hard cap of the Ext truncation degree')
    parser.add_argument('--stab-window', type=int, default=2,
                        help='degree increment between stabilization steps')
    parser.add_argument('--check-bound', type=int, default=10,
                        help='monomial degree bound of the deformation check')
    parser.add_argument('--corpus', help="file with one 'a b N' per line")
    parser.add_argument('--workers', type=int, default=1,
                        help='parallel corpus entries')
    parser.add_argument('--output-dir',
                        help='also write the report into this directory')
    parser.add_argument('--timings', action='store_true',
                        help='add stage timings to the report')
    parser.add_argument('--log-level', default='WARNING',
                        choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'))
    return parser


def _settings(arguments: argparse.Namespace) -> dict:
    settings = {'order': arguments.order,
                'output_format': arguments.output_format,
                'stab_cap': arguments.degree_cap,
                'stab_step': arguments.stab_window,
                'check_bound': arguments.check_bound,
                'workers': arguments.workers,
                'subcommand': ('all' if arguments.subcommand == 'corpus'
                               else arguments.subcommand)}
    if arguments.a is not None:
        settings['a'] = arguments.a
    if arguments.b is not None:
        settings['b'] = arguments.b
    return settings


def main(argv: Optional[List[str]] = None) -> int:
    "Entry point of the console script. Returns the exit code."
    parser = build_parser()
    try:
        arguments = parser.parse_args(argv)
    except SystemExit as parser_exit:
        return EXIT_OK if parser_exit.code in (0, None) else EXIT_USAGE

    logging.basicConfig(level=getattr(logging, arguments.log_level))

    try:
        if arguments.subcommand == 'corpus':
            if not arguments.corpus:
                raise ValueError('The corpus subcommand needs --corpus.')
        elif arguments.a is None or arguments.b is None:
            raise ValueError('Both --a and --b are needed.')
        tool = DModDeform(_settings(arguments),
                          target_directory=arguments.output_dir,
                          timings=arguments.timings)
        if arguments.subcommand == 'corpus':
            report = tool.run_corpus(arguments.corpus)
        else:
            # fail on a singular curve before any computation
            _ = tool.config.params
            report = tool.run_pipeline()
        sys.stdout.write(tool.serialize(report))
        if arguments.output_dir:
            if arguments.subcommand == 'corpus':
                tool.save(report, 'corpus_report.' +
                          ('json' if arguments.output_format == 'json'
                           else 'txt'))
            else:
                tool.save(report)
    except err.DModDeformException as domain_error:
        sys.stderr.write(f"error [{domain_error.code}]: {domain_error}\n")
        return domain_error.exit_code
    except (ValueError, OSError) as usage_error:
        sys.stderr.write(f"error [usage]: {usage_error}\n")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
