#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Batches of curves read from a corpus file.
~~~~~~~~~~~~~~~~~~~~~
Each non-empty line holds 'a b N'. Lines starting with '#' are comments.
Entries run concurrently; a failing entry yields an error record and
leaves the others alone. Results keep the order of the file.
"""
# standard library:
from concurrent.futures import ThreadPoolExecutor
import logging
import pathlib
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from dmod_deform import err
from dmod_deform.run_config import RunConfig

Runner = Callable[[RunConfig], Dict[str, Any]]
Entry = Tuple[int, str]


def read_corpus(corpus_file: Union[str, pathlib.Path]) -> List[Entry]:
    "Line number and content of every entry line."
    path = pathlib.Path(corpus_file)
    try:
        content = path.read_text(encoding='utf-8')
    except FileNotFoundError:
        logging.exception('Cannot find the corpus file %s', path)
        raise
    entries: List[Entry] = list()
    for number, line in enumerate(content.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        entries.append((number, line))
    logging.debug('%s entries in corpus %s', len(entries), path)
    return entries


def parse_entry(line: str,
                base_settings: Optional[dict] = None) -> RunConfig:
    "Turn 'a b N' into a configuration on top of the base settings."
    fields = line.split()
    if len(fields) != 3:
        raise err.MonomialSyntaxError(
            f"Corpus lines need the form 'a b N': {line!r}")
    try:
        order = int(fields[2])
    except ValueError as not_int:
        raise err.MonomialSyntaxError(
            f"The order must be an integer: {line!r}") from not_int
    settings = dict(base_settings or dict())
    settings.update({'a': fields[0], 'b': fields[1], 'order': order})
    return RunConfig.from_dict(settings)


def _error_record(number: int,
                  line: str,
                  error: Exception) -> Dict[str, Any]:
    code = getattr(error, 'code', 'usage_error')
    return {'line': number,
            'entry': line,
            'error': {'code': code, 'message': str(error)}}


def _run_entry(entry: Entry,
               runner: Runner,
               base_settings: Optional[dict]) -> Dict[str, Any]:
    number, line = entry
    try:
        config = parse_entry(line, base_settings)
        report = runner(config)
    except (err.DModDeformException, ValueError) as entry_error:
        logging.warning('Corpus entry %s (%s) failed: %s',
                        number, line, entry_error)
        return _error_record(number, line, entry_error)
    report['line'] = number
    report['entry'] = line
    return report


def run_corpus(corpus_file: Union[str, pathlib.Path],
               runner: Runner,
               base_settings: Optional[dict] = None,
               workers: int = 1) -> List[Dict[str, Any]]:
    "One report or error record per corpus entry, in file order."
    entries = read_corpus(corpus_file)
    if not entries:
        return list()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        reports = list(executor.map(
            lambda entry: _run_entry(entry, runner, base_settings),
            entries))
    failed = sum(1 for report in reports if 'error' in report)
    logging.info('Corpus %s: %s entries, %s failed',
                 corpus_file, len(reports), failed)
    return reports
