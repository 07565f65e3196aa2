#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Serialization and storage of reports
~~~~~~~~~~~~~~~~~~~~~
Reports are nested dictionaries. Rational numbers are emitted as 'p/q'
strings and keys are sorted, so identical inputs give byte-identical
output.
"""
# standard library:
from fractions import Fraction
import json
import logging
import os
import pathlib
import tempfile
from typing import Any, List, Optional

# external dependencies:
import userprovided

from dmod_deform import chart_algebra


def canonical(value: Any) -> Any:
    "Replace rationals by 'p/q' strings and tuples by lists, recursively."
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return chart_algebra.format_rational(value)
    if isinstance(value, dict):
        return {str(k): canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonical(v) for v in value]
    return value


def to_json(report: Any) -> str:
    "Deterministic JSON text."
    return json.dumps(canonical(report), sort_keys=True, indent=2,
                      ensure_ascii=False) + '\n'


def _text_lines(value: Any, indent: int) -> List[str]:
    pad = '  ' * indent
    lines: List[str] = list()
    if isinstance(value, dict):
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar_text(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}-")
                lines.extend(_text_lines(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar_text(item)}")
    else:
        lines.append(f"{pad}{_scalar_text(value)}")
    return lines


def _scalar_text(value: Any) -> str:
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if value is None:
        return '-'
    if value == [] or value == {}:
        return '(none)'
    return str(value)


def to_text(report: Any) -> str:
    "Indented plain text rendering of a report."
    return '\n'.join(_text_lines(canonical(report), 0)) + '\n'


def serialize(report: Any, output_format: str = 'json') -> str:
    if output_format == 'json':
        return to_json(report)
    if output_format == 'text':
        return to_text(report)
    raise ValueError(f"Unknown output format {output_format!r}.")


class ReportManager:
    "Writes reports into a target directory."

    HASH_METHOD = 'sha256'

    def __init__(self,
                 target_directory: Optional[str] = None) -> None:
        self.target_dir = self.__check_target_directory(target_directory)
        logging.info("Saving reports in this directory: %s", self.target_dir)

    @staticmethod
    def __check_target_directory(target_directory: Optional[str]
                                 ) -> pathlib.Path:
        "Resolve the report directory. Blank means the working directory."
        if target_directory is None or not target_directory.strip():
            logging.debug("No output directory given, reports go to %s",
                          pathlib.Path.cwd())
            return pathlib.Path.cwd()

        candidate = pathlib.Path(target_directory).expanduser()
        if not candidate.exists():
            msg = f"Output directory {candidate} does not exist."
            logging.error(msg)
            raise FileNotFoundError(msg)
        if not candidate.is_dir():
            msg = f"Output path {candidate} is a file, not a directory."
            logging.error(msg)
            raise NotADirectoryError(msg)
        return candidate.resolve()

    @staticmethod
    def report_file_name(report: dict, output_format: str = 'json') -> str:
        "File name derived from the curve and the order of a report."
        params = canonical(report.get('params', dict()))
        order = report.get('order', 'x')
        pieces = [str(params.get('a', 'a')), str(params.get('b', 'b'))]
        stem = '_'.join(p.replace('/', 'over').replace('-', 'm')
                        for p in pieces)
        extension = 'json' if output_format == 'json' else 'txt'
        return f"report_{stem}_N{order}.{extension}"

    def write_report(self,
                     report: Any,
                     file_name: str,
                     output_format: str = 'json') -> pathlib.Path:
        """Write a serialized report. The text goes into a temporary file
           in the same directory first and is then moved into place."""
        target_path = self.target_dir.joinpath(file_name)
        content = serialize(report, output_format)
        handle, temporary = tempfile.mkstemp(dir=self.target_dir,
                                             suffix='.tmp')
        try:
            with os.fdopen(handle, 'w', encoding='utf-8') as file_handle:
                file_handle.write(content)
            os.replace(temporary, target_path)
        except Exception:
            logging.error('Cannot write report %s', target_path,
                          exc_info=True)
            if os.path.exists(temporary):
                os.remove(temporary)
            raise
        logging.debug('report written to %s', target_path)
        return target_path

    def get_file_hash(self,
                      file_path: pathlib.Path) -> str:
        "Calculate the hash of a file (method fixed to SHA256)."
        hash_value = userprovided.hashing.calculate_file_hash(
            file_path, self.HASH_METHOD)
        return hash_value
