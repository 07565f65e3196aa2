#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
dmod_deform
~~~~~~~~~~~~~~~~~~~~~
Deformations of the structure sheaf of an elliptic curve as a module
over the sheaf of differential operators: Ext groups, cover cohomology,
cup products, the hull and its versal family, in exact arithmetic.
"""

# python standard library:
import logging
import pathlib
from typing import Any, Dict, List, Optional, Union

# Sister projects:
import compatibility

# import other modules of this package
from dmod_deform import _version as version
from dmod_deform import corpus_manager
from dmod_deform import pipeline
from dmod_deform import report_manager
from dmod_deform import run_config
from dmod_deform import time_manager


class DModDeform:
    """ Main class of dmod_deform. """

    def __init__(self,
                 settings: Union[dict, run_config.RunConfig],
                 target_directory: Optional[str] = None,
                 timings: bool = False) -> None:
        "Check the environment, validate settings and create the managers."

        compatibility.Check(
            package_name='dmod_deform',
            package_version=version.__version__,
            release_date=version.release_date,
            python_version_support={
                'min_version': '3.8',
                'incompatible_versions': [],
                'max_tested_version': '3.12'},
            nag_over_update={
                    'nag_days_after_release': 120,
                    'nag_in_hundred': 100},
            language_messages='en',
            system_support={
                'full': {'Linux', 'MacOS', 'Windows'}
            }
        )

        if isinstance(settings, run_config.RunConfig):
            self.config = settings
        else:
            self.config = run_config.RunConfig.from_dict(settings)
        self.timings = timings

        self.time = time_manager.TimeManager()
        self.reports = report_manager.ReportManager(target_directory)
        self._pipeline: Optional[pipeline.Pipeline] = None

    @property
    def pipeline(self) -> pipeline.Pipeline:
        "Created on first use, as the curve is checked on creation."
        if self._pipeline is None:
            self._pipeline = pipeline.Pipeline(self.config, self.time)
        return self._pipeline

    # #########################################################################
    # SUB-REPORTS
    # #########################################################################

    def ext_report(self) -> Dict[str, Any]:
        return self.pipeline.report('ext', self.timings)

    def cohomology_report(self) -> Dict[str, Any]:
        return self.pipeline.report('cohomology', self.timings)

    def cup_report(self) -> Dict[str, Any]:
        return self.pipeline.report('cup', self.timings)

    def hull_report(self) -> Dict[str, Any]:
        return self.pipeline.report('hull', self.timings)

    def family_report(self) -> Dict[str, Any]:
        return self.pipeline.report('verify-family', self.timings)

    def check_report(self) -> Dict[str, Any]:
        return self.pipeline.report('check-deformation', self.timings)

    def run_pipeline(self) -> Dict[str, Any]:
        "The report of the configured subcommand."
        return self.pipeline.report(self.config.subcommand, self.timings)

    # #########################################################################
    # CORPUS AND FILES
    # #########################################################################

    def _corpus_settings(self) -> dict:
        return {'stab_start': self.config.stab_start,
                'stab_step': self.config.stab_step,
                'stab_cap': self.config.stab_cap,
                'margin': self.config.margin,
                'check_bound': self.config.check_bound,
                'output_format': self.config.output_format,
                'subcommand': self.config.subcommand}

    def run_corpus(self,
                   corpus_file: Union[str, pathlib.Path]
                   ) -> Dict[str, Any]:
        """Reports for all curves of a corpus file together with the hash
           of the file."""
        path = pathlib.Path(corpus_file)
        reports: List[Dict[str, Any]] = corpus_manager.run_corpus(
            path,
            pipeline.run_pipeline,
            self._corpus_settings(),
            self.config.workers)
        return {'corpus': {'file': path.name,
                           'sha256': self.reports.get_file_hash(path),
                           'entries': len(reports)},
                'reports': reports}

    def serialize(self, report: Dict[str, Any]) -> str:
        return report_manager.serialize(report, self.config.output_format)

    def save(self,
             report: Dict[str, Any],
             file_name: Optional[str] = None) -> pathlib.Path:
        "Write a report into the target directory."
        if not file_name:
            file_name = self.reports.report_file_name(
                report, self.config.output_format)
        path = self.reports.write_report(report, file_name,
                                         self.config.output_format)
        logging.info('Report saved as %s', path)
        return path
