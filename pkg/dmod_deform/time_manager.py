#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The class TimeManager measures the run time of the pipeline stages.
~~~~~~~~~~~~~~~~~~~~~
"""

import logging
import time
from typing import Dict


class TimeManager:
    """ Time management for a pipeline run:
        * measure run time
        * record the duration of each stage """

    def __init__(self) -> None:
        "Start timers"
        self.run_start = time.monotonic()
        self.process_time_start = time.process_time()
        self.stages: Dict[str, float] = dict()
        self._stage_start: Dict[str, float] = dict()
        logging.debug('started timers')

    def start_stage(self, stage: str) -> None:
        "Start measuring a named stage."
        if not stage:
            raise ValueError('A stage needs a name.')
        self._stage_start[stage] = time.monotonic()

    def stop_stage(self, stage: str) -> float:
        "Stop measuring a stage and return its duration in seconds."
        try:
            started = self._stage_start.pop(stage)
        except KeyError as unknown:
            raise ValueError(f"Stage {stage} was never started.") from unknown
        duration = time.monotonic() - started
        self.stages[stage] = duration
        logging.info('stage %s finished in %.3f seconds', stage, duration)
        return duration

    def absolute_run_time(self) -> float:
        "Return seconds since init. "
        return time.monotonic() - self.run_start

    def get_process_time(self) -> float:
        "Return execution time since init"
        return time.process_time() - self.process_time_start

    def as_dict(self) -> Dict[str, float]:
        "Stage durations plus totals, rounded to milliseconds."
        timings = {stage: round(value, 3)
                   for stage, value in self.stages.items()}
        timings['total_wall'] = round(self.absolute_run_time(), 3)
        timings['total_process'] = round(self.get_process_time(), 3)
        return timings
