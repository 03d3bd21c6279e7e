"""
Timing helpers for long-running computations.
Logs wall-clock and CPU time for scans, censuses and subcommand runs so slow
stages can be spotted in the logs.
"""

import logging
import time
from contextlib import contextmanager

logger = logging.getLogger(__name__)


@contextmanager
def timed(label: str, **extra):
    """
    Log detailed timing information for the wrapped block.

    Args:
        label: Human readable name of the stage
        **extra: Structured fields added to the log record

    Yields:
        A dict the caller may fill with result fields (counts, sizes) that are
        logged together with the timing
    """
    start_time = time.time()
    start_cpu = time.process_time()
    fields: dict = {}

    try:
        yield fields
    finally:
        duration = time.time() - start_time
        cpu_time = time.process_time() - start_cpu

        # Use structured logging - extra dict is attached to the record
        logger.info(
            f"Timing: {label} - {round(duration, 3)}s",
            extra={
                "stage": label,
                "duration_seconds": round(duration, 3),
                "cpu_time_seconds": round(cpu_time, 3),
                **extra,
                **fields,
            },
        )
