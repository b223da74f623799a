"""Process-level runtime settings read from the environment (and a local .env)."""
import os
from dataclasses import dataclass
from typing import List, Optional, Tuple

from dotenv import load_dotenv

THREADS_ENV = "RIS_SIM_THREADS"
LOG_LEVEL_ENV = "RIS_SIM_LOG_LEVEL"
DEFAULT_LOG_LEVEL = "INFO"
LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


@dataclass(frozen=True)
class RuntimeSettings:
    threads: int
    log_level: str
    ignored: Tuple[str, ...] = ()


def _parse_threads(raw: Optional[str]) -> Optional[int]:
    if raw is None or not raw.strip():
        return None
    try:
        value = int(raw)
    except ValueError:
        return None
    return value if value >= 1 else None


def load_settings(threads_override: Optional[int] = None) -> RuntimeSettings:
    """
    Resolve runtime settings.

    Precedence for the worker count: explicit override (the --threads flag),
    then RIS_SIM_THREADS, then the machine's CPU count. Unusable environment
    values fall back to the defaults and are listed in `ignored`.
    """
    load_dotenv()
    ignored: List[str] = []

    raw_threads = os.getenv(THREADS_ENV)
    env_threads = _parse_threads(raw_threads)
    if raw_threads and raw_threads.strip() and env_threads is None:
        ignored.append(f"{THREADS_ENV}={raw_threads!r} is not a positive integer")
    threads = threads_override or env_threads or (os.cpu_count() or 1)

    log_level = os.getenv(LOG_LEVEL_ENV, DEFAULT_LOG_LEVEL).strip().upper()
    if log_level not in LOG_LEVELS:
        ignored.append(f"{LOG_LEVEL_ENV}={log_level!r} is not one of {', '.join(LOG_LEVELS)}")
        log_level = DEFAULT_LOG_LEVEL

    return RuntimeSettings(threads=max(1, int(threads)), log_level=log_level, ignored=tuple(ignored))
