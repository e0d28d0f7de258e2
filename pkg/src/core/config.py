from enum import Enum
import logging
import sys

import structlog
from pydantic_settings import BaseSettings, SettingsConfigDict


class ProblemType(str, Enum):
    HITTING_SET = "hs"
    SET_PACKING = "sp"
    EDGE_DOMINATING_SET = "eds"
    H_FREE_DELETION = "hfree"
    H_PACKING = "hpack"


class KernelMode(str, Enum):
    LOGSPACE = "logspace"
    LINEAR = "linear"


class Settings(BaseSettings):
    # App Config
    LOG_LEVEL: str = "INFO"

    # Space metering: None leaves meters unarmed
    BIT_BUDGET: int | None = None
    SPACE_CONSTANT: int = 32

    # Oracle guards for `verify`
    ORACLE_MAX_ELEMENTS: int = 20
    ORACLE_MAX_VERTICES: int = 12

    VERIFY_JOBS: int = 4

    model_config = SettingsConfigDict(
        env_file=".env.local", env_prefix="KERNELFORGE_", extra="ignore"
    )


# Singleton instance
settings = Settings()


# Logging
def configure_logging():
    # Logs go to stderr: stdout and kernel files must stay byte-identical
    processors = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.CallsiteParameterAdder(
            {
                structlog.processors.CallsiteParameter.FILENAME,
                structlog.processors.CallsiteParameter.FUNC_NAME,
                structlog.processors.CallsiteParameter.LINENO,
            }
        ),
        structlog.processors.JSONRenderer(),
    ]

    structlog.configure(
        processors=processors,
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelName(settings.LOG_LEVEL.upper())
        ),
        cache_logger_on_first_use=True,
    )


configure_logging()
