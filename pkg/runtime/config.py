"""
Runtime Configuration Module
Contains logging, self-check, search and audit settings, read from the
environment (optionally through a .env file).
"""

import os
from dataclasses import dataclass

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass  # dotenv not installed, will use environment variables directly


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ('1', 'true', 'yes', 'on')


@dataclass
class RuntimeConfig:
    """Library and CLI behaviour."""
    log_level: str = os.getenv('HEISENREP_LOG_LEVEL', 'WARNING').upper()

    # Constructors re-verify their output with the comodule verifier
    self_check: bool = _env_flag('HEISENREP_SELF_CHECK', 'false')

    # Conjecture search defaults
    search_budget: int = int(os.getenv('HEISENREP_SEARCH_BUDGET', '1000'))
    search_seed: int = int(os.getenv('HEISENREP_SEARCH_SEED', '42'))
    search_workers: int = int(os.getenv('HEISENREP_SEARCH_WORKERS', '1'))


@dataclass
class AuditConfig:
    """Operation audit logging configuration with configurable thresholds."""

    enable_operation_logging: bool = _env_flag('HEISENREP_AUDIT_ENABLE', 'true')

    # Argument / result payload truncation threshold (in characters)
    max_payload_size: int = int(os.getenv('HEISENREP_AUDIT_MAX_PAYLOAD', '2048'))

    # Operations slower than this are logged at WARNING
    slow_operation_ms: int = int(os.getenv('HEISENREP_AUDIT_SLOW_MS', '1000'))

    # Truncation marker
    truncation_marker: str = '... [TRUNCATED]'


# Global configuration instances
runtime_config = RuntimeConfig()
audit_config = AuditConfig()


def get_runtime_config() -> RuntimeConfig:
    """Get runtime configuration instance."""
    return runtime_config


def get_audit_config() -> AuditConfig:
    """Get audit configuration instance."""
    return audit_config
