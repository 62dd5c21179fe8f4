"""
Runtime Package
Configuration and operation audit logging shared by the library modules
and the command-line interface.
"""

from .config import get_runtime_config, get_audit_config, RuntimeConfig, AuditConfig
from .audit_logger import (
    audit_log,
    log_operation,
    AuditLogger,
    get_audit_logger,
)

__all__ = [
    # Config
    'get_runtime_config',
    'get_audit_config',
    'RuntimeConfig',
    'AuditConfig',
    # Audit
    'audit_log',
    'log_operation',
    'AuditLogger',
    'get_audit_logger',
]
