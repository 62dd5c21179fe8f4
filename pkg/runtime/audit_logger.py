"""
Audit Logger Module
Provides a decorator for logging CLI commands and a context manager for
timing heavy library operations (verifiers, constructions, searches).

Records are emitted through the standard logging module as one JSON
payload per record, so they can be filtered by logger name and level.
"""

import json
import time
import uuid
import functools
import logging
from argparse import Namespace
from contextlib import contextmanager
from typing import Optional, Callable, Any, Dict

from .config import get_audit_config, AuditConfig

logger = logging.getLogger(__name__)


class AuditLogger:
    """
    Audit logger for tracking CLI commands and library operations.
    """

    def __init__(self, config: Optional[AuditConfig] = None):
        self.config = config or get_audit_config()

    def _truncate_data(self, data: Any, max_size: int) -> tuple[Any, bool]:
        """
        Truncate data if its JSON form exceeds max_size.

        Returns:
            Tuple of (truncated_data, was_truncated)
        """
        if data is None:
            return None, False

        try:
            json_str = json.dumps(data, default=str)
            if len(json_str) <= max_size:
                return data, False

            truncated_str = json_str[:max_size - len(self.config.truncation_marker)]
            return truncated_str + self.config.truncation_marker, True
        except (TypeError, ValueError):
            return str(data)[:max_size], True

    def _sanitize_arguments(self, arguments: Any) -> Dict[str, Any]:
        """Keep plain argument values; drop handlers and private attributes."""
        if isinstance(arguments, Namespace):
            arguments = vars(arguments)
        if not isinstance(arguments, dict):
            return {'value': str(arguments)}
        return {
            k: v for k, v in arguments.items()
            if not k.startswith('_') and not callable(v)
        }

    def log_command(
        self,
        request_id: str,
        command: str,
        arguments: Any,
        exit_code: Optional[int],
        execution_time_ms: int,
        status: str = 'SUCCESS',
        error_message: Optional[str] = None,
    ) -> Optional[Dict[str, Any]]:
        """
        Log one CLI command invocation.

        Returns:
            The emitted record, or None if logging is disabled
        """
        if not self.config.enable_operation_logging:
            return None

        args_data, is_truncated = self._truncate_data(
            self._sanitize_arguments(arguments),
            self.config.max_payload_size
        )
        record = {
            'request_id': request_id,
            'kind': 'COMMAND',
            'command': command,
            'arguments': args_data,
            'is_arguments_truncated': is_truncated,
            'exit_code': exit_code,
            'execution_time_ms': execution_time_ms,
            'status': status,
            'error_message': error_message,
        }
        level = logging.ERROR if status == 'ERROR' else logging.INFO
        logger.log(level, json.dumps(record, default=str))
        return record

    def log_operation(
        self,
        operation: str,
        payload: Optional[dict],
        result: Any,
        execution_time_ms: int,
        status: str = 'SUCCESS',
        error_message: Optional[str] = None,
    ) -> Optional[Dict[str, Any]]:
        """
        Log one library operation.

        Returns:
            The emitted record, or None if logging is disabled
        """
        if not self.config.enable_operation_logging:
            return None

        payload_data, _ = self._truncate_data(payload, self.config.max_payload_size)
        result_data, is_truncated = self._truncate_data(result, self.config.max_payload_size)
        record = {
            'kind': 'OPERATION',
            'operation': operation,
            'payload': payload_data,
            'result': result_data,
            'is_result_truncated': is_truncated,
            'execution_time_ms': execution_time_ms,
            'status': status,
            'error_message': error_message,
        }
        if status == 'ERROR':
            level = logging.ERROR
        elif execution_time_ms > self.config.slow_operation_ms:
            level = logging.WARNING
        else:
            level = logging.DEBUG
        logger.log(level, json.dumps(record, default=str))
        return record


# Global audit logger instance
_audit_logger: Optional[AuditLogger] = None


def get_audit_logger() -> AuditLogger:
    """Get or create the global audit logger instance."""
    global _audit_logger
    if _audit_logger is None:
        _audit_logger = AuditLogger()
    return _audit_logger


def audit_log(func: Callable) -> Callable:
    """
    Decorator to log a CLI command handler: arguments, exit code and timing.

    Usage:
        @audit_log
        def cmd_verify(args) -> int:
            ...
    """
    @functools.wraps(func)
    def wrapper(args, *rest, **kwargs):
        request_id = str(uuid.uuid4())

        start_time = time.time()
        status = 'SUCCESS'
        error_message = None
        exit_code = None

        try:
            exit_code = func(args, *rest, **kwargs)
            if exit_code:
                status = 'FAILED'
            return exit_code

        except Exception as e:
            status = 'ERROR'
            error_message = str(e)
            raise

        finally:
            execution_time_ms = int((time.time() - start_time) * 1000)

            get_audit_logger().log_command(
                request_id=request_id,
                command=func.__name__.removeprefix('cmd_'),
                arguments=args,
                exit_code=exit_code,
                execution_time_ms=execution_time_ms,
                status=status,
                error_message=error_message,
            )

    return wrapper


@contextmanager
def log_operation(operation: str, payload: Optional[dict] = None):
    """
    Context manager for timing and logging a library operation.

    Usage:
        with log_operation('verify_comodule_axioms', {'dim': d}) as ctx:
            report = ...
            ctx['result'] = {'ok': report.ok}
    """
    context = {
        'result': None,
        'error': None,
    }

    start_time = time.time()
    status = 'SUCCESS'

    try:
        yield context
    except Exception as e:
        status = 'ERROR'
        context['error'] = str(e)
        raise
    finally:
        execution_time_ms = int((time.time() - start_time) * 1000)

        get_audit_logger().log_operation(
            operation=operation,
            payload=payload,
            result=context.get('result'),
            execution_time_ms=execution_time_ms,
            status=status,
            error_message=context.get('error'),
        )
