"""Live-database execution validator over any DB-API connection.

The embedded interpreter stays the hermetic default; this class backs the
optional live path when a database is configured. The fixture schema is the
same ``users`` table contract: the baseline query for the benign literal
must succeed before any payload runs.
"""

from __future__ import annotations

import os
import time

from ..errors import ConfigError, InfrastructureError
from .executor import BASELINE_LITERAL, VULNERABLE_TEMPLATE, ExecutionOutcome

DEFAULT_TIMEOUT_S = 8.0


class DbApiExecutor:
    detector_id = "mysql-exec"

    def __init__(
        self,
        connect,
        template: str = VULNERABLE_TEMPLATE,
        baseline_literal: str = BASELINE_LITERAL,
        timeout_s: float = DEFAULT_TIMEOUT_S,
    ):
        """``connect`` is a zero-argument callable returning a DB-API connection."""
        self._connect = connect
        self.template = template
        self.baseline_literal = baseline_literal
        self.timeout_s = timeout_s
        self._conn = None
        self._baseline: int | None = None

    def _connection(self):
        if self._conn is None:
            try:
                self._conn = self._connect()
            except Exception as exc:
                raise InfrastructureError(f"database unreachable: {exc}") from exc
        return self._conn

    @property
    def baseline_row_count(self) -> int:
        if self._baseline is None:
            outcome = self._execute(self.template.format(payload=self.baseline_literal), 0)
            if outcome.status != "executed":
                raise InfrastructureError(
                    f"baseline query failed: {outcome.error_class}"
                )
            self._baseline = outcome.row_count
        return self._baseline

    def run_payload(self, payload: str) -> ExecutionOutcome:
        baseline = self.baseline_row_count
        return self._execute(self.template.format(payload=payload), baseline)

    def _execute(self, sql: str, baseline: int) -> ExecutionOutcome:
        conn = self._connection()
        cursor = conn.cursor()
        started = time.monotonic()
        try:
            cursor.execute(sql)
            rows = cursor.fetchall() if cursor.description else []
        except Exception as exc:
            elapsed = int((time.monotonic() - started) * 1000)
            if elapsed >= self.timeout_s * 1000:
                return ExecutionOutcome("timeout", 0, baseline, elapsed, "")
            return ExecutionOutcome(
                "sql_error", 0, baseline, elapsed, type(exc).__name__.lower()
            )
        finally:
            cursor.close()
            try:
                conn.rollback()  # payloads must never commit anything
            except Exception:
                pass
        elapsed = int((time.monotonic() - started) * 1000)
        if elapsed >= self.timeout_s * 1000:
            return ExecutionOutcome("timeout", len(rows), baseline, elapsed, "")
        return ExecutionOutcome("executed", len(rows), baseline, elapsed, "")


def build_mysql_executor(db_config: dict) -> DbApiExecutor:
    """Executor for the DB config schema: host/port/database/user, password
    via the named environment variable."""
    for key in ("host", "database", "user", "password_env"):
        if key not in db_config:
            raise ConfigError(f"db config missing field {key!r}")
    password = os.environ.get(db_config["password_env"], "")

    def connect():
        try:
            import pymysql  # an optional driver; any DB-API module works
        except ImportError as exc:
            raise InfrastructureError(
                "no MySQL driver installed (pip install pymysql)"
            ) from exc
        return pymysql.connect(
            host=db_config["host"],
            port=int(db_config.get("port", 3306)),
            database=db_config["database"],
            user=db_config["user"],
            password=password,
        )

    timeout_s = float(db_config.get("timeout_s", DEFAULT_TIMEOUT_S))
    return DbApiExecutor(connect, timeout_s=timeout_s)
