"""Detector harness: rule engine, ML stub, remote probe, SQL executor, matrix."""

from .classify import FunctionalSignature, classify_functional
from .dbexec import DbApiExecutor, build_mysql_executor
from .executor import (
    BASELINE_LITERAL,
    VULNERABLE_TEMPLATE,
    EmbeddedExecutor,
    ExecutionOutcome,
)
from .matrix import MatrixResult, run_evaluation_matrix
from .mlstub import MlStubWaf
from .remote import RemoteWaf, RemoteWafConfig
from .rules import RuleWaf, WafRule, load_ruleset
from .sqlparser import Node, SqlParseError, parse_sql, token_tree
from .verdict import BLOCKED, BYPASSED, ERROR, DetectorVerdict, EvaluationRecord

__all__ = [
    "BASELINE_LITERAL",
    "BLOCKED",
    "BYPASSED",
    "DbApiExecutor",
    "DetectorVerdict",
    "ERROR",
    "EmbeddedExecutor",
    "EvaluationRecord",
    "ExecutionOutcome",
    "FunctionalSignature",
    "MatrixResult",
    "MlStubWaf",
    "Node",
    "RemoteWaf",
    "RemoteWafConfig",
    "RuleWaf",
    "SqlParseError",
    "VULNERABLE_TEMPLATE",
    "WafRule",
    "build_mysql_executor",
    "classify_functional",
    "load_ruleset",
    "parse_sql",
    "run_evaluation_matrix",
    "token_tree",
]
