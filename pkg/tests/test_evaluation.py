from __future__ import annotations

import pytest

from sqlibench.errors import ConfigError, EmptyInputError, SqlParseError
from sqlibench.evaluation import (
    BLOCKED,
    BYPASSED,
    ERROR,
    EmbeddedExecutor,
    ExecutionOutcome,
    MlStubWaf,
    RuleWaf,
    classify_functional,
    load_ruleset,
    parse_sql,
    run_evaluation_matrix,
    token_tree,
)
from sqlibench.evaluation.executor import VULNERABLE_TEMPLATE
from sqlibench.generators import COLUMN_VOCAB, TABLE_VOCAB, load_catalog
from sqlibench.resources import (
    builtin_catalog_path,
    builtin_ml_weights_path,
    builtin_ruleset_path,
)


class TestParser:
    def test_select_column_table_node_count(self):
        tree = parse_sql("SELECT a FROM t")
        assert tree.label == "select"
        assert tree.node_count() == 4
        assert tree.find("ident:a") is not None
        assert tree.find("table:t") is not None

    def test_or_with_equality_children(self):
        tree = parse_sql(VULNERABLE_TEMPLATE.format(payload="' OR '1'='1"))
        or_node = tree.find("or")
        assert or_node is not None
        assert [c.label.split(":")[0] for c in or_node.children] == ["cmp", "cmp"]

    def test_malformed_raises_with_position(self):
        with pytest.raises(SqlParseError) as exc:
            parse_sql(VULNERABLE_TEMPLATE.format(payload="' banana (("))
        assert exc.value.position > 0

    def test_comment_styles(self):
        for payload in ("' OR 1=1-- -", "' OR 1=1#", "'/**/OR/**/1=1-- -"):
            parse_sql(VULNERABLE_TEMPLATE.format(payload=payload))

    def test_double_dash_requires_whitespace(self):
        # without following whitespace, "--" is double negation, not a comment
        arithmetic = parse_sql("SELECT 1--2")
        assert arithmetic.find("add:-") is not None
        commented = parse_sql("SELECT 1 -- 2")
        assert commented.find("add:-") is None

    def test_token_tree_fallback(self):
        tree = token_tree("' OR 1=1-- ")
        assert tree.label == "tokens"
        assert all(c.label.startswith("tok:") for c in tree.children)
        assert tree.node_count() == len(tree.children) + 1

    def test_catalog_co_validation(self):
        """Every shipped catalog template parses inside the validator template."""
        templates = load_catalog(builtin_catalog_path())
        assert len(templates) >= 200
        for template in templates:
            for table in TABLE_VOCAB:
                for column in COLUMN_VOCAB:
                    payload = template.replace("{TBL}", table).replace("{COL}", column)
                    parse_sql(VULNERABLE_TEMPLATE.format(payload=payload))


class TestExecutor:
    @pytest.fixture()
    def executor(self):
        return EmbeddedExecutor()

    def test_baseline_is_one_row(self, executor):
        assert executor.baseline_row_count == 1

    def test_quote_or_tautology_returns_all_rows(self, executor):
        outcome = executor.run_payload("' OR '1'='1")
        assert outcome.status == "executed"
        assert outcome.row_count == 10

    def test_truncated_statement_is_sql_error(self, executor):
        outcome = executor.run_payload("'; SELEC")
        assert outcome.status == "sql_error"
        assert outcome.error_class == "syntax"

    def test_benign_existing_name_matches_baseline(self, executor):
        outcome = executor.run_payload("alice")
        assert outcome.status == "executed"
        assert outcome.row_count == 1 == outcome.baseline_row_count

    def test_sleep_accumulates_simulated_delay(self, executor):
        outcome = executor.run_payload("' OR SLEEP(100)-- -")
        assert outcome.status == "timeout"
        assert outcome.elapsed_ms == 8000
        # short sleep on a single row stays under the statement timeout
        single = executor._run_sql("SELECT SLEEP(3)", baseline=1)
        assert single.status == "executed"
        assert single.elapsed_ms == 3000

    def test_union_extraction(self, executor):
        outcome = executor.run_payload("' UNION SELECT 1,VERSION()-- -")
        assert outcome.status == "executed"
        assert outcome.row_count == 1

    def test_stacked_statements_rejected(self, executor):
        outcome = executor.run_payload("'; DROP TABLE users-- -")
        assert outcome.status == "sql_error"
        assert outcome.error_class == "stacked_query"

    def test_hex_literal_matches_string(self, executor):
        outcome = executor.run_payload("' OR name=0x616c696365-- -")
        assert outcome.status == "executed"
        assert outcome.row_count == 1  # exactly the alice row

    def test_foreign_dialect_classed(self, executor):
        outcome = executor.run_payload("' WAITFOR DELAY '0:0:5'-- -")
        assert outcome.status == "sql_error"
        assert outcome.error_class == "dialect_syntax"

    def test_unknown_function(self, executor):
        outcome = executor.run_payload("' OR PG_SLEEP(2)-- -")
        assert outcome.status == "sql_error"
        assert outcome.error_class == "unknown_function"

    def test_error_channel_functions(self, executor):
        outcome = executor.run_payload("' OR EXTRACTVALUE(1,CONCAT(0x7e,VERSION()))-- -")
        assert (outcome.status, outcome.error_class) == ("sql_error", "xpath_error")
        outcome = executor.run_payload("' OR EXP(710)-- -")
        assert outcome.error_class == "numeric_overflow"

    def test_deterministic(self, executor):
        payloads = ["' OR 1=1-- -", "' OR SLEEP(2)#", "zzz"]
        first = [executor.run_payload(p) for p in payloads]
        second = [EmbeddedExecutor().run_payload(p) for p in payloads]
        assert first == second


class TestClassifier:
    def test_rule_order(self):
        mk = lambda **kw: classify_functional(ExecutionOutcome(**kw))
        assert mk(status="executed", row_count=1, baseline_row_count=1,
                  elapsed_ms=5000).category == "time_delay"
        assert mk(status="timeout", row_count=0, baseline_row_count=1,
                  elapsed_ms=8000).category == "time_delay"
        assert mk(status="sql_error", row_count=0, baseline_row_count=1,
                  elapsed_ms=0, error_class="unknown_function").category == "incompatible"
        assert mk(status="sql_error", row_count=0, baseline_row_count=1,
                  elapsed_ms=0, error_class="syntax").category == "sql_error"
        assert mk(status="executed", row_count=10, baseline_row_count=1,
                  elapsed_ms=0).category == "data_extraction"
        assert mk(status="executed", row_count=1, baseline_row_count=1,
                  elapsed_ms=0).category == "no_effect"

    def test_total_over_random_outcomes(self, rng):
        statuses = ("executed", "sql_error", "timeout")
        classes = ("", "syntax", "unknown_function", "dialect_syntax", "xpath_error")
        for _ in range(500):
            outcome = ExecutionOutcome(
                status=rng.choice(statuses),
                row_count=rng.randint(0, 20),
                baseline_row_count=1,
                elapsed_ms=rng.choice([0, 100, 1999, 2000, 8000]),
                error_class=rng.choice(classes),
            )
            sig = classify_functional(outcome)
            assert sig.category in (
                "data_extraction", "time_delay", "sql_error", "no_effect", "incompatible"
            )
            assert sig.row_bucket in ("0", "1", "2-10", ">10")
            assert sig.delay_bucket in ("<2s", ">=2s")


@pytest.fixture(scope="module")
def ruleset():
    return load_ruleset(builtin_ruleset_path())


class TestRuleWaf:
    def test_benign_bypasses_all_levels(self, ruleset):
        for pl in (1, 2, 3):
            verdict = RuleWaf(ruleset, pl).evaluate("hello world")
            assert verdict.outcome == BYPASSED

    def test_tautology_blocked_at_pl1(self, ruleset):
        verdict = RuleWaf(ruleset, 1).evaluate("' OR 1=1--")
        assert verdict.outcome == BLOCKED
        assert verdict.detail == "1001"  # first matching rule in file order

    def test_url_decoded_once(self, ruleset):
        verdict = RuleWaf(ruleset, 1).evaluate("%27%20OR%201%3D1--")
        assert verdict.outcome == BLOCKED

    def test_case_insensitive(self, ruleset):
        verdict = RuleWaf(ruleset, 1).evaluate("' Or 1=1--")
        assert verdict.outcome == BLOCKED

    def test_paranoia_monotone_per_payload(self, ruleset, rng):
        templates = load_catalog(builtin_catalog_path())
        detectors = {pl: RuleWaf(ruleset, pl) for pl in (1, 2, 3)}
        for template in templates:
            payload = template.replace("{TBL}", "users").replace("{COL}", "name")
            blocked = {pl: detectors[pl].evaluate(payload).outcome == BLOCKED for pl in (1, 2, 3)}
            if blocked[1]:
                assert blocked[2] and blocked[3]
            if blocked[2]:
                assert blocked[3]

    def test_bad_level_rejected(self, ruleset):
        with pytest.raises(ConfigError):
            RuleWaf(ruleset, 4)


class TestMlStub:
    def test_zero_weights_bypass_everything(self):
        waf = MlStubWaf({}, threshold=0.5)
        assert waf.score("' OR 1=1--") == 0.0
        assert waf.evaluate("' OR 1=1--").outcome == BYPASSED

    def test_shipped_weights_block_classic_payload(self):
        waf = MlStubWaf.from_file(builtin_ml_weights_path())
        assert waf.evaluate("' OR 1=1--").outcome == BLOCKED
        assert waf.evaluate("hello world").outcome == BYPASSED

    def test_threshold_zero_blocks_everything(self):
        waf = MlStubWaf({}, threshold=0.0)
        assert waf.evaluate("anything").outcome == BLOCKED  # score 0 >= 0

    def test_high_weight_grams_exceed_threshold(self):
        waf = MlStubWaf({"abc": 2.0}, threshold=0.5)
        assert waf.evaluate("abcabc").outcome == BLOCKED
        assert waf.evaluate("xyz").outcome == BYPASSED

    def test_score_in_unit_interval(self, rng):
        waf = MlStubWaf.from_file(builtin_ml_weights_path())
        templates = load_catalog(builtin_catalog_path())
        for template in templates:
            score = waf.score(template)
            assert 0.0 <= score <= 1.0

    def test_malformed_weight_file(self, tmp_path):
        bad = tmp_path / "weights.json"
        bad.write_text("{not json")
        with pytest.raises(ConfigError):
            MlStubWaf.from_file(str(bad))


class TestMatrix:
    def test_cross_product_cardinality(self, ruleset):
        detectors = [RuleWaf(ruleset, pl) for pl in (1, 2, 3)]
        result = run_evaluation_matrix(["' OR 1=1-- -", "hello"], detectors)
        assert len(result.records) == 6
        assert result.outcomes is None

    def test_executor_adds_one_record_per_payload(self, ruleset):
        detectors = [RuleWaf(ruleset, 1)]
        result = run_evaluation_matrix(
            ["' OR 1=1-- -", "alice", "'; SELEC"], detectors, EmbeddedExecutor()
        )
        assert len(result.records) == 6
        assert len(result.outcomes) == 3
        assert len(result.signatures) == 3
        exec_records = [r for r in result.records if r.detector_id == "mysql-exec"]
        assert [r.outcome for r in exec_records] == [BYPASSED, BYPASSED, BLOCKED]

    def test_detector_fault_isolated(self, ruleset):
        class Exploding:
            detector_id = "boom"

            def evaluate(self, payload):
                if "trigger" in payload:
                    raise RuntimeError("kaput")
                from sqlibench.evaluation.verdict import DetectorVerdict

                return DetectorVerdict("boom", BYPASSED, "")

        detectors = [Exploding(), RuleWaf(ruleset, 1)]
        result = run_evaluation_matrix(["trigger this", "benign"], detectors)
        outcomes = {(r.payload_id, r.detector_id): r.outcome for r in result.records}
        assert outcomes[("0", "boom")] == ERROR
        assert outcomes[("1", "boom")] == BYPASSED
        assert outcomes[("0", "rule-pl1")] in (BLOCKED, BYPASSED)

    def test_store_csv_written(self, ruleset, tmp_path):
        path = tmp_path / "eval.csv"
        detectors = [RuleWaf(ruleset, 1)]
        run_evaluation_matrix(["' OR 1=1-- -"], detectors, store_path=str(path))
        lines = path.read_text().splitlines()
        assert lines[0] == "payload_id,detector_id,outcome,detail,elapsed_ms"
        assert len(lines) == 2

    def test_no_detectors_rejected(self):
        with pytest.raises(EmptyInputError):
            run_evaluation_matrix(["x"], [], None)

    def test_protocol_scale_cardinality(self, ruleset):
        # 1000 payloads x (10 detectors + execution) = 11000 records per run
        detectors = [
            RuleWaf(ruleset, 1, detector_id=f"waf-{i}") for i in range(10)
        ]
        payloads = ["' OR 1=1-- -"] * 1000
        result = run_evaluation_matrix(payloads, detectors, EmbeddedExecutor())
        assert len(result.records) == 11_000

    def test_payload_major_order(self, ruleset):
        detectors = [RuleWaf(ruleset, 1), RuleWaf(ruleset, 2)]
        result = run_evaluation_matrix(["a", "b"], detectors)
        assert [(r.payload_id, r.detector_id) for r in result.records] == [
            ("0", "rule-pl1"), ("0", "rule-pl2"), ("1", "rule-pl1"), ("1", "rule-pl2"),
        ]
