from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqlibench.errors import TemplateError
from sqlibench.llm import (
    CATALOG,
    ChatRequest,
    extract_payloads,
    format_payload_list,
    render_prompt,
    score_payload,
)
from sqlibench.llm.prompts import TEMPLATES


class TestRenderPrompt:
    def test_all_templates_render(self):
        bindings = {
            "query": "q", "context": "c", "recent": "r", "count": "3",
            "seeds": "- s", "waf_profile": "w", "analysis": "a",
            "strategy": "s", "design": "d", "payload": "p",
        }
        for template_id in TEMPLATES:
            text = render_prompt(template_id, bindings)
            assert "{" not in text.replace("{}", "")

    def test_missing_bindings_listed(self):
        with pytest.raises(TemplateError) as exc:
            render_prompt("radagas", {"query": "x"})
        assert set(exc.value.unbound) == {"context", "recent", "count"}

    def test_no_recursive_expansion(self):
        # a binding containing placeholder syntax is substituted literally
        text = render_prompt(
            "discriminator_score",
            {"payload": "attack {waf_profile} here", "waf_profile": "W"},
        )
        assert "attack {waf_profile} here" in text

    def test_radagas_context_substitution(self):
        chunks = ["chunk one", "chunk two", "chunk three"]
        from sqlibench.llm import format_context_block

        text = render_prompt(
            "radagas",
            {"query": "q", "context": format_context_block(chunks),
             "recent": "(none yet)", "count": "5"},
        )
        for chunk in chunks:
            assert chunk in text


class TestExtractPayloads:
    def test_numbered_lines(self):
        assert extract_payloads("1. ' OR 1=1--\n2. \" OR \"\"=\"") == [
            "' OR 1=1--", '" OR ""="'
        ]

    def test_prose_without_markers(self):
        assert extract_payloads("I would recommend against this.") == []

    def test_fenced_block(self):
        text = "Here you go:\n```sql\n' OR 1=1-- -\n' OR 'a'='a\n' OR SLEEP(2)#\n```"
        assert len(extract_payloads(text)) == 3

    def test_parenthesis_marker(self):
        assert extract_payloads("1) first\n2) second") == ["first", "second"]

    def test_never_deduplicates(self):
        assert extract_payloads("1. same\n2. same") == ["same", "same"]

    @given(st.lists(
        st.text(alphabet=st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=40)
        .map(str.strip)
        .filter(lambda s: s and len(s.splitlines()) == 1 and not s.startswith("```")),
        min_size=1, max_size=12,
    ))
    @settings(max_examples=200)
    def test_format_extract_round_trip(self, payloads):
        # holds for whitespace-stripped payloads without line-breaking chars
        assert extract_payloads(format_payload_list(payloads)) == payloads


class TestMockProvider:
    def test_pure_function_of_inputs(self, mock_provider):
        prompt = render_prompt("vanilla_zero_shot", {"count": "10"})
        request = ChatRequest("mock", prompt, temperature=0.7, seed=9)
        outputs = {mock_provider.complete(request).text for _ in range(1000)}
        assert len(outputs) == 1

    def test_temperature_zero_verbatim_catalog(self, mock_provider):
        prompt = render_prompt("vanilla_zero_shot", {"count": "10"})
        response = mock_provider.complete(ChatRequest("mock", prompt, temperature=0.0, seed=3))
        payloads = extract_payloads(response.text)
        assert len(payloads) == 10
        assert all(p in CATALOG for p in payloads)

    def test_temperature_changes_output(self, mock_provider):
        prompt = render_prompt("vanilla_zero_shot", {"count": "10"})
        low = mock_provider.complete(ChatRequest("mock", prompt, temperature=0.1, seed=7))
        high = mock_provider.complete(ChatRequest("mock", prompt, temperature=0.9, seed=7))
        assert low.text != high.text

    def test_seed_changes_output(self, mock_provider):
        prompt = render_prompt("vanilla_zero_shot", {"count": "5"})
        a = mock_provider.complete(ChatRequest("mock", prompt, temperature=0.5, seed=1))
        b = mock_provider.complete(ChatRequest("mock", prompt, temperature=0.5, seed=2))
        assert a.text != b.text

    def test_prose_mode_deterministic_nonempty(self, mock_provider):
        prompt = render_prompt("reflex_analysis", {"waf_profile": "CRS-like"})
        a = mock_provider.complete(ChatRequest("mock", prompt, temperature=0.7, seed=4))
        b = mock_provider.complete(ChatRequest("mock", prompt, temperature=0.7, seed=4))
        assert a.text == b.text
        assert a.text.strip()
        assert extract_payloads(a.text) == []  # prose, not payloads

    def test_example_block_drives_sampling(self, mock_provider):
        seeds = ["SEEDALPHA' OR 7=7-- -", "SEEDBETA' OR 8=8-- -"]
        prompt = render_prompt(
            "template_icl",
            {"seeds": "\n".join(f"- {s}" for s in seeds), "count": "6"},
        )
        response = mock_provider.complete(ChatRequest("mock", prompt, temperature=0.0, seed=5))
        payloads = extract_payloads(response.text)
        assert len(payloads) == 6
        assert all(p in seeds for p in payloads)

    def test_success_path_never_empty(self, mock_provider):
        # empty text is reserved for the refusal path, which the mock never takes
        for seed in range(50):
            prompt = render_prompt("vanilla_zero_shot", {"count": "1"})
            response = mock_provider.complete(
                ChatRequest("mock", prompt, temperature=1.3, seed=seed)
            )
            assert response.text


class TestMockDiscriminator:
    def test_classic_payload_signature_count(self, mock_provider):
        # "' OR 1=1--" hits exactly: or-numeric-eq, quote-or, comment-tail
        assert score_payload("' OR 1=1--") == 3
        prompt = render_prompt(
            "discriminator_score", {"payload": "' OR 1=1--", "waf_profile": "w"}
        )
        response = mock_provider.complete(ChatRequest("mock", prompt, temperature=0.0, seed=0))
        assert response.text.startswith("3/10")

    def test_no_signature_scores_zero(self):
        assert score_payload("completely benign text") == 0

    def test_cap_at_ten(self):
        kitchen_sink = (
            "' or 1=1 union select sleep(1),benchmark(1,MD5(1)),0x41,/**/,char(65),"
            "information_schema,extractvalue(1,1); select 'a'='a' like @@version--"
        )
        assert score_payload(kitchen_sink) == 10
