"""Exception types shared across the toolkit."""


class SqlibenchError(Exception):
    """Base class for all toolkit errors."""


class EmptyInputError(SqlibenchError):
    """An operation received empty input where content is required."""


class InvalidParamsError(SqlibenchError):
    """Parameter values violate a documented precondition."""


class DimensionError(SqlibenchError):
    """Vector dimension does not match the index dimension."""


class EmptyIndexError(SqlibenchError):
    """Retrieval was attempted against an index with no entries."""


class ProviderError(SqlibenchError):
    """A chat-completion provider failed after exhausting retries."""


class RefusalError(SqlibenchError):
    """The provider declined to answer (guardrail refusal).

    Distinct from failure: carries the provider's refusal message.
    """

    def __init__(self, message: str, provider_id: str = ""):
        super().__init__(message)
        self.provider_id = provider_id


class TemplateError(SqlibenchError):
    """Prompt rendering failed; ``unbound`` lists the missing placeholder names."""

    def __init__(self, unbound):
        self.unbound = sorted(unbound)
        super().__init__(f"unbound placeholders: {', '.join(self.unbound)}")


class CatalogError(SqlibenchError):
    """The payload catalog file is missing or empty."""


class SeedError(SqlibenchError):
    """A seed list is required but empty."""


class ScoreParseError(SqlibenchError):
    """No 0-10 integer could be parsed from a discriminator response."""


class ConfigError(SqlibenchError):
    """Experiment or provider configuration is invalid."""


class InfrastructureError(SqlibenchError):
    """A backing service (database, filesystem) is unavailable; aborts the run."""


class NoDataError(SqlibenchError):
    """A statistic was requested over zero usable observations."""


class DegenerateInputError(SqlibenchError):
    """Correlation input has zero variance."""


class SqlParseError(SqlibenchError):
    """SQL text could not be parsed; ``position`` is the failing token offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position
