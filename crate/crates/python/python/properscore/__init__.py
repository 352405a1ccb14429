from ._properscore import (
    FAMILIES,
    DomainError,
    EstimationResult,
    Family,
    MultivariateForecast,
    SampleForecast,
    ScoreError,
    crps,
    crps_mixnorm,
    crps_sample,
    es_sample,
    logs,
    logs_mixnorm,
    logs_sample,
    minimize_score,
    vs_sample,
)

__all__ = [
    "FAMILIES",
    "DomainError",
    "EstimationResult",
    "Family",
    "MultivariateForecast",
    "SampleForecast",
    "ScoreError",
    "crps",
    "crps_mixnorm",
    "crps_sample",
    "es_sample",
    "logs",
    "logs_mixnorm",
    "logs_sample",
    "minimize_score",
    "vs_sample",
]
