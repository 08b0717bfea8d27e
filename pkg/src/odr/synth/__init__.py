from odr.synth.generator import (
    GENERATOR_VERSION,
    ConfigError,
    GeneratorConfig,
    PlantedRule,
    generate_corpus,
    generate_timelines,
    oracle_probabilities,
    oracle_scores,
    planted_rules,
)

__all__ = [
    "GENERATOR_VERSION",
    "ConfigError",
    "GeneratorConfig",
    "PlantedRule",
    "generate_corpus",
    "generate_timelines",
    "oracle_probabilities",
    "oracle_scores",
    "planted_rules",
]
