"""
Cached accessors for Bifurcato settings.
Services resolve their default tolerances through these so that tests can
clear the caches after patching the environment.
"""

from functools import lru_cache

from config.settings import (
    IntegratorConfig,
    Settings,
    ToleranceConfig,
    UnfoldingConfig,
)


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


@lru_cache()
def get_tolerances() -> ToleranceConfig:
    return ToleranceConfig()


@lru_cache()
def get_integrator_config() -> IntegratorConfig:
    return IntegratorConfig()


@lru_cache()
def get_unfolding_config() -> UnfoldingConfig:
    return UnfoldingConfig()


def clear_config_caches() -> None:
    """Drop cached settings (used after environment changes)."""
    for accessor in (get_settings, get_tolerances, get_integrator_config, get_unfolding_config):
        accessor.cache_clear()
