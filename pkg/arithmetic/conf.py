"""
Access to computation budgets.

Reads the WEYL_* Django settings when a settings module is configured and falls
back to the documented defaults otherwise, so the arithmetic modules also work
when imported outside the Django project.
"""

from django.conf import settings

DEFAULTS = {
    "WEYL_ENUMERATION_BUDGET": 2**24,
    "WEYL_PRIME_CAP": 10**8,
    "WEYL_PRIME_BUDGET": 200,
    "WEYL_WALK_LENGTH": 128,
    "WEYL_EXACT_GROUP_CAP": 10**6,
    "WEYL_SAMPLE_COUNT": 100_000,
    "WEYL_COUNT_CHUNK": 2**16,
}


def setting(name: str):
    """Return the configured value of a WEYL_* budget."""
    if not settings.configured:
        return DEFAULTS[name]
    return getattr(settings, name, DEFAULTS[name])
