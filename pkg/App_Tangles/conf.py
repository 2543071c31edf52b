from django.conf import settings

DEFAULTS = {
    'TANGLES_MEMO_LIMIT': 24,
    'TANGLES_DENSE_TABLE_LIMIT': 20,
    'TANGLES_MAX_EXHAUSTIVE': 12,
    'TANGLES_SAMPLE_LIMIT': 20,
    'TANGLES_AXIOM_SAMPLE_SIZE': 20000,
    'TANGLES_AXIOM_SAMPLE_SEED': 0,
    'TANGLES_MAX_FREE_POSITIONS': 22,
    'TANGLES_MAX_BASE_ORDER': 5,
    'TANGLES_MAX_DS_ORDER': 4,
    'TANGLES_BRUTE_FORCE_LIMIT': 10,
    'TANGLES_BRANCH_WIDTH_LIMIT': 7,
    'TANGLES_ENGINE': 'closure',
}


def setting(name):
    """Read a tangles setting, falling back to the default outside a configured project."""
    if settings.configured:
        return getattr(settings, name, DEFAULTS[name])
    return DEFAULTS[name]
