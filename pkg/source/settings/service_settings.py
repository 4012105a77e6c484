"""Service configuration settings"""

# Enumeration Settings
SEARCH_SETTINGS = {
    'min_size': 2,  # the one-element algebra is never emitted
    'max_size_limit': 7,
    'time_budget': 1800,  # seconds
    'checkpoint_dir': '.semiring-checkpoints',
    'checkpoint_version': 1,  # bump when the search changes; older files are then ignored
    'progress': False
}

# Decision Procedure Settings
DECISION_SETTINGS = {
    'free_rank_scope': 2,  # subsemimodules of free(a, k) for k <= scope
    'certificate_max_size': 1024,  # outer objects above this are not materialised
    'max_power': 4,
    'ideal_family_limit': 12  # all families of ideals checked up to this many ideals
}

# Resource Monitor Settings
RESOURCE_MONITOR_SETTINGS = {
    'max_workers': 1,
    'backend': 'loky',
    'batch_size': 'auto'
}

# Cache Settings
CACHE_SETTINGS = {
    'max_entries': 512
}

# Report Settings
REPORT_SETTINGS = {
    'validate_schema': True,
    'indent': 2,
    'schema_version': 1
}

# Monitoring Settings
MONITORING_SETTINGS = {
    'enabled': True,
    'log_level': 'WARNING',
    'performance_threshold': 1.0  # seconds
}
