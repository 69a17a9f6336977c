"""Enumeration caps.

Every exhaustive routine checks its input against one of these limits and
raises :class:`~orient_rr.errors.TooLarge` instead of truncating.  The limits
can be raised per process through the ``ORIENT_RR_CAPS`` environment variable,
e.g. ``ORIENT_RR_CAPS="chi_vertices=24,partial_edges=13"``.
"""

import os

from .errors import ParseError

DEFAULTS = {
    "chi_vertices": 20,        # subsets enumerated by chi_global
    "partial_edges": 12,       # 3^|E| partial orientations
    "class_table_edges": 8,    # full orientations bucketed into classes
    "brute_rank_vertices": 6,
    "brute_rank_degree": 12,
    "path_distance_edges": 5,
    "mfmc_capacity": 10_000,   # parallel-edge expansion in mfmc_via_orientability
}


def _from_env():
    caps = dict(DEFAULTS)
    raw = os.environ.get("ORIENT_RR_CAPS", "").strip()
    if not raw:
        return caps
    for item in raw.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in caps:
            raise ParseError(f"bad ORIENT_RR_CAPS entry {item!r}")
        try:
            caps[key] = int(value)
        except ValueError:
            raise ParseError(f"bad ORIENT_RR_CAPS value {item!r}") from None
    return caps


def get(name):
    return _from_env()[name]
