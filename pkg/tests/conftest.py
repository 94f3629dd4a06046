import pytest

from flagclass import (
    DimensionVector,
    FlagContext,
    count_classes,
    field_for_order,
    find_zero_one_reps,
)

THREADS = 2


@pytest.fixture(scope="session")
def counts_for():
    """Session-wide cache of (ctx, ClassCount) per (d, q); heavy cells run once."""
    cache = {}

    def get(d_text, q):
        key = (d_text, q)
        if key not in cache:
            ctx = FlagContext(DimensionVector.parse(d_text), field_for_order(q))
            cc = count_classes(ctx, threads=THREADS)
            find_zero_one_reps(ctx, cc.partition)
            cache[key] = (ctx, cc)
        return cache[key]

    return get
