"""Brute-force oracles, kept independent of the vectorized engine paths."""
from flagclass import MatrixFq, try_inverse


def mulclose(gens, maxsize=None):
    """Closure of a generator list under matrix multiplication."""
    seen = {g.entries: g for g in gens}
    frontier = list(gens)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                c = a * g
                if c.entries not in seen:
                    seen[c.entries] = c
                    new.append(c)
                    if maxsize and len(seen) > maxsize:
                        raise AssertionError("closure exceeded expected size")
        frontier = new
    return list(seen.values())


def naive_partition(ctx, gens):
    """Orbit partition by dict-based BFS over the exact matrix space.

    Returns a list of (rep, size) in enumeration order of the reps, plus
    a key -> orbit index map.
    """
    inverses = [try_inverse(g) for g in gens]
    label = {}
    reps = []
    sizes = []
    for x in ctx.enumerate_nilradical():
        k = ctx.key_of(x)
        if k in label:
            continue
        idx = len(reps)
        reps.append(x)
        label[k] = idx
        frontier = [x]
        size = 1
        while frontier:
            new = []
            for y in frontier:
                for g, gi in zip(gens, inverses):
                    z = g * y * gi
                    zk = ctx.key_of(z)
                    if zk not in label:
                        label[zk] = idx
                        new.append(z)
                        size += 1
            frontier = new
        sizes.append(size)
    return list(zip(reps, sizes)), label


def unipotent_group(ctx):
    """All elements 1 + x of U as explicit matrices."""
    ident = MatrixFq.identity(ctx.field, ctx.n)
    return [ident + x for x in ctx.enumerate_nilradical()]


def conjugacy_class_count(elements):
    """Class count of a finite matrix group by direct conjugation."""
    inverses = {g.entries: try_inverse(g) for g in elements}
    seen = set()
    classes = 0
    for m in elements:
        if m.entries in seen:
            continue
        classes += 1
        for g in elements:
            seen.add((g * m * inverses[g.entries]).entries)
    return classes


def commuting_pair_count(elements):
    return sum(1 for a in elements for b in elements if a * b == b * a)
