from App_Tangles.instances import load_fixture

# edge ids of the three triangles of the triforce fixture
TRI1 = 0b000000111
TRI2 = 0b000111000
TRI3 = 0b111000000
TRIANGLES = (TRI1, TRI2, TRI3)


def triforce():
    return load_fixture('triforce')


def triangle_of(tangle):
    """The triangle edge set a triforce tangle of order 2 contains."""
    found = [x for x in TRIANGLES if tangle.contains(x)]
    assert len(found) == 1, found
    return found[0]


def renamed(x, perm):
    out = 0
    for i in range(len(perm)):
        if x >> i & 1:
            out |= 1 << perm[i]
    return out
