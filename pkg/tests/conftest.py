import pytest

from steinlat import build_context
from steinlat.modulealg import ModuleAlgebra
from steinlat.steinberg import SteinbergLattice

SMALL_CONTEXTS = [(2, 2, 3), (2, 3, 2), (3, 2, 7), (3, 2, 3)]


@pytest.fixture(scope="session")
def algebras():
    """Fully built pipelines for the four desk-scale contexts."""
    out = {}
    for nql in SMALL_CONTEXTS:
        ctx = build_context(*nql)
        out[nql] = ModuleAlgebra(SteinbergLattice(ctx))
    return out


@pytest.fixture(scope="session")
def big_algebra():
    """The (4,3,2) pipeline: dim L = 729, 2080 cosets."""
    ctx = build_context(4, 3, 2)
    return ModuleAlgebra(SteinbergLattice(ctx))
