import os
import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from strongmorse.complexes import SimplicialComplex
from strongmorse.reduce import Rng

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
LIBRARY_DIR = Path(os.environ.get("STRONGMORSE_LIBRARY", DATA_DIR / "library"))


def random_complex(rng: random.Random, max_vertices: int = 7) -> SimplicialComplex:
    """Random facet set on at most ``max_vertices`` vertices, dimension <= 3."""
    n = rng.randint(1, max_vertices)
    facets = []
    for _ in range(rng.randint(1, 2 * n)):
        size = rng.randint(1, min(n, 4))
        facets.append(rng.sample(range(n), size))
    return SimplicialComplex.from_facets(facets)


def seeded_complexes(count: int, master_seed: int = 1234, max_vertices: int = 7):
    """Deterministic stream of (subseed, complex) pairs."""
    master = Rng(master_seed)
    for i in range(count):
        sub = master.split(i).seed
        yield sub, random_complex(random.Random(sub), max_vertices)


def random_heights(rng: random.Random, cx: SimplicialComplex) -> dict[int, int]:
    """Random injective heights on the vertices."""
    values = rng.sample(range(10 * len(cx.vertices) + 10), len(cx.vertices))
    return dict(zip(cx.vertices, values))


facet_lists = st.lists(
    st.lists(st.integers(0, 6), unique=True, min_size=1, max_size=4),
    min_size=1, max_size=8)

complexes = facet_lists.map(SimplicialComplex.from_facets)


class ScriptedRng:
    """Test double driving reductions through a forced schedule."""

    def __init__(self, shuffles, choices=()):
        self.shuffles = [list(s) for s in shuffles]
        self.choices = list(choices)

    def shuffle(self, seq):
        want = self.shuffles.pop(0)
        assert sorted(want) == sorted(seq), (want, seq)
        return list(want)

    def choice(self, seq):
        picked = self.choices.pop(0)
        assert picked in list(seq), (picked, seq)
        return picked


def library_file(name: str) -> Path | None:
    for candidate in (name, f"{name}.txt", f"{name}.dat"):
        path = LIBRARY_DIR / candidate
        if path.exists():
            return path
    return None


def require_library(name: str) -> Path:
    path = library_file(name)
    if path is None:
        pytest.skip(f"library triangulation {name!r} not present under {LIBRARY_DIR}")
    return path
