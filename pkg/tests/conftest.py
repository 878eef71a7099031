import numpy as np
import pytest

import repkit as rk

WORKED_RAW = "alabaralalabarda"


@pytest.fixture(scope="session")
def worked():
    return rk.load_text(WORKED_RAW)


@pytest.fixture(scope="session")
def worked_ctx(worked):
    return rk.build_context(worked)


def family_specs():
    """The fixed family ladder: every member stays under n = 2e6."""
    specs = []
    specs += [rk.FamilySpec("fib", k=k) for k in range(5, 32)]
    specs += [rk.FamilySpec("fib-alt", k=k) for k in range(5, 31)]
    debruijn_grid = {
        2: (4, 6, 8, 10, 12, 14, 16, 18),
        3: (3, 5, 7, 9),
        4: (3, 5, 7),
        5: (3, 6),
        6: (3, 5),
        7: (3, 5),
        8: (2, 4, 5),
    }
    for s, ks in debruijn_grid.items():
        specs += [rk.FamilySpec("debruijn", k=k, sigma=s) for k in ks]
    specs += [rk.FamilySpec("planted", sigma=s) for s in (4, 5, 7, 8)]
    return specs


@pytest.fixture(scope="session")
def family_corpus():
    out = []
    for sp in family_specs():
        t = sp.generate()
        assert t.n <= 2_000_000
        out.append((sp.name, t))
    return out


RANDOM_COUNT = 500


@pytest.fixture(scope="session")
def random_corpus():
    rng = np.random.default_rng(0x5EED)
    out = []
    for i in range(RANDOM_COUNT):
        sigma = int(rng.integers(2, 9))
        length = int(rng.integers(1, 10_001))
        raw = bytes(rng.integers(1, sigma + 1, size=length).astype(np.uint8))
        out.append((f"rand-{i:03d}-s{sigma}", rk.load_text(raw)))
    return out


@pytest.fixture(scope="session")
def small_rng():
    return np.random.default_rng(97)
