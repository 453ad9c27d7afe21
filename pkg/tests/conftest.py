import numpy as np
import pytest

from activesplit.data import Dataset
from activesplit.synth import smallest_names, write_corpus


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """The full 25-dataset synthetic corpus, generated once per session."""
    out = tmp_path_factory.mktemp("corpus")
    write_corpus(out)
    return out


@pytest.fixture(scope="session")
def small_corpus_paths(corpus_dir):
    """Paths of the 3 smallest datasets, ascending by size."""
    return [str(corpus_dir / f"{name}.csv") for name in smallest_names(3)]


@pytest.fixture()
def tiny_dataset():
    """12 molecules, activities 1..12, deterministic fingerprints."""
    rng = np.random.default_rng(99)
    bits = (rng.random((12, 128)) < 0.3).astype(np.uint8)
    ids = [f"m{i:02d}" for i in range(12)]
    return Dataset("tiny", "T1", ids, np.arange(1.0, 13.0), bits)
