import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def fig1_gs():
    from common import fig1
    return fig1()


@pytest.fixture
def corpus_dir():
    from common import CORPUS
    return CORPUS
