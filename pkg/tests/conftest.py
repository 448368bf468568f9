import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from varsel import load_knowledge_base


@pytest.fixture(scope="session")
def kb():
    return load_knowledge_base()
