import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"
SYNTHETIC = DATA_DIR / "synthetic_heart_failure.csv"

# The real table is public; point this at a local copy to run the
# real-data acceptance checks (or drop it at runner/data/).
REAL_ENV = "HEART_FAILURE_CSV"
REAL_DEFAULT = Path(__file__).parent.parent / "data" / "heart_failure_clinical_records_dataset.csv"


def real_dataset_path():
    candidate = os.environ.get(REAL_ENV)
    if candidate and Path(candidate).exists():
        return Path(candidate)
    if REAL_DEFAULT.exists():
        return REAL_DEFAULT
    return None


def selection_cli(args: list[str]) -> subprocess.CompletedProcess:
    """Invoke the selection engine's CLI (the external interface)."""
    executable = shutil.which("varsel")
    if executable:
        command = [executable, *args]
    else:
        command = [sys.executable, "-c", "from varsel.cli import main; main()", *args]
    return subprocess.run(command, capture_output=True, text=True)


@pytest.fixture(scope="session")
def chain_file(tmp_path_factory) -> Path:
    """The case-study chain JSON, produced by the engine's own CLI."""
    path = tmp_path_factory.mktemp("chain") / "chain.json"
    result = selection_cli(
        ["recommend", "--samples", "299", "--features", "13", "--predict", "category", "--labeled", "--format", "json"]
    )
    assert result.returncode == 0, result.stderr
    path.write_text(result.stdout, encoding="utf-8")
    assert json.loads(result.stdout)["steps"][0] == ["LinearSVC"]
    return path
