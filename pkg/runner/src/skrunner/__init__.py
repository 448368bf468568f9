"""Training runner for the heart-failure case study.

Feeds the variability-aware selection engine with real metrics: trains each
recommended scikit-learn technique with the study protocol and writes
reports in the engine's JSON format.
"""

from .chain import Criterion, load_chain, parse_criterion, run_chain
from .dataset import DatasetError, DatasetSummary, load_dataset
from .training import SplitSpec, supported_techniques, train_and_score, write_report

__version__ = "0.1.0"
