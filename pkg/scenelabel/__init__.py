# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Label visual relationships from a handful of examples per predicate."""

__all__ = [
    'EvalReport',
    'HeuristicSet',
    'LabelMatrix',
    'PipelineConfig',
    'ProbabilisticLabel',
    'SceneGraphDataset',
    'ScenelabelError',
    'SplitDataset',
    'aggregate_labels',
    'build_label_matrix',
    'generate_heuristics',
    'load_dataset',
    'macro_prf1',
    'run_pipeline',
    'spatial_features',
    'split_limited',
    'train_label_model',
    ]

from scenelabel.config import PipelineConfig
from scenelabel.dataset import (
    SceneGraphDataset,
    SplitDataset,
    load_dataset,
    split_limited,
    )
from scenelabel.errors import ScenelabelError
from scenelabel.evaluation import EvalReport, macro_prf1
from scenelabel.features import spatial_features
from scenelabel.heuristics import (
    HeuristicSet,
    LabelMatrix,
    build_label_matrix,
    generate_heuristics,
    )
from scenelabel.labelmodel import (
    ProbabilisticLabel,
    aggregate_labels,
    train_label_model,
    )
from scenelabel.pipeline import run_pipeline

# Same format as sys.version_info. An uninstalled tree has no package
# metadata for pbr to read, so it reports the development version.
try:
    from pbr.version import VersionInfo
    _version = VersionInfo('scenelabel')
    __version__ = _version.semantic_version().version_tuple()
    version = _version.release_string()
except Exception:
    __version__ = (0, 1, 0, 'dev', 0)
    version = '0.1.0.dev0'
