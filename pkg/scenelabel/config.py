# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Pipeline configuration: one JSON file with a section per stage.

Every section is a dataclass with documented defaults. Unknown sections
and keys are errors, so a misspelt key never silently falls back to a
default. Random seeds are not set per section; everything derives from
the top-level ``seed``.
"""

__all__ = [
    'AnalysisSection',
    'EvaluationSection',
    'HeuristicsSection',
    'METHODS',
    'PipelineConfig',
    'SplitSection',
    'SweepSection',
    'apply_override',
    'config_from_dict',
    'config_to_dict',
    'load_config',
    ]

import dataclasses
from dataclasses import dataclass, field
import json

from scenelabel.baselines import PropagationConfig
from scenelabel.downstream import TrainConfig
from scenelabel.errors import ConfigError
from scenelabel.features import MODES
from scenelabel.labelmodel import LabelModelConfig


METHODS = (
    'ours',
    'ours_spatial',
    'ours_categorical',
    'majority_vote',
    'single_tree',
    'label_propagation',
    'freq',
    'freq_overlap',
    'random',
    'oracle',
    )


def _check_method(method, key):
    if method not in METHODS:
        raise ConfigError('{}: unknown method {!r}; expected one of {}'.format(
            key, method, ', '.join(METHODS)))


@dataclass(frozen=True)
class SplitSection:
    """How the dataset is cut into labeled, unlabeled and held-out parts.

    ``negative_ratio`` 0.25 makes one in five unlabeled pairs a negative.
    """

    n_labeled: int = 10
    holdout_fraction: float = 0.2
    negative_ratio: float = 0.25

    def __post_init__(self):
        if not isinstance(self.n_labeled, int) or self.n_labeled < 1:
            raise ConfigError('split.n_labeled must be an integer >= 1')
        if not 0 <= self.holdout_fraction < 1:
            raise ConfigError('split.holdout_fraction must be in [0, 1)')
        if self.negative_ratio < 0:
            raise ConfigError('split.negative_ratio must be >= 0')


@dataclass(frozen=True)
class HeuristicsSection:

    depth_grid: tuple = (1, 2, 3)
    modes: tuple = ('spatial', 'categorical')
    min_leaf: int = 1
    abstain_threshold: object = None

    def __post_init__(self):
        object.__setattr__(self, 'depth_grid', tuple(self.depth_grid))
        object.__setattr__(self, 'modes', tuple(self.modes))
        if not self.depth_grid or any(
                not isinstance(d, int) or d < 1 for d in self.depth_grid):
            raise ConfigError(
                'heuristics.depth_grid must list integer depths >= 1')
        if not self.modes:
            raise ConfigError('heuristics.modes must not be empty')
        for mode in self.modes:
            if mode not in MODES:
                raise ConfigError(
                    'heuristics.modes: unknown mode {!r}'.format(mode))
        if self.min_leaf < 1:
            raise ConfigError('heuristics.min_leaf must be >= 1')
        if self.abstain_threshold is not None and not (
                0 < self.abstain_threshold <= 0.95):
            raise ConfigError(
                'heuristics.abstain_threshold must be in (0, 0.95]')


@dataclass(frozen=True)
class EvaluationSection:
    """Evaluation settings.

    :ivar tau: Aggregation threshold below which a pair is abstained.
    :ivar include_negatives: Also score unlabeled pairs that carry no
        relationship; any prediction on them counts as a false positive.
    :ivar compare_methods: Extra labelers evaluated next to the main
        method in ``eval.txt``.
    """

    k_values: tuple = (20, 50, 100)
    compare_methods: tuple = ()
    include_negatives: bool = False
    tau: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, 'k_values', tuple(self.k_values))
        object.__setattr__(
            self, 'compare_methods', tuple(self.compare_methods))
        if not self.k_values or any(
                not isinstance(k, int) or k < 1 for k in self.k_values):
            raise ConfigError('evaluation.k_values must be integers >= 1')
        for method in self.compare_methods:
            _check_method(method, 'evaluation.compare_methods')
        if not 0 <= self.tau <= 1:
            raise ConfigError('evaluation.tau must be in [0, 1]')


@dataclass(frozen=True)
class AnalysisSection:
    """Complexity analysis settings.

    :ivar baseline: The method whose per-predicate F1 is subtracted from
        the main method's when fitting complexity against improvement.
    """

    enabled: bool = True
    quantile: float = 0.1
    min_cluster_fraction: float = 0.05
    separation: float = 6.0
    baseline: str = 'single_tree'
    importance_depth: int = 3

    def __post_init__(self):
        if not 0 < self.quantile <= 1:
            raise ConfigError('analysis.quantile must be in (0, 1]')
        if not 0 <= self.min_cluster_fraction < 1:
            raise ConfigError(
                'analysis.min_cluster_fraction must be in [0, 1)')
        if not self.separation > 0:
            raise ConfigError('analysis.separation must be > 0')
        _check_method(self.baseline, 'analysis.baseline')
        if self.importance_depth < 1:
            raise ConfigError('analysis.importance_depth must be >= 1')


@dataclass(frozen=True)
class SweepSection:

    n_values: tuple = (250, 100, 50, 25, 10)

    def __post_init__(self):
        object.__setattr__(self, 'n_values', tuple(self.n_values))
        if not self.n_values or any(
                not isinstance(n, int) or n < 1 for n in self.n_values):
            raise ConfigError('sweep.n_values must be integers >= 1')


_SECTIONS = {
    'split': SplitSection,
    'heuristics': HeuristicsSection,
    'label_model': LabelModelConfig,
    'propagation': PropagationConfig,
    'classifier': TrainConfig,
    'evaluation': EvaluationSection,
    'analysis': AnalysisSection,
    'sweep': SweepSection,
    }

_TOP_LEVEL = ('dataset', 'output_dir', 'method', 'seed', 'threads')


@dataclass(frozen=True)
class PipelineConfig:
    """The effective configuration of one run.

    :ivar dataset: Path of the dataset JSON file.
    :ivar output_dir: Directory receiving every output file.
    :ivar method: The labeler whose labels train the classifier.
    :ivar seed: The root seed of every random stream.
    :ivar threads: Worker threads for per-predicate work.
    """

    dataset: object = None
    output_dir: str = 'output'
    method: str = 'ours'
    seed: int = 0
    threads: int = 1
    split: SplitSection = field(default_factory=SplitSection)
    heuristics: HeuristicsSection = field(default_factory=HeuristicsSection)
    label_model: LabelModelConfig = field(default_factory=LabelModelConfig)
    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    classifier: TrainConfig = field(default_factory=TrainConfig)
    evaluation: EvaluationSection = field(default_factory=EvaluationSection)
    analysis: AnalysisSection = field(default_factory=AnalysisSection)
    sweep: SweepSection = field(default_factory=SweepSection)

    def __post_init__(self):
        _check_method(self.method, 'method')
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError('seed must be a non-negative integer')
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ConfigError('threads must be an integer >= 1')

    def section_with_seed(self, name):
        """Return section ``name`` with its seed taken from the root seed."""
        return dataclasses.replace(getattr(self, name), seed=self.seed)


def _section_keys(cls):
    return [f.name for f in dataclasses.fields(cls) if f.name != 'seed']


def _build_section(name, values):
    cls = _SECTIONS[name]
    if not isinstance(values, dict):
        raise ConfigError('section {!r} must be an object'.format(name))
    known = _section_keys(cls)
    for key in values:
        if key not in known:
            raise ConfigError('unknown key {}.{}; expected one of {}'.format(
                name, key, ', '.join(known)))
    try:
        return cls(**values)
    except TypeError as e:
        raise ConfigError('section {!r}: {}'.format(name, e))


def config_from_dict(data):
    """Build a ``PipelineConfig`` from parsed JSON.

    :raises ConfigError: On unknown sections or keys, or invalid values.
    """
    if not isinstance(data, dict):
        raise ConfigError('the configuration must be a JSON object')
    values = {}
    for key, value in data.items():
        if key in _SECTIONS:
            values[key] = _build_section(key, value)
        elif key in _TOP_LEVEL:
            values[key] = value
        else:
            raise ConfigError('unknown configuration key {!r}'.format(key))
    return PipelineConfig(**values)


def config_to_dict(config):
    """Return the configuration as JSON-ready data, seeds left out."""
    data = {key: getattr(config, key) for key in _TOP_LEVEL}
    for name in _SECTIONS:
        section = getattr(config, name)
        data[name] = {
            key: (list(value) if isinstance(value, tuple) else value)
            for key, value in dataclasses.asdict(section).items()
            if key != 'seed'}
    return data


def load_config(path=None):
    """Load a configuration file; None gives the defaults."""
    if path is None:
        return PipelineConfig()
    try:
        with open(path, 'rb') as stream:
            data = json.loads(stream.read().decode('utf8'))
    except FileNotFoundError:
        raise ConfigError('configuration file not found: {}'.format(path))
    except ValueError as e:
        raise ConfigError('{}: not valid JSON: {}'.format(path, e))
    return config_from_dict(data)


def apply_override(config, assignment):
    """Apply one ``key=JSON`` or ``section.key=JSON`` override.

    A value that is not valid JSON is taken as a plain string, so
    ``method=oracle`` works without quotes.
    """
    target, sep, raw = assignment.partition('=')
    if not sep or not target:
        raise ConfigError(
            'override {!r} is not of the form key=value'.format(assignment))
    try:
        value = json.loads(raw)
    except ValueError:
        value = raw
    data = config_to_dict(config)
    name, dot, key = target.partition('.')
    if dot:
        if name not in _SECTIONS:
            raise ConfigError('unknown configuration section {!r}'.format(
                name))
        data[name][key] = value
    else:
        data[name] = value
    return config_from_dict(data)
