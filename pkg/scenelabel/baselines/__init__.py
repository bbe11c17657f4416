# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Non-neural comparison labelers.

Each labeler returns one distribution over predicates per pair;
``distributions_to_labels`` turns them into the shared probabilistic
label format so that evaluation treats every method alike.
"""

__all__ = [
    'FrequencyTable',
    'PropagationConfig',
    'build_frequency_table',
    'distributions_to_labels',
    'frequency_baseline',
    'label_propagation',
    'oracle_labeler',
    'propagation_labeler',
    'random_labeler',
    'single_tree_labeler',
    ]

from ._frequency import (
    FrequencyTable,
    build_frequency_table,
    frequency_baseline,
    )
from ._propagation import (
    PropagationConfig,
    label_propagation,
    propagation_labeler,
    )
from ._reference import (
    distributions_to_labels,
    oracle_labeler,
    random_labeler,
    )
from ._tree import single_tree_labeler
