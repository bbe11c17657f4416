# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Decision-tree heuristics and the label matrices they vote into.

Heuristics are shallow trees fit on the small labeled set. Each one votes
for its most likely predicate, or abstains when its leaf is not confident
enough.
"""

__all__ = [
    'DEFAULT_DEPTH_GRID',
    'DEFAULT_MODES',
    'DecisionTree',
    'HeuristicSet',
    'LabelMatrix',
    'Node',
    'build_label_matrices',
    'build_label_matrix',
    'default_abstain_threshold',
    'fit_tree',
    'generate_heuristics',
    'gini',
    'label_matrix_triplets',
    'mode_features',
    'tree_from_dict',
    'tree_predict',
    'tree_to_dict',
    ]

from ._tree import (
    DecisionTree,
    Node,
    fit_tree,
    gini,
    tree_from_dict,
    tree_predict,
    tree_to_dict,
    )
from ._generate import (
    DEFAULT_DEPTH_GRID,
    DEFAULT_MODES,
    HeuristicSet,
    default_abstain_threshold,
    generate_heuristics,
    mode_features,
    )
from ._labelmatrix import (
    LabelMatrix,
    build_label_matrices,
    build_label_matrix,
    label_matrix_triplets,
    )
