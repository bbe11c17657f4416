# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Shallow CART decision trees with Gini impurity."""

__all__ = [
    'DecisionTree',
    'Node',
    'fit_tree',
    'gini',
    'tree_from_dict',
    'tree_predict',
    'tree_to_dict',
    ]

import numpy as np

from scenelabel.errors import DimensionError, EmptyInputError


# Scores closer than this are ties, broken by feature then threshold.
_TIE = 1e-12


def gini(counts):
    """Return the Gini impurity ``1 - sum(p_k ** 2)`` of a class histogram."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total == 0:
        return 0.0
    return float(1.0 - np.sum((counts / total) ** 2))


class Node:
    """A tree node.

    Internal nodes send ``x[feature] <= threshold`` left. Every node keeps
    the class histogram of the training samples that reached it.
    """

    def __init__(self, counts, feature=None, threshold=None, left=None,
                 right=None):
        self.counts = np.asarray(counts, dtype=float)
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right

    @property
    def is_leaf(self):
        return self.left is None

    @property
    def n_samples(self):
        return float(self.counts.sum())

    @property
    def impurity(self):
        return gini(self.counts)

    @property
    def distribution(self):
        return self.counts / self.counts.sum()

    def depth(self):
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def leaves(self):
        if self.is_leaf:
            return [self]
        return self.left.leaves() + self.right.leaves()

    def internal_nodes(self):
        if self.is_leaf:
            return []
        return ([self] + self.left.internal_nodes()
                + self.right.internal_nodes())


class DecisionTree:
    """A fitted classification tree.

    :ivar root: The root ``Node``.
    :ivar num_classes: The length of every leaf histogram.
    :ivar num_features: The input dimension.
    :ivar max_depth: The depth limit used when fitting, or None.
    :ivar feature_mode: The feature layout the tree was fit on, if known.
    """

    def __init__(self, root, num_classes, num_features, max_depth=None,
                 min_leaf=1, feature_mode=None):
        self.root = root
        self.num_classes = num_classes
        self.num_features = num_features
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.feature_mode = feature_mode

    def __repr__(self):
        return '<DecisionTree mode={} depth={}/{} leaves={}>'.format(
            self.feature_mode, self.depth(), self.max_depth,
            len(self.root.leaves()))

    def depth(self):
        return self.root.depth()

    def predict_proba(self, X):
        """Return leaf distributions for the rows of ``X`` as ``(N, K)``.

        :raises DimensionError: If ``X`` has the wrong number of columns.
        """
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.num_features:
            raise DimensionError(
                'tree expects {} features, got shape {}'.format(
                    self.num_features, X.shape))
        out = np.zeros((X.shape[0], self.num_classes))
        _route(self.root, X, np.arange(X.shape[0]), out)
        return out

    def predict(self, X):
        return np.argmax(self.predict_proba(X), axis=1)

    def feature_importances(self):
        """Return the total weighted Gini decrease per feature.

        The vector is normalised to sum to one; it is all zeros for a
        single-leaf tree.
        """
        decrease = np.zeros(self.num_features)
        for node in self.root.internal_nodes():
            decrease[node.feature] += (
                node.n_samples * node.impurity
                - node.left.n_samples * node.left.impurity
                - node.right.n_samples * node.right.impurity)
        total = decrease.sum()
        if total > 0:
            decrease /= total
        return decrease


def _route(node, X, rows, out):
    if node.is_leaf:
        out[rows] = node.distribution
        return
    goes_left = X[rows, node.feature] <= node.threshold
    _route(node.left, X, rows[goes_left], out)
    _route(node.right, X, rows[~goes_left], out)


def _best_split(X, onehot, min_leaf):
    """Return ``(feature, threshold)`` minimising weighted Gini, or None."""
    n = X.shape[0]
    best = None
    best_score = np.inf
    for feature in range(X.shape[1]):
        order = np.argsort(X[:, feature], kind='stable')
        values = X[order, feature]
        left = np.cumsum(onehot[order], axis=0)[:-1]
        right = onehot.sum(axis=0) - left
        n_left = np.arange(1, n, dtype=float)
        n_right = n - n_left
        valid = ((values[1:] > values[:-1]) & (n_left >= min_leaf)
                 & (n_right >= min_leaf))
        if not valid.any():
            continue
        # Weighted Gini times n: sum over children of n_c - sum(c_k^2)/n_c.
        score = (n_left - (left ** 2).sum(axis=1) / n_left
                 + n_right - (right ** 2).sum(axis=1) / n_right) / n
        score = np.where(valid, score, np.inf)
        lowest = score.min()
        if lowest < best_score - _TIE:
            position = int(np.flatnonzero(score <= lowest + _TIE)[0])
            low, high = values[position], values[position + 1]
            threshold = low + (high - low) / 2.0
            if threshold >= high:
                threshold = low
            best, best_score = (feature, float(threshold)), lowest
    return best


def _grow(X, onehot, rows, depth, max_depth, min_leaf):
    counts = onehot[rows].sum(axis=0)
    node = Node(counts)
    if max_depth is not None and depth >= max_depth:
        return node
    if np.count_nonzero(counts) < 2 or len(rows) < 2 * min_leaf:
        return node
    split = _best_split(X[rows], onehot[rows], min_leaf)
    if split is None:
        return node
    node.feature, node.threshold = split
    goes_left = X[rows, node.feature] <= node.threshold
    node.left = _grow(X, onehot, rows[goes_left], depth + 1, max_depth,
                      min_leaf)
    node.right = _grow(X, onehot, rows[~goes_left], depth + 1, max_depth,
                       min_leaf)
    return node


def fit_tree(X, y, max_depth=None, min_leaf=1, num_classes=None,
             feature_mode=None):
    """Fit a CART classification tree.

    Splits greedily minimise the weighted Gini impurity of the children.
    Candidate thresholds are midpoints between consecutive distinct values,
    and ties go to the lowest feature index, then the lowest threshold.
    Growth stops at ``max_depth``, at pure nodes, or when no threshold
    leaves ``min_leaf`` samples on both sides.

    :param X: An ``(N, D)`` feature matrix.
    :param y: ``N`` integer class labels.
    :param max_depth: The depth limit, or None for unbounded.
    :param min_leaf: The minimum number of samples in a leaf.
    :param num_classes: The histogram length; defaults to ``max(y) + 1``.
    :raises EmptyInputError: If there are no samples or no features.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise EmptyInputError(
            'fit_tree needs at least one sample and one feature, got shape '
            '{}'.format(X.shape))
    if len(y) != X.shape[0]:
        raise DimensionError('{} labels for {} samples'.format(
            len(y), X.shape[0]))
    if num_classes is None:
        num_classes = int(y.max()) + 1
    onehot = np.zeros((len(y), num_classes))
    onehot[np.arange(len(y)), y] = 1.0
    root = _grow(X, onehot, np.arange(len(y)), 0, max_depth,
                 max(1, int(min_leaf)))
    return DecisionTree(root, num_classes, X.shape[1], max_depth, min_leaf,
                        feature_mode)


def tree_predict(tree, x):
    """Return the class distribution of the leaf ``x`` reaches.

    :raises DimensionError: If ``x`` does not match the tree's input.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError(
            'expected one feature vector, got shape {}'.format(x.shape))
    return tree.predict_proba(x[np.newaxis, :])[0]


def _node_to_dict(node):
    data = {'counts': [float(c) for c in node.counts]}
    if not node.is_leaf:
        data.update(feature=node.feature, threshold=node.threshold,
                    left=_node_to_dict(node.left),
                    right=_node_to_dict(node.right))
    return data


def _node_from_dict(data):
    if 'feature' not in data:
        return Node(data['counts'])
    return Node(data['counts'], data['feature'], data['threshold'],
                _node_from_dict(data['left']), _node_from_dict(data['right']))


def tree_to_dict(tree):
    """Return ``tree`` as nested JSON-compatible node objects."""
    return {
        'feature_mode': tree.feature_mode,
        'max_depth': tree.max_depth,
        'min_leaf': tree.min_leaf,
        'num_classes': tree.num_classes,
        'num_features': tree.num_features,
        'root': _node_to_dict(tree.root),
        }


def tree_from_dict(data):
    return DecisionTree(
        _node_from_dict(data['root']), data['num_classes'],
        data['num_features'], data['max_depth'], data['min_leaf'],
        data['feature_mode'])
