# Copyright (c) 2026 scenelabel developers. See LICENSE for details.


from unittest import TestSuite


def test_suite():
    from scenelabel.tests.baselines import (
        test_frequency,
        test_propagation,
        test_reference,
        test_tree,
        )
    modules = [
        test_frequency,
        test_propagation,
        test_reference,
        test_tree,
        ]
    suites = map(lambda x: x.test_suite(), modules)
    return TestSuite(suites)
