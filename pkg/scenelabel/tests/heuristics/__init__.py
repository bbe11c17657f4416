# Copyright (c) 2026 scenelabel developers. See LICENSE for details.


from unittest import TestSuite


def test_suite():
    from scenelabel.tests.heuristics import (
        test_generate,
        test_labelmatrix,
        test_tree,
        )
    modules = [
        test_generate,
        test_labelmatrix,
        test_tree,
        ]
    suites = map(lambda x: x.test_suite(), modules)
    return TestSuite(suites)
