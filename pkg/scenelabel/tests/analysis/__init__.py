# Copyright (c) 2026 scenelabel developers. See LICENSE for details.


from unittest import TestSuite


def test_suite():
    from scenelabel.tests.analysis import (
        test_fit,
        test_importance,
        test_meanshift,
        test_subtypes,
        )
    modules = [
        test_fit,
        test_importance,
        test_meanshift,
        test_subtypes,
        ]
    suites = map(lambda x: x.test_suite(), modules)
    return TestSuite(suites)
