# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Tests for scenelabel itself."""

from unittest import TestSuite

import testscenarios
from testresources import OptimisingTestSuite


def test_suite():
    from scenelabel.tests import (
        analysis,
        baselines,
        heuristics,
        test_acceptance,
        test_concurrency,
        test_config,
        test_content,
        test_dataset,
        test_downstream,
        test_errors,
        test_evaluation,
        test_features,
        test_helpers,
        test_labelmodel,
        test_pipeline,
        test_run,
        test_stages,
        test_synthgen,
        )
    modules = [
        analysis,
        baselines,
        heuristics,
        test_acceptance,
        test_concurrency,
        test_config,
        test_content,
        test_dataset,
        test_downstream,
        test_errors,
        test_evaluation,
        test_features,
        test_helpers,
        test_labelmodel,
        test_pipeline,
        test_run,
        test_stages,
        test_synthgen,
        ]
    suites = map(lambda x: x.test_suite(), modules)
    all_tests = TestSuite(suites)
    return OptimisingTestSuite(testscenarios.generate_scenarios(all_tests))
