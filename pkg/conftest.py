# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Pytest collection wiring for testscenarios-based test cases.

The project's own runner (``testtools.run scenelabel.tests.test_suite``)
expands ``scenarios`` via ``testscenarios.generate_scenarios``.  Pytest
collects TestCase classes directly and never applies the scenario
parameters, so expand each scenario into its own collected class here.
"""

import inspect

from _pytest.unittest import UnitTestCase
from testscenarios import WithScenarios


class ScenarioTestCase(UnitTestCase):
    """A UnitTestCase collector bound to a generated per-scenario class."""

    def _getobj(self):
        return self._scenario_cls


def pytest_pycollect_makeitem(collector, name, obj):
    if not (inspect.isclass(obj) and issubclass(obj, WithScenarios)):
        return None
    scenarios = getattr(obj, 'scenarios', None)
    if not scenarios:
        return None
    collectors = []
    for scenario_name, params in scenarios:
        attrs = dict(params)
        attrs['scenarios'] = None
        attrs['__module__'] = obj.__module__
        attrs['__qualname__'] = '{}({})'.format(obj.__qualname__,
                                                scenario_name)
        cls = type(obj.__name__, (obj,), attrs)
        item = ScenarioTestCase.from_parent(
            collector, name='{}({})'.format(name, scenario_name))
        item._scenario_cls = cls
        collectors.append(item)
    return collectors
