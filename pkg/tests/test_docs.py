import doctest
import importlib

import pytest

MODULES = [
    "moyal.basis",
    "moyal.stargrid",
    "moyal.seqspace",
    "moyal.symbolic.star",
    "moyal.symbolic.dist",
    "moyal.symbolic.exact",
    "moyal.symbolic.gauss",
]


@pytest.mark.parametrize("name", MODULES)
def test_docstring_examples(name):
    res = doctest.testmod(importlib.import_module(name))
    assert res.failed == 0
