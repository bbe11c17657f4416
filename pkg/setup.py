#!/usr/bin/env python
import setuptools


setuptools.setup(
    python_requires='>=3.8',
    setup_requires=['pbr'],
    pbr=True)
