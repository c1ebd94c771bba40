#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""The setup script."""

from setuptools import setup, find_packages

with open('README.md') as readme_file:
    readme = readme_file.read()

with open('requirements.txt') as reqs_file:
    install_requirements = reqs_file.readlines()

with open('requirements_dev.txt') as devreqs_file:
    test_requirements = devreqs_file.readlines()
    test_requirements.extend(install_requirements)

setup(
    name='coarse_maps',
    version='0.1.0',
    author='coarse-maps developers',
    description="Finite-scale experiments on quasi-homomorphisms and coarse quadratic maps between groups",
    license="BSD-3-Clause",
    long_description=readme,
    long_description_content_type='text/markdown',
    entry_points={
        'console_scripts': [
            'coarse_maps=coarse_maps.cli:main',
        ],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    keywords='coarse geometry quasi-homomorphism quasimorphism free group defect',
    python_requires='>=3.8',
    install_requires=install_requirements,
    packages=find_packages(include=['coarse_maps']),
    test_suite='tests',
    tests_require=test_requirements
)
