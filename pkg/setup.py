#!/usr/bin/env python

from os.path import join

from setuptools import setup


def read_version():
    namespace = {}
    with open(join('warpgeo', 'version.py')) as f:
        exec(f.read(), namespace)
    return namespace['full_version']


if __name__ == '__main__':
    name = 'warpgeo'
    license = 'GPL'
    version = read_version()

    setup(
        name=name,
        version=version,
        license=license,
        description='Closed-form geometry of generalized warped product '
                    'metrics, verified against a coordinate oracle',
        packages=['warpgeo', 'warpgeo.tests'],
        python_requires='>=3.8',
        install_requires=['numpy', 'scipy'],
        extras_require={'test': ['pytest', 'hypothesis']},
        entry_points={
            'console_scripts': ['warpgeo = warpgeo.cli:main'],
            },
        )
