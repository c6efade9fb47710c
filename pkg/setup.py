from setuptools import setup

setup(
        name='choquard-harness',
        version='0.1',
        description='Numerics for the Choquard-Hardy-Sobolev problem on a ball',
        license='AGPLv3',
        packages=['radial', 'choquard'],
        scripts=['choquard-harness'],
        python_requires='>=3.6',
        install_requires=[
            'numpy',
            'scipy',
            'ujson',
            'uvloop',
            ],
        extras_require={
            'proctitle': ['setproctitle'],
            'test': ['pytest'],
            },
        )
