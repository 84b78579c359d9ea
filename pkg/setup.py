from setuptools import setup, find_packages


setup(
    name='urysel',
    version='0.1',
    packages=find_packages(exclude=['tests']),
    package_data={
        'urysel.providers.base': ['txtlogo.txt', 'defaults.ini'],
    },
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
    scripts=['bin/start-urysel.py', 'bin/start.py'],
    description='Rational Urysohn space, effective embeddings, domain '
                'representations and probabilistic selections',
    author='urysel developers',
)
