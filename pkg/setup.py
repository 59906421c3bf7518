import os
from setuptools import setup, find_packages


def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname)).read()


setup(name='FDpy',
    version='0.1.0',
    description="FDpy is an opensource python package for measuring distances between points of a finite set in R^3 along least-squares polynomial surfaces.",
    long_description=read('README.rst'),
    platforms='any',
    python_requires='>=3.8',
    install_requires=['numpy>=1.17', 'scipy>=1.5'],
    extras_require={'test': ['pytest'], 'docs': ['sphinx', 'numpydoc']},
    packages=find_packages(),
    package_data={'FDpy': ['data/*.csv']},
    entry_points={'console_scripts': ['fdpy = FDpy.cli:main']},
    keywords=['geodesic distance', 'least squares', 'polynomial surfaces', 'vehicle routing'],
    classifiers=['Development Status :: 2 - Pre-Alpha', 'Topic :: Scientific/Engineering :: Mathematics'],
    license='License :: GNU-GPL',
)
