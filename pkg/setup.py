from setuptools import setup

with open('README.md', 'r') as readmefile:
    readme = readmefile.read()

setup(
    name='statefiber',
    version='0.1.0',
    license='MIT',
    description='Decide whether the state surface of a planar state graph is a fiber',
    long_description=readme,
    long_description_content_type='text/markdown',
    packages=['statefiber'],
    test_suite="tests.normalsuite",
    platforms='any',
    install_requires=['Flask>=1.1.0', 'click>=7.0', 'networkx>=2.5', 'numba>=0.50', 'numpy>=1.18', 'sympy>=1.6'],
    tests_require=['flask-unittest', 'hypothesis'],
    extras_require={'test': ['flask-unittest', 'hypothesis']},
    entry_points={'console_scripts': ['statefiber=statefiber.cli:main']},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    python_requires='>=3.8',
)
