from setuptools import setup

import dacsec

setup(
    name='dacsec',
    version=dacsec.__version__,
    packages=['dacsec', 'dacsec.tests'],
    author=dacsec.__author__,
    license=dacsec.__license__,
    description=('Secrecy-rate analysis of massive MIMO downlinks '
                 'with low-resolution DACs'),
    long_description=dacsec.__doc__,
    keywords='massive MIMO, physical layer security, DAC, Bussgang',
    classifiers=[
        "Development Status :: 3 - Alpha",
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering',
    ],
    install_requires=[
        'numpy >= 1.17',
        'scipy >= 1.4',
    ],
    entry_points={
        'console_scripts': ['dacsec = dacsec.cli:run'],
    },
)
