from setuptools import setup, find_packages

version = '1.0.0dev'

setup(name='Products.UnorderedRules',
      version=version,
      description="Truly unordered probabilistic rule sets for multi-class "
                  "classification, learned with a two-phase diverse beam "
                  "search and selected by approximate NML.",
      long_description=open("README.txt").read() + "\n" +
                       open("CHANGES.txt").read(),
      classifiers=[
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        ],
      keywords='rule sets MDL NML classification interpretable',
      author='UnorderedRules development team',
      license='GPL',
      packages=find_packages(exclude=['ez_setup', 'examples', 'examples.*']),
      namespace_packages=['Products'],
      include_package_data=True,
      package_data={'Products.UnorderedRules.tests': ['*.txt', 'input/*.csv']},
      zip_safe=False,
      python_requires='>=3.8',
      extras_require=dict(
        test=[
            'zope.testing',
            'zope.testrunner',
        ]
      ),
      install_requires=[
          'setuptools',
          'zope.component',
          'zope.event',
          'zope.interface',
          'zope.schema',
          'numpy',
          'scipy',
          'pandas',
          'scikit-learn',
      ],
      entry_points={
          'console_scripts': [
              'turs = Products.UnorderedRules.cli:main',
          ],
      },
      )
