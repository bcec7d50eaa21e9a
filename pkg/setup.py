from setuptools import setup

setup(name='contregime',
      version='0.1.0',
      packages=['contregime',
                'contregime.timegrid',
                'contregime.dgp',
                'contregime.regimes',
                'contregime.oracle',
                'contregime.estimators',
                'contregime.harness'],
      scripts=['contregime/scripts/contregime'],
      python_requires='>=3.10',
      install_requires=['astropy>=5.0',
                        'numpy>=1.22',
                        'scipy>=1.9',
                        'scikit-learn>=1.1',
                        'joblib>=1.1',
                        'tomli>=1.1; python_version < "3.11"']
      )
