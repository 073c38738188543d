from setuptools import setup

setup(name='OpenMAG',
  version= '1.0.0',
  description='Python libraries for the magnitude of finite metric spaces and convex bodies, intrinsic volumes and convex geometry checks.',
  packages =['OpenMAG'],
  install_requires=['numpy', 'scipy', 'matplotlib', 'pandas'],
  entry_points={'console_scripts': ['openmag = OpenMAG.cli:main']},
  keywords = ['magnitude', 'maximum diversity', 'intrinsic volumes', 'zonotopes', 'Mahler volume product'])




'''
$ python setup.py install
'''
