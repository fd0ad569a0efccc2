# Automatically generated by setup.py
__version__ = '0.1.0'
real_version = '0.1.0-nogit'
