
# This file was generated by running 'setup.py version'
# Any edits you make to this file will be lost!

__version__ = '0.1.0'
