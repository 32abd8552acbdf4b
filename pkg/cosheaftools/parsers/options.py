"""
Options parser for the cosheaftools command line.

The Options class provides access to the user configuration file with error
checking and file-modification checking. The file lives at
``~/.cosheaftoolsconfig`` unless the COSHEAFTOOLS_CONFIG environment variable
names another path.
"""
import configparser
import os
import logging
import traceback
import hashlib
from collections import OrderedDict
from os.path import expanduser

log = logging.getLogger(__name__)

CONFIG_ENV = 'COSHEAFTOOLS_CONFIG'
FUZZ_COUNT_ENV = 'COSHEAFTOOLS_FUZZ_COUNT'


def default_options_path():
    return os.environ.get(
        CONFIG_ENV, os.path.join(expanduser('~'), '.cosheaftoolsconfig')
    )


def positive_int(value):
    value = int(value)
    if value < 1:
        raise ValueError('Expected a positive integer, got {0}'.format(value))
    return value


def parse_flag(value):
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


class Options:
    """
    An Options instance provides access to an INI based configuration file.

    If no configuration file is present one is generated from
    CONFIG_DEFAULTS.
    """

    CONFIG_DEFAULTS = OrderedDict([
        ('limits', OrderedDict([
            ('open_cap', '4096'),
        ])),
        ('derived', OrderedDict([
            ('extra_depth', '2'),
        ])),
        ('crosscheck', OrderedDict([
            ('parallel', 'false'),
        ])),
        ('fuzz', OrderedDict([
            ('count', '200'),
            ('seed', '0'),
            ('max_vertices', '6'),
            ('max_dimension', '3'),
            ('max_rank', '3'),
        ])),
    ])

    # Typed reading of each setting; anything else is read with int
    CONVERTERS = {
        ('limits', 'open_cap'): positive_int,
        ('derived', 'extra_depth'): positive_int,
        ('crosscheck', 'parallel'): parse_flag,
    }

    def __init__(self, path=None):
        self.options_path = path if path is not None else default_options_path()
        self.options_md5 = None
        log.debug('Initialising options parser')
        self._options = configparser.ConfigParser()
        self.startup()

    def startup(self):
        """
        Load the configuration file and store its MD5 sum so that changes
        can be detected at runtime.
        """
        self._options = configparser.ConfigParser()
        try:
            log.debug('Loading options file...')
            self._loadOptionsFile()
            log.debug('...done loading options file')
        except configparser.Error:
            log.error(
                'The options file is badly formatted, parsing failed with '
                'the following error:'
            )
            log.error(traceback.format_exc())

    def _loadOptionsFile(self):
        if not os.path.exists(self.options_path):
            log.debug(
                'The options file could not be found, a default options '
                'file will be created...'
            )
            defaults = configparser.ConfigParser()
            defaults.read_dict(self.CONFIG_DEFAULTS)
            try:
                with open(self.options_path, 'w') as cf:
                    defaults.write(cf)
            except EnvironmentError:
                log.warning(
                    'Could not write default options to {0}'.format(
                        self.options_path
                    )
                )
                self._options = defaults
                return
            log.debug('... finished creating default options file')
        with open(self.options_path, 'rb') as f:
            self.options_md5 = hashlib.md5(f.read()).hexdigest()
        self._options.read(self.options_path)

    def refresh(self):
        try:
            with open(self.options_path, 'rb') as f:
                current_md5 = hashlib.md5(f.read()).hexdigest()
            if self.options_md5 != current_md5:
                self.startup()
        except EnvironmentError:
            pass

    def getOptionsPath(self):
        return os.path.abspath(os.path.normpath(self.options_path))

    def converter(self, section, key):
        return self.CONVERTERS.get((section, key), int)

    def is_valid(self, section, key, value):
        try:
            self.converter(section, key)(value)
        except ValueError:
            return False
        return True

    def _get(self, section, key):
        """Read a value, falling back to CONFIG_DEFAULTS with a warning when
        it is missing or malformed."""
        self.refresh()
        convert = self.converter(section, key)
        default = self.CONFIG_DEFAULTS[section][key]
        try:
            return convert(self._options.get(section, key))
        except (configparser.Error, ValueError):
            log.warning(
                'Using default {0}.{1} = {2}'.format(section, key, default)
            )
            return convert(default)

    def get_open_cap(self):
        return self._get('limits', 'open_cap')

    def get_extra_depth(self):
        """Derived resolution depth beyond the dimension, at least 1."""
        return self._get('derived', 'extra_depth')

    def get_parallel(self):
        return self._get('crosscheck', 'parallel')

    def get_fuzz_settings(self):
        """Fuzz corpus settings; COSHEAFTOOLS_FUZZ_COUNT overrides count."""
        settings = {
            key: self._get('fuzz', key)
            for key in self.CONFIG_DEFAULTS['fuzz']
        }
        override = os.environ.get(FUZZ_COUNT_ENV)
        if override:
            try:
                settings['count'] = int(override)
            except ValueError:
                log.warning(
                    'Ignoring non-integer {0}={1}'.format(
                        FUZZ_COUNT_ENV, override
                    )
                )
        return settings

    def as_dict(self):
        self.refresh()
        return OrderedDict(
            (section, OrderedDict(
                (key, self._options.get(section, key, fallback=value))
                for key, value in values.items()
            ))
            for section, values in self.CONFIG_DEFAULTS.items()
        )
