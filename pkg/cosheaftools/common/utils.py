import json
import time
import logging

log = logging.getLogger(__name__)

TIME_UNITS = (('s', 1.0), ('ms', 1e-3), ('us', 1e-6), ('ns', 1e-9))


def split_members(astr):
    """
    Split a whitespace or semicolon separated list of element identifiers.
    Commas are part of simplex names so they are never treated as separators.
    >>> split_members('a,b a ; b')
    ['a,b', 'a', 'b']
    >>> split_members('')
    []
    """
    return [item for item in astr.replace(';', ' ').split() if item]


def time_delta_string(start_time, end_time):
    """Format the time elapsed between two time.time() readings.
    >>> time_delta_string(50e-3, 100e-3)
    '50.0ms'
    """
    return str(seconds_to_timestring(end_time-start_time))


def seconds_to_timestring(duration):
    """
    Return a formatted time-string for the given duration in seconds.
    The unit is the largest of s, ms, us and ns that keeps the value >= 1.
    >>> seconds_to_timestring(1.0)
    '1.0s'
    >>> seconds_to_timestring(100e-3)
    '100.0ms'
    >>> seconds_to_timestring(500e-6)
    '500.0us'
    >>> seconds_to_timestring(453e-9)
    '453.0ns'
    """
    for unit, scale in TIME_UNITS:
        if duration >= scale or unit == 'ns':
            return '{0}{1}'.format(round(duration / scale, 6), unit)


class Timer:
    """Context manager that logs how long a named stage took."""
    def __init__(self, name, logger=log, level=logging.INFO):
        self.name = name
        self.logger = logger
        self.level = level
        self.start_time = None

    def __enter__(self):
        self.start_time = time.time()
        self.logger.log(self.level, 'Running {0}...'.format(self.name))
        return self

    def __exit__(self, exc_type, exc_value, tb):
        if exc_type is None:
            self.logger.log(
                self.level,
                '...{0} finished in {1}'.format(
                    self.name,
                    time_delta_string(self.start_time, time.time())
                )
            )
        return False


def dump_json(record):
    """Serialise a report record deterministically (sorted keys, UTF-8)."""
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


if __name__ == '__main__':
    import doctest
    doctest.testmod()
