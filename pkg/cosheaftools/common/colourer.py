import logging
import sys
import os

try:
    # colorama is only needed for colour output on Windows consoles
    import colorama
except ImportError:
    colorama = None

# ANSI colour numbers 0-7; the second name of each pair is the bold variant.
COLOURS = (
    ('black', 'darkgray'),
    ('darkred', 'red'),
    ('darkgreen', 'green'),
    ('brown', 'yellow'),
    ('darkblue', 'blue'),
    ('purple', 'fuchsia'),
    ('turquoise', 'teal'),
    ('lightgray', 'white'),
)

EFFECTS = {
    'reset': '\x1b[39;49;00m',
    'bold': '\x1b[01m',
    'faint': '\x1b[02m',
    'underline': '\x1b[04m',
}


def _codes(base):
    codes = {}
    for number, (plain, bright) in enumerate(COLOURS, start=base):
        codes[plain] = '\x1b[{0}m'.format(number)
        codes[bright] = '\x1b[{0};01m'.format(number)
    return codes


FOREGROUND = _codes(30)
BACKGROUND = _codes(40)

# Off until colour_terminal() finds a capable stream.
_enabled = False


def colour_terminal(stream=None):
    """
    Decide whether *stream* (default stderr) can display ANSI colours and
    enable colourise() accordingly. Returns the decision.
    """
    global _enabled
    stream = stream if stream is not None else sys.stderr
    if sys.platform == 'win32':
        if colorama is None:
            _enabled = False
            return _enabled
        colorama.init()
    if os.environ.get('NO_COLOR') is not None:
        _enabled = False
    elif not hasattr(stream, 'isatty') or not stream.isatty():
        _enabled = False
    elif 'COLORTERM' in os.environ:
        _enabled = True
    else:
        term = os.environ.get('TERM', 'dumb').lower()
        _enabled = term in ('xterm', 'linux') or 'color' in term
    return _enabled


def colourise(text, fg=None, bg=None, fn=None):
    if not _enabled:
        return text
    return (
        FOREGROUND.get(fg, '') +
        BACKGROUND.get(bg, '') +
        EFFECTS.get(fn, '') +
        text +
        EFFECTS['reset']
    )


def yellow(text):
    return colourise(text, fg='yellow')


def green(text):
    return colourise(text, fg='green')


def red(text):
    return colourise(text, fg='red')


def darkgray(text):
    return colourise(text, fg='darkgray')


class ColouredStreamHandler(logging.StreamHandler):
    """A logging.StreamHandler that colours each record by its level when
    the terminal supports it."""

    _levels = {
        'INFO': ('green', ''),
        'DEBUG': ('teal', ''),
        'WARNING': ('yellow', ''),
        'ERROR': ('red', ''),
        'CRITICAL': ('white', 'red'),
    }

    @staticmethod
    def add_colour(msg, levelname):
        if levelname in ColouredStreamHandler._levels:
            fg, bg = ColouredStreamHandler._levels[levelname]
            msg = colourise(msg, fg=fg, bg=bg)
        return msg

    def emit(self, record):
        try:
            msg = ColouredStreamHandler.add_colour(
                self.format(record),
                record.levelname
            )
            self.stream.write(msg + self.terminator)
            self.flush()
        except Exception:
            self.handleError(record)
