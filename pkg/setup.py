import os
import re
import subprocess
import sys
from setuptools import find_packages, setup, Command

root = os.path.dirname(__file__)
VERSION_PY_PATH = os.path.join(root, 'cosheaftools', 'core', '_version.py')
VERSION_PY = """
# This file was generated by running 'setup.py version'
# Any edits you make to this file will be lost!

__version__ = '{0}'
"""
# Tags read vMAJOR.MINOR; git describe appends -COMMITS-gHASH past a tag.
DESCRIBE_PATTERN = re.compile(r'v(\d+)\.(\d+)(?:-(\d+)-)?')


def describe_to_version(description):
    """Turn `git describe` output into MAJOR.MINOR.COMMITS (0.0.0 if no tag)."""
    match = DESCRIBE_PATTERN.search(description)
    if match is None:
        return '0.0.0'
    major, minor, commits = match.groups()
    return '{0}.{1}.{2}'.format(major, minor, commits or 0)


def writeGitVersion():
    if not os.path.isdir(os.path.join(root or '.', '.git')):
        print('This is not a GIT repository')
        return
    try:
        result = subprocess.run(
            ['git', 'describe', '--tags', '--dirty', '--always'],
            stdout=subprocess.PIPE,
            cwd=root or '.',
        )
    except EnvironmentError:
        result = None
    if result is None or result.returncode != 0:
        print('Unable to run git, leaving {0} alone.'.format(VERSION_PY_PATH))
        return
    description = result.stdout.decode('utf-8').strip()
    with open(VERSION_PY_PATH, 'w') as f:
        f.write(VERSION_PY.format(describe_to_version(description)))
    print('Set {0} from {1}'.format(VERSION_PY_PATH, description))


def getVersion():
    try:
        with open(VERSION_PY_PATH) as f:
            match = re.search(r"__version__ = '([^']+)'", f.read())
    except EnvironmentError:
        return None
    return match.group(1) if match else None


class Version(Command):
    description = 'update _version.py from the Git repository'
    user_options = []
    boolean_options = []

    def initialize_options(self):
        pass

    def finalize_options(self):
        pass

    def run(self):
        writeGitVersion()
        print('Version is now', getVersion())


requires = []

extras_require = {
    # colour output on Windows consoles
    ':sys_platform=="win32"': ['colorama'],
    'test': ['hypothesis'],
}

if sys.platform == 'win32':
    requires.append('colorama')

setup(
    name="CosheafTools",
    version=getVersion(),
    description=(
        "CosheafTools computes cosheaf homology over finite spaces with "
        "exact integer arithmetic"
    ),
    zip_safe=False,
    include_package_data=True,
    platforms='any',
    packages=find_packages(exclude=['tests']),
    python_requires='>=3.7',
    entry_points={
        'console_scripts': [
            'cosheaftools=cosheaftools.cosheaftools_main:main',
        ],
    },
    license="Apache 2.0",
    cmdclass={"version": Version},
    extras_require=extras_require,
    install_requires=requires,
    tests_require=['hypothesis'],
    test_suite='tests',
)
