from collections import namedtuple
import os
import os.path
import shlex
import shutil
import subprocess
import sys
import tempfile
import unittest


TESTS_ROOT = os.path.realpath(os.path.dirname(__file__))
REPO_ROOT = os.path.dirname(os.path.dirname(TESTS_ROOT))

COMMAND_TIMEOUT = 300  # seconds


class CommandResult(namedtuple('CommandResult', 'exitcode stdout stderr')):
    __slots__ = ()


def run_cmd(cmd, *args, env=None, verbose=False):
    """Run a command from the repo root and capture its output."""
    argv = (cmd,) + args
    if not all(a and isinstance(a, str) for a in argv):
        raise TypeError(f'all args must be non-empty strings, got {argv}')
    if verbose:
        print(f"(tests) Execute: {' '.join(shlex.quote(a) for a in argv)}", flush=True)

    if env is not None:
        env = dict(os.environ, **env)
    proc = subprocess.run(
        argv,
        cwd=REPO_ROOT,
        env=env,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        encoding='utf-8',
        timeout=COMMAND_TIMEOUT,
    )
    return CommandResult(proc.returncode, proc.stdout, proc.stderr)


#############################
# markers

RUN_SLOW = bool(os.environ.get('PYAUTOTUNE_SLOW_TESTS'))


def mark(label, func=None):
    """Attach a label to a test function; usable as a decorator."""
    if func is None:
        return lambda func: mark(label, func)
    labels = getattr(func, '_pyautotune_test_labels', [])
    func._pyautotune_test_labels = labels + [label]
    return func


def SLOW(f):
    """Skip the test unless PYAUTOTUNE_SLOW_TESTS is set."""
    f = mark('slow', f)
    return unittest.skipUnless(RUN_SLOW, 'slow; set PYAUTOTUNE_SLOW_TESTS=1')(f)


#############################
# functional tests

class Functional:
    """A mixin for tests that touch the filesystem or run subprocesses."""

    @classmethod
    def resolve_tmp(cls, *relpath):
        try:
            tmpdir = cls._tmpdir
        except AttributeError:
            tmpdir = cls._tmpdir = tempfile.mkdtemp(prefix='pyautotune-')
            cls.addClassCleanup(shutil.rmtree, tmpdir, ignore_errors=True)
        return os.path.join(tmpdir, *relpath)

    @classmethod
    def write_tmp(cls, relname, text):
        filename = cls.resolve_tmp(relname)
        with open(filename, 'w', encoding='utf-8') as outfile:
            outfile.write(text)
        return filename

    @classmethod
    def run_module(cls, module, *args, **kwargs):
        # Unbuffered, so that interleaved output is captured in order.
        return run_cmd(sys.executable, '-u', '-m', module, *args, **kwargs)
