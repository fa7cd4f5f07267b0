import os.path
import textwrap
import unittest

from pyautotune import _config
from pyautotune import tests


class ParseConfigTests(unittest.TestCase):

    def test_all_sections(self):
        text = textwrap.dedent('''
            [tuning]
            optimizer = "nm"
            lower = 1
            upper = 64.0
            ignore = 2
            num_opt = 3
            max_iter = 12
            nm_error = 1e-4
            seed = 7

            [bench]
            function = "rastrigin"

            [rbgs]
            threads = 2
            n = 32
            tol = 1e-8
            chunks_mode = "dual"
            tuned_mode = "single"

            [output]
            output = "json"
            output_path = "~/trace.jsonl"
        ''')
        defaults = _config.parse_config(text)
        self.assertEqual(defaults['optimizer'], 'nm')
        self.assertEqual(defaults['lower'], 1.0)
        self.assertIsInstance(defaults['lower'], float)
        self.assertEqual(defaults['max_iter'], 12)
        self.assertEqual(defaults['function'], 'rastrigin')
        self.assertEqual(defaults['chunks_mode'], 'dual')
        self.assertEqual(defaults['output_path'], os.path.expanduser('~/trace.jsonl'))

    def test_empty(self):
        self.assertEqual(_config.parse_config(''), {})

    def test_invalid(self):
        texts = [
            '[unknown]\nx = 1\n',
            '[tuning]\nspeed = 1\n',
            '[tuning]\nignore = 1.5\n',
            '[tuning]\nignore = true\n',
            '[tuning]\noptimizer = 3\n',
            'tuning = 1\n',
            '[tuning\n',
        ]
        for text in texts:
            with self.subTest(text):
                with self.assertRaises(ValueError):
                    _config.parse_config(text, 'run.toml')


class LoadConfigTests(tests.Functional, unittest.TestCase):

    def test_load(self):
        filename = self.write_tmp('run.toml', '[rbgs]\nthreads = 3\n')
        self.assertEqual(_config.load_config(filename), {'threads': 3})

    def test_missing(self):
        with self.assertRaises(OSError):
            _config.load_config(self.resolve_tmp('missing.toml'))


if __name__ == "__main__":
    unittest.main()
