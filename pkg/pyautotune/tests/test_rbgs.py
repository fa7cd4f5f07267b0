import unittest

import numpy as np

from pyautotune import rbgs
from pyautotune._domain import ConfigurationError
from pyautotune.rbgs import ChunkConfig, Grid, RedBlackSolver, TuningParams
from pyautotune.tests import SLOW


def reference_sweep(values):
    """Update black then red cells one at a time, in row-major order."""
    n = values.shape[0] - 2
    diff = 0.0
    for color in (1, 0):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if (i + j) % 2 != color:
                    continue
                new = 0.25 * (values[i - 1, j] + values[i + 1, j]
                              + values[i, j - 1] + values[i, j + 1])
                diff += abs(new - values[i, j])
                values[i, j] = new
    return diff


def random_grid(n, seed):
    rng = np.random.default_rng(seed)
    return Grid(rng.uniform(-1.0, 1.0, size=(n + 2, n + 2)))


class GridTests(unittest.TestCase):

    def test_with_boundary(self):
        grid = Grid.with_boundary(3)
        self.assertEqual(grid.n, 3)
        self.assertEqual(grid.values.shape, (5, 5))
        np.testing.assert_array_equal(grid.interior, np.zeros((3, 3)))
        self.assertTrue(np.all(grid.values[0] == 1.0))
        self.assertTrue(np.all(grid.values[:, -1] == 1.0))

    def test_invalid(self):
        for shape in [(3, 4), (2, 2), (4,)]:
            with self.subTest(shape):
                with self.assertRaises(ConfigurationError):
                    Grid(np.zeros(shape))
        with self.assertRaises(ConfigurationError):
            Grid.with_boundary(0)

    def test_copy_is_independent(self):
        grid = Grid.with_boundary(2)
        copy = grid.copy()
        copy.values[1, 1] = 5.0
        self.assertEqual(grid.values[1, 1], 0.0)


class ChunkConfigTests(unittest.TestCase):

    def test_single_chunk_for_both_colors(self):
        chunks = ChunkConfig(3)
        self.assertEqual(tuple(chunks), (3, 3))
        self.assertEqual(chunks.for_color(rbgs.BLACK), 3)

    def test_from_raw_values(self):
        with RedBlackSolver(Grid.with_boundary(8)) as solver:
            self.assertEqual(solver.chunks_for([4]), ChunkConfig(4, 4))
            chunks = solver.chunks_for([2, 7])
            self.assertEqual(chunks.for_color(rbgs.BLACK), 2)
            self.assertEqual(chunks.for_color(rbgs.RED), 7)
            self.assertEqual(solver.clamped, 0)
            with self.assertLogs('pyautotune', 'WARNING'):
                self.assertEqual(solver.chunks_for([0, 12]), ChunkConfig(1, 8))
            self.assertEqual(solver.clamped, 2)
            with self.assertRaises(ConfigurationError):
                solver.chunks_for([1, 2, 3])

    def test_invalid(self):
        for args in [(0,), (2, 0), (-1,)]:
            with self.subTest(args):
                with self.assertRaises(ConfigurationError):
                    ChunkConfig(*args)


class SweepTests(unittest.TestCase):

    def test_matches_serial_reference(self):
        for n in (16, 64):
            initial = random_grid(n, seed=n)
            expected = initial.values.copy()
            expected_diffs = [reference_sweep(expected) for _ in range(10)]
            for threads in (1, 2, 4):
                for chunk in (1, 3, n):
                    with self.subTest(n=n, threads=threads, chunk=chunk):
                        grid = initial.copy()
                        with RedBlackSolver(grid, threads) as solver:
                            diffs = [solver.sweep(ChunkConfig(chunk)) for _ in range(10)]
                        np.testing.assert_array_equal(grid.values, expected)
                        np.testing.assert_allclose(diffs, expected_diffs, rtol=1e-12)

    def test_diff_does_not_depend_on_the_schedule(self):
        initial = random_grid(20, seed=1)
        results = []
        for threads, chunks in [(1, (1, 1)), (3, (2, 5)), (4, (20, 7))]:
            grid = initial.copy()
            with RedBlackSolver(grid, threads) as solver:
                results.append([solver.sweep(ChunkConfig(*chunks)) for _ in range(5)])
        self.assertEqual(results[0], results[1])
        self.assertEqual(results[0], results[2])

    def test_two_chunk_variant(self):
        initial = random_grid(16, seed=3)
        expected = initial.values.copy()
        for _ in range(4):
            reference_sweep(expected)
        grid = initial.copy()
        for _ in range(4):
            rbgs.sweep(grid, 2, ChunkConfig(2, 5))
        np.testing.assert_array_equal(grid.values, expected)

    def test_zero_is_a_fixed_point(self):
        grid = Grid.with_boundary(8, boundary=0.0)
        self.assertEqual(rbgs.sweep(grid, 2, [3]), 0.0)
        np.testing.assert_array_equal(grid.values, np.zeros((10, 10)))

    def test_boundary_is_never_written(self):
        grid = random_grid(9, seed=4)
        before = grid.values.copy()
        rbgs.sweep(grid, 3, [2])
        np.testing.assert_array_equal(grid.values[0], before[0])
        np.testing.assert_array_equal(grid.values[-1], before[-1])
        np.testing.assert_array_equal(grid.values[:, 0], before[:, 0])
        np.testing.assert_array_equal(grid.values[:, -1], before[:, -1])

    def test_single_cell(self):
        grid = Grid.with_boundary(1)
        # The only interior cell is red.
        self.assertEqual(rbgs.sweep(grid, 1, [1]), 1.0)
        self.assertEqual(grid.values[1, 1], 1.0)

    def test_oversized_chunk_is_clamped(self):
        initial = random_grid(8, seed=6)
        expected = initial.values.copy()
        reference_sweep(expected)
        grid = initial.copy()
        with RedBlackSolver(grid, 2) as solver:
            with self.assertLogs('pyautotune', 'WARNING') as cm:
                solver.sweep(ChunkConfig(50))
            self.assertEqual(solver.clamped, 2)
            self.assertEqual(len(cm.output), 1)
        np.testing.assert_array_equal(grid.values, expected)

    def test_low_chunks_are_clamped(self):
        for chunk in (0, -3):
            with self.subTest(chunk=chunk):
                initial = random_grid(8, seed=7)
                expected = initial.values.copy()
                reference_sweep(expected)
                reference_sweep(expected)
                grid = initial.copy()
                with RedBlackSolver(grid, 2) as solver:
                    with self.assertLogs('pyautotune', 'WARNING') as cm:
                        solver.sweep([chunk])
                        solver.sweep([chunk, 2])
                    self.assertEqual(solver.clamped, 3)
                    self.assertEqual(len(cm.output), 1)
                np.testing.assert_array_equal(grid.values, expected)

    def test_functional_sweep_accepts_a_zero_chunk(self):
        grid = Grid.with_boundary(8)
        expected = grid.values.copy()
        reference_sweep(expected)
        with self.assertLogs('pyautotune', 'WARNING'):
            rbgs.sweep(grid, 2, [0])
        np.testing.assert_array_equal(grid.values, expected)

    def test_diff_is_non_increasing(self):
        grid = Grid.with_boundary(16)
        with RedBlackSolver(grid, 2) as solver:
            diffs = [solver.sweep(ChunkConfig(3)) for _ in range(60)]
        for previous, current in zip(diffs[1:], diffs[2:]):
            self.assertLessEqual(current, previous + 1e-12)


class SolveTests(unittest.TestCase):

    def test_converges_to_the_boundary_value(self):
        grid = Grid.with_boundary(16)
        result = rbgs.solve(grid, 2, ChunkConfig(4), 1e-10, 5000)
        self.assertLess(result.sweeps, 5000)
        self.assertLess(result.diff / 16 ** 2, 1e-10)
        np.testing.assert_allclose(grid.interior, np.ones((16, 16)), rtol=0, atol=1e-6)

    @SLOW
    def test_converges_to_the_boundary_value_large(self):
        grid = Grid.with_boundary(64)
        result = rbgs.solve(grid, 4, ChunkConfig(8), 1e-11, 50_000)
        self.assertLess(result.sweeps, 50_000)
        np.testing.assert_allclose(grid.interior, np.ones((64, 64)), rtol=0, atol=1e-6)

    def test_max_sweeps(self):
        grid = Grid.with_boundary(16)
        result = rbgs.solve(grid, 1, ChunkConfig(1), 1e-12, 1)
        self.assertEqual(result.sweeps, 1)
        self.assertEqual(result.chunks, (1, 1))
        self.assertGreaterEqual(result.elapsed, 0.0)
        self.assertEqual(result.target_execs, 0)

    def test_invalid(self):
        grid = Grid.with_boundary(4)
        with self.assertRaises(ConfigurationError):
            rbgs.solve(grid, 1, ChunkConfig(1), 0.0, 10)
        with self.assertRaises(ConfigurationError):
            rbgs.solve(grid, 1, ChunkConfig(1), 1e-6, 0)
        with self.assertRaises(ConfigurationError):
            rbgs.solve(grid, 0, ChunkConfig(1), 1e-6, 10)


class TunedSolveTests(unittest.TestCase):

    def test_entire_mode_spends_extra_sweeps(self):
        n = 16
        tuning = TuningParams(lower=1, upper=n, ignore=1, num_opt=4, max_iter=10)
        grid = Grid.with_boundary(n)
        result = rbgs.solve_tuned_entire(grid, 2, tuning, 1e-6, 500)
        self.assertEqual(result.target_execs, 10 * 2 * 4)
        self.assertTrue(all(1 <= c <= n for c in result.chunks))

        # Chunks never change the numbers, so the grid is the same as after
        # the same number of plain sweeps.
        expected = Grid.with_boundary(n)
        with RedBlackSolver(expected, 1) as solver:
            for _ in range(result.target_execs + result.sweeps):
                solver.sweep(ChunkConfig(1))
        np.testing.assert_array_equal(grid.values, expected.values)

    def test_single_mode_matches_the_plain_solver(self):
        n = 16
        tuning = TuningParams(lower=1, upper=n, ignore=0, num_opt=2, max_iter=5)
        tuned = Grid.with_boundary(n)
        result = rbgs.solve_tuned_single(tuned, 3, tuning, 1e-6, 2000)
        plain = Grid.with_boundary(n)
        expected = rbgs.solve(plain, 1, ChunkConfig(1), 1e-6, 2000)
        self.assertEqual(result.sweeps, expected.sweeps)
        self.assertEqual(result.diff, expected.diff)
        np.testing.assert_array_equal(tuned.values, plain.values)
        self.assertEqual(result.target_execs, 5 * 2)

    def test_single_mode_stops_with_the_solver(self):
        tuning = TuningParams(lower=1, upper=8, ignore=1, num_opt=4, max_iter=10)
        result = rbgs.solve_tuned_single(Grid.with_boundary(8), 1, tuning, 1e-6, 5)
        self.assertEqual(result.sweeps, 5)
        self.assertEqual(result.target_execs, 5)

    def test_tuning_below_one_is_clamped(self):
        tuning = TuningParams(lower=-4, upper=8, ignore=0, num_opt=4, max_iter=5, dual=True)
        with RedBlackSolver(Grid.with_boundary(8), 2) as solver:
            result = solver.solve_tuned_entire(tuning, 1e-6, 200)
            self.assertEqual(result.target_execs, 5 * 4)
            self.assertTrue(all(1 <= c <= 8 for c in result.chunks))

        result = rbgs.solve_tuned_single(Grid.with_boundary(8), 1, tuning, 1e-6, 30)
        self.assertEqual(result.sweeps, 30)
        self.assertTrue(all(1 <= c <= 8 for c in result.chunks))

    def test_dual_chunks(self):
        tuning = TuningParams(lower=1, upper=8, ignore=0, num_opt=2, max_iter=3, dual=True)
        self.assertEqual(tuning.dim, 2)
        result = rbgs.solve_tuned_entire(Grid.with_boundary(8), 2, tuning, 1e-6, 100)
        self.assertEqual(len(result.chunks), 2)
        self.assertEqual(result.target_execs, 3 * 2)

    def test_nelder_mead_tuning(self):
        tuning = TuningParams(lower=1, upper=16, ignore=1, max_iter=8, optimizer='nm',
                              nm_error=1e-3)
        session = tuning.new_session()
        self.assertEqual(session.dim, 1)
        result = rbgs.solve_tuned_entire(Grid.with_boundary(16), 1, tuning, 1e-6, 100)
        self.assertLessEqual(result.target_execs, 8 * 2)

    def test_invalid_optimizer(self):
        with self.assertRaises(ConfigurationError):
            TuningParams(optimizer='bfgs')


if __name__ == "__main__":
    unittest.main()
