import io
import json
import unittest

from pyautotune._trace import TraceRecord, TraceWriter, display_summary, header


class TraceWriterTests(unittest.TestCase):

    def test_csv(self):
        stream = io.StringIO()
        writer = TraceWriter(stream, 2)
        writer(1, [3, 4], 0.5, 0.5)
        writer(2, [1.25, 4], 0.1, 0.1)
        self.assertEqual(stream.getvalue(),
                         'eval_index,point_0,point_1,cost,best_cost\n'
                         '1,3,4,0.5,0.5\n'
                         '2,1.25,4,0.1,0.1\n')
        self.assertEqual(len(writer.records), 2)
        self.assertEqual(writer.last, TraceRecord(2, [1.25, 4], 0.1, 0.1))

    def test_json_lines(self):
        stream = io.StringIO()
        writer = TraceWriter(stream, 1, 'json')
        writer(1, [7], 2.0, 2.0)
        writer(2, [5], 3.0, 2.0)
        rows = [json.loads(line) for line in stream.getvalue().splitlines()]
        self.assertEqual(rows, [
            {'eval_index': 1, 'point_0': 7, 'cost': 2.0, 'best_cost': 2.0},
            {'eval_index': 2, 'point_0': 5, 'cost': 3.0, 'best_cost': 2.0},
        ])

    def test_floats_round_trip(self):
        stream = io.StringIO()
        writer = TraceWriter(stream, 1)
        writer(1, [0.1 + 0.2], 1 / 3, 1 / 3)
        row = stream.getvalue().splitlines()[1].split(',')
        self.assertEqual(float(row[1]), 0.1 + 0.2)
        self.assertEqual(float(row[2]), 1 / 3)

    def test_empty(self):
        stream = io.StringIO()
        writer = TraceWriter(stream, 3)
        self.assertIsNone(writer.last)
        self.assertEqual(stream.getvalue().strip().split(','), header(3))
        self.assertEqual(TraceWriter(io.StringIO(), 3, 'json').stream.getvalue(), '')

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            TraceWriter(io.StringIO(), 1, 'xml')


class DisplaySummaryTests(unittest.TestCase):

    def test_display(self):
        stream = io.StringIO()
        display_summary('sphere', [('Evaluations', 800), ('Final cost', 0.0)], file=stream)
        self.assertEqual(stream.getvalue(),
                         'sphere\n======\nEvaluations: 800\nFinal cost: 0.0\n\n')


if __name__ == "__main__":
    unittest.main()
