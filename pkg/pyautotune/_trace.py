__all__ = [
    'TraceRecord',
    'TraceWriter',
    'FORMATS',
    'display_summary',
]


from collections import namedtuple
import csv
import json


FORMATS = ('csv', 'json')


class TraceRecord(namedtuple('TraceRecord', 'eval_index point cost best_cost')):
    """One cost fed to the optimizer."""
    __slots__ = ()

    def as_row(self):
        row = {'eval_index': self.eval_index}
        for i, value in enumerate(self.point):
            row[f'point_{i}'] = value
        row['cost'] = self.cost
        row['best_cost'] = self.best_cost
        return row


def header(dim):
    return ['eval_index', *(f'point_{i}' for i in range(dim)), 'cost', 'best_cost']


class TraceWriter:
    """Writes trace records as CSV (with a header) or JSON lines.

    An instance is a valid trace sink for Autotuning.
    """

    def __init__(self, stream, dim, fmt='csv'):
        if fmt not in FORMATS:
            raise ValueError(f'unsupported trace format {fmt!r}')
        self.stream = stream
        self.dim = dim
        self.fmt = fmt
        self.records = []
        self._writer = None
        if fmt == 'csv':
            self._writer = csv.writer(stream, lineterminator='\n')
            self._writer.writerow(header(dim))

    def __call__(self, eval_index, point, cost, best_cost):
        self.write(TraceRecord(eval_index, list(point), cost, best_cost))

    def write(self, record):
        self.records.append(record)
        row = record.as_row()
        if self._writer is not None:
            self._writer.writerow([_format_value(v) for v in row.values()])
        else:
            self.stream.write(json.dumps(row))
            self.stream.write('\n')

    @property
    def last(self):
        return self.records[-1] if self.records else None


def _format_value(value):
    # repr() round-trips floats exactly, which keeps traces diffable.
    if isinstance(value, float):
        return repr(value)
    return str(value)


def display_summary(title, items, file=None):
    print(title, file=file)
    print("=" * len(title), file=file)
    for key, value in items:
        print("%s: %s" % (key, value), file=file)
    print(file=file)
