'''
Verification report: one row per comparison, a printable table with a
summary block, a CSV file and the process exit code.
'''

import csv
import io
from collections import namedtuple

import numpy as np

columns = ('task', 'point_index', 'coords', 'closed_form', 'oracle',
           'abs_diff', 'pass')

# status values of a row; the last three make a run fail
statuses = ('pass', 'oracle-only', 'fail', 'violation', 'degenerate')
failing = ('fail', 'violation', 'degenerate')

Row = namedtuple('Row', 'task point_index coords closed_form oracle '
                 'abs_diff status')


def _number(x):
    return '%.17g' % x


def _coords(coords):
    return ' '.join(_number(x) for x in coords)


class VerificationReport(object):
    """
    Rows of a sweep sorted by (task, point index), plus the settings
    that produced them (``header``, printed first in the table).
    """

    def __init__(self, rows, header=None):
        self.rows = sorted(rows, key=lambda r: (r.task, r.point_index))
        self.header = header or {}

    def __len__(self):
        return len(self.rows)

    def tasks(self):
        return sorted(set(r.task for r in self.rows))

    def count(self, status):
        return sum(1 for r in self.rows if r.status == status)

    def worst(self, task):
        """Largest abs_diff among the finite diffs of ``task`` (nan if none)."""
        diffs = [r.abs_diff for r in self.rows
                 if r.task == task and np.isfinite(r.abs_diff)]
        return max(diffs) if diffs else float('nan')

    def summary(self):
        """List of (task, rows, worst diff, failures, violations, degenerate)."""
        out = []
        for task in self.tasks():
            rows = [r for r in self.rows if r.task == task]
            out.append((task, len(rows), self.worst(task),
                        sum(1 for r in rows if r.status == 'fail'),
                        sum(1 for r in rows if r.status == 'violation'),
                        sum(1 for r in rows if r.status == 'degenerate')))
        return out

    def exit_code(self):
        return 1 if any(r.status in failing for r in self.rows) else 0

    def csv_text(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(columns)
        for r in self.rows:
            writer.writerow((r.task, r.point_index, _coords(r.coords),
                             _number(r.closed_form), _number(r.oracle),
                             _number(r.abs_diff), r.status))
        return buffer.getvalue()

    def write_csv(self, path):
        with open(path, 'w', newline='') as f:
            f.write(self.csv_text())

    def format_table(self, rows=True):
        lines = ['%s = %s' % (key, self.header[key])
                 for key in sorted(self.header)]
        if rows:
            lines.append('')
            lines.append('%-28s %5s %24s %24s %10s  %s' %
                         ('task', 'point', 'closed_form', 'oracle',
                          'abs_diff', 'pass'))
            for r in self.rows:
                lines.append('%-28s %5d %24.16g %24.16g %10.3e  %s' %
                             (r.task, r.point_index, r.closed_form, r.oracle,
                              r.abs_diff, r.status))
        lines.append('')
        lines.append('%-28s %5s %10s %5s %9s %10s' %
                     ('summary', 'rows', 'worst', 'fail', 'violation',
                      'degenerate'))
        for task, n, worst, fail, violation, degenerate in self.summary():
            lines.append('%-28s %5d %10.3e %5d %9d %10d' %
                         (task, n, worst, fail, violation, degenerate))
        return '\n'.join(lines)

    def __str__(self):
        return self.format_table()
