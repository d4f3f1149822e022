"""Run metrics for the command-line front end.

RunMetrics counts the expensive operations a command performs (evolution
matrices built, eigenvalue solves, oracle calls) together with failures and
wall time, and reports them as a dict that is written to ``report.json``
next to the CSV artifacts.
"""

from datetime import datetime


class RunMetrics:
    """
    Counters and timings for one invocation of the command-line tool.

    The class assumes single-threaded usage: commands record metrics from the
    dispatching thread only, after parallel work has been joined.
    """

    def __init__(self):
        """
        Initializes all counters to zero and records the start time.

        No parameters.
        """
        self.builds = 0
        self.eigen_solves = 0
        self.oracle_calls = 0
        self.failures = 0
        self.start_time = datetime.now()
        self.timings = {}

    def record_build(self, count=1):
        """
        Counts evolution matrices built.

        Parameters:
            count (int): Number of matrices, 1 by default.
        """
        self.builds += count

    def record_eig(self, count=1):
        self.eigen_solves += count

    def record_oracle_call(self):
        self.oracle_calls += 1

    def record_failure(self, count=1):
        self.failures += count

    def record_timing(self, command, seconds):
        """
        Stores the wall time of a command.

        Parameters:
            command (str): Command name.
            seconds (float): Elapsed wall time.
        """
        self.timings[command] = seconds

    def report(self):
        """
        Current metrics as a JSON-ready dict.

        Returns:
            dict: With keys 'start_time' (ISO string), 'builds',
                'eigen_solves', 'oracle_calls', 'failures' and 'timings'
                (command name to seconds).
        """
        return {
            "start_time": self.start_time.isoformat(),
            "builds": self.builds,
            "eigen_solves": self.eigen_solves,
            "oracle_calls": self.oracle_calls,
            "failures": self.failures,
            "timings": dict(self.timings),
        }
