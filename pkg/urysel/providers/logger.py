import time
import logging

# custom logging level, above CRITICAL so that it passes any handler level
PROGRESS = 101
logging.addLevelName(PROGRESS, "PROGRESS")


class BaseLogger(logging.Logger):
    """Logger reporting the progress of long loops.

    Bookkeeping, embedding and the convergence harness count their
    iterations through :meth:`progress`; the counter window set by
    :meth:`set_progress` maps a loop onto a part of the whole run.
    """
    def __init__(self, name):
        super(BaseLogger, self).__init__(name)
        self.reset()

    def set_progress(self, end):
        """Open the next counter window, ending at end %.

        :param int end: upper bound of the window in %
        """
        start = self._window[1]
        self._window = (start, int(end))

    def progress(self, perc, *args):
        """Report loop progress inside the current window.

        :param float perc: percentage done within the loop
        :param args: optional (done, total, label) of the loop
        """
        if args:
            self._counter(perc, *args)
        start, end = self._window
        value = int(start + (perc / 100.0) * (end - start))
        if self.isEnabledFor(PROGRESS):
            self._log(PROGRESS, value, None)
        else:
            self.debug("Progress value: {}%".format(value))

    def _counter(self, perc, done, total, label):
        elapsed = time.time() - self.start_time
        rate = done / elapsed if elapsed > 0 else float('inf')
        self.debug("{}: {}/{} ({:.1f}%, {:.1f}/s)".format(
            label, done, total, perc, rate
        ))
        if 0 < perc < 100:
            self.debug("{}: about {:.1f} s left".format(
                label, elapsed * (100.0 - perc) / perc
            ))

    def reset(self):
        """Restart the clock and close all counter windows."""
        self.start_time = time.time()
        self._window = (0, 0)
