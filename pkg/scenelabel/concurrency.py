# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Run independent units of work on a bounded number of threads."""

__all__ = [
    'ConcurrentMap',
    'map_concurrently',
    ]

from queue import Queue
import sys
import threading


class ConcurrentMap:
    """Apply a function to items on worker threads, preserving order.

    Items are dealt round-robin to at most ``threads`` workers. Each worker
    reports ``(index, outcome)`` pairs through a queue; the caller joins the
    workers and puts results back into input order, so the result never
    depends on the number of threads or on scheduling.
    """

    def __init__(self, function, threads=1):
        """Create a ConcurrentMap.

        :param function: A callable taking one item.
        :param threads: The maximum number of worker threads. Values below
            2 run everything on the calling thread.
        """
        self.function = function
        self.threads = max(1, int(threads or 1))

    def __call__(self, items):
        items = list(items)
        if self.threads == 1 or len(items) < 2:
            return [self.function(item) for item in items]
        workers = min(self.threads, len(items))
        queue = Queue()
        threads = []
        for number in range(workers):
            share = [(index, items[index])
                     for index in range(number, len(items), workers)]
            worker = threading.Thread(
                target=self._run_share, args=(share, queue))
            threads.append(worker)
            worker.start()
        outcomes = {}
        try:
            while len(outcomes) < len(items):
                index, outcome = queue.get()
                outcomes[index] = outcome
        finally:
            for worker in threads:
                worker.join()
        results = []
        for index in range(len(items)):
            failed, value = outcomes[index]
            if failed:
                raise value[1].with_traceback(value[2])
            results.append(value)
        return results

    def _run_share(self, share, queue):
        for index, item in share:
            try:
                outcome = (False, self.function(item))
            except Exception:
                # Re-raised on the calling thread, in input order.
                outcome = (True, sys.exc_info())
            queue.put((index, outcome))


def map_concurrently(function, items, threads=1):
    """Return ``[function(item) for item in items]`` using worker threads.

    :param threads: The maximum number of worker threads.
    :raises: The first (in input order) exception raised by ``function``.
    """
    return ConcurrentMap(function, threads)(items)
