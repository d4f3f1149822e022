"""Thread-safe LRU cache used to memoize reference grids and quadrature rules.

Convergence sweeps may build discretization contexts from several threads;
the reference node sets and quadrature rules they need depend only on a
small integer key, so they are computed once and shared.
"""

import threading
from collections import OrderedDict
from typing import Any, Callable, Hashable, Tuple


class LRUCache:
    """Least Recently Used cache with a fixed capacity.

    Entries are kept in usage order, most recent last; once capacity is
    exceeded the first entry is evicted. All public methods take a reentrant
    lock.
    """

    def __init__(self, capacity: int):
        """
        Parameters:
            capacity (int): Maximum number of entries, at least 1.

        Raises:
            ValueError: If capacity is smaller than 1.
        """
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        self.capacity = capacity
        self.entries = OrderedDict()
        self.lock = threading.RLock()

    def size(self) -> int:
        return len(self.entries)

    def get(self, key: Hashable) -> Tuple[Any, bool]:
        """
        Look up a key and mark it as recently used.

        Returns:
            tuple: (value, True) if present; (None, False) otherwise.
        """
        with self.lock:
            if key not in self.entries:
                return (None, False)
            self.entries.move_to_end(key)
            return (self.entries[key], True)

    def set(self, key: Hashable, value: Any) -> None:
        """Store a value, evicting the least recently used entry when full."""
        with self.lock:
            self.entries[key] = value
            self.entries.move_to_end(key)
            if len(self.entries) > self.capacity:
                self.entries.popitem(last=False)

    def get_or_create(self, key: Hashable, factory: Callable[[], Any]) -> Any:
        """
        Return the cached value for key, building it with factory() on a miss.

        Concurrency:
            The factory runs under the lock, so it is called at most once per key
            while the entry stays cached.
        """
        with self.lock:
            value, found = self.get(key)
            if found:
                return value
            value = factory()
            self.set(key, value)
            return value
