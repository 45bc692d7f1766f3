"""Memoized derivation of overlay structures from base trees.

A derived structure is built at most once per base object; a second request
returns the cached instance.  The cache lives beside the base object (weakly
keyed) so base types never grow fields that mention overlay types.
"""

from __future__ import annotations

import functools
import threading
import weakref
from typing import Callable, Generic, TypeVar

B = TypeVar("B")
D = TypeVar("D")


class derived(Generic[B, D]):
    """Decorator turning ``fn(base) -> overlay`` into a memoized attribute.

    ``constructions`` counts how many times the body actually ran, which is
    what tests and the benchmark use to observe cache hits and cold starts.
    """

    def __init__(self, fn: Callable[[B], D]) -> None:
        functools.update_wrapper(self, fn)
        self._fn = fn
        self._cache: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()
        self._lock = threading.Lock()
        self.constructions = 0

    def __call__(self, base: B) -> D:
        try:
            return self._cache[base]
        except KeyError:
            pass
        with self._lock:
            if base in self._cache:
                return self._cache[base]
            self.constructions += 1
            value = self._fn(base)
            self._cache[base] = value
            return value

    def is_cached(self, base: B) -> bool:
        return base in self._cache

    def cache_clear(self) -> None:
        with self._lock:
            self._cache = weakref.WeakKeyDictionary()
