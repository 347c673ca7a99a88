"""Demo domain model."""

import functools


class Tracked(type):
    pass


@functools.total_ordering
class Inventory(metaclass=Tracked):
    __slots__ = ("items",)

    def __init__(self):
        self.items = []

    def add(self, item):
        self.items.append(item)

    def __eq__(self, other):
        return len(self.items) == len(other.items)

    def __lt__(self, other):
        return len(self.items) < len(other.items)

    def walk(self):
        yield from self.items
