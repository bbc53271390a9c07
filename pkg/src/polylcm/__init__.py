"""Least common multiples of polynomial values over number fields, with the finite-field
splitting statistics and random-polynomial experiments that go with them."""

__version__ = "0.1.0"
