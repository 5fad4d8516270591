"""Edge-deletion interdiction for bootstrap percolation."""

__version__ = "0.1.0"
