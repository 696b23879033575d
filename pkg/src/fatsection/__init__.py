"""Face correspondence for invariant convex sets and their fat-section slices."""

__version__ = "0.1.0"
