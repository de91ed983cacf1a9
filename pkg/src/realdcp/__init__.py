"""Even-parabolic posets of reflection arrangements and their cohomology."""

__version__ = "0.1.0"
