"""recomplex: recurrent direction systems, walls, and small-cancellation
diagrams on metrized polygonal 2-complexes, in exact arithmetic."""

__version__ = "0.1.0"
