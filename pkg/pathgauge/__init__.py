"""pathgauge: path-norm toolkit for DAG ReLU networks."""

__version__ = "0.1.0"
