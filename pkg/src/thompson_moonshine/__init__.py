"""Thompson moonshine: McKay-Thompson series of the weight one-half form F_3."""

__version__ = "0.1.0"
