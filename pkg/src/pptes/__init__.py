"""Three-qubit rank-four PPT entangled states: typing, product vectors and UPB constructibility."""

__version__ = "0.1.0"
