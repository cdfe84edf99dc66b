"""Multiple zeta values, regularization at non-positive indices and the KZ associator."""
__version__ = "0.1.0"
