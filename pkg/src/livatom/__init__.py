"""First-order Lorentz-violation corrections to atomic spectra and coefficient bounds."""

__version__ = "0.1.0"
