"""Low-bandwidth subsea mission command link and vehicle simulation."""

__version__ = "0.1.0"
