"""Group-theoretic computation of Hasse norm principle obstructions."""

__version__ = "0.1.0"
