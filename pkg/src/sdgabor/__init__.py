"""Gabor transforms on semi-direct product groups, evaluated by quadrature."""

__version__ = "0.1.0"
