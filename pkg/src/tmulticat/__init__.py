"""Generalized multicategories over cartesian monads on finite sets."""
