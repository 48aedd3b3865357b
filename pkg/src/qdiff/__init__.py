"""Exact q-symmetrization, star products and quantized derivatives for quadratic algebras."""
