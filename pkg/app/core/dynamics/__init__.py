"""
Rational maps, periodic and preimage polynomials, orbit classification
"""
