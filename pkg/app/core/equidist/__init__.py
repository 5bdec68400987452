"""
Dynamical Mahler measures and equidistribution averages
"""
