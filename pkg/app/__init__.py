"""
DynHeight Engine - canonical heights and dynamical Mahler measures over Q
"""
__version__ = "1.0.0"
