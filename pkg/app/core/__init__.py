"""
Core calculation engine
"""
