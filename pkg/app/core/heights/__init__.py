"""
Local and global canonical heights
"""
