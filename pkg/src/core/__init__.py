"""
Core resistance-distance modules.
"""
