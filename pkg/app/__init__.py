"""
GroupcastBC: exact rate-region computation for groupcast messages over broadcast channels
"""

__version__ = "0.1.0"
