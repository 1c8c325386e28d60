"""
Core module: orders, exact polyhedral geometry, entropy evaluation, region builders,
channels and the covering simulator.
"""
