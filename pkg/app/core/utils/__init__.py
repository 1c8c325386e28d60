"""
Shared plumbing: exceptions and exit codes, JSON I/O and packaged fixtures.
"""
