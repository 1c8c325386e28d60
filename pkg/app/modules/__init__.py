"""
Command-line front end: verb handlers, reports and packaged demos.
"""
