"""
Integration tests for the hypeval command line
"""
