"""
Unit tests for hypeval

Exact algebra, series engine, coefficient variants, transformations,
recurrences and certificates, extensions, reports and the CLI.
"""
