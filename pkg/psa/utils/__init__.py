"""
Utilities package.

Logging setup and parsing of CLI problem specs, weights and ranges.
"""
