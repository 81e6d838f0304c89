"""
Command-line surface: commands, run records, exit codes and sweep metrics.
"""
