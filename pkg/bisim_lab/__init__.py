"""Bisim Lab - Instrumented Partition Refinement for Bisimulation"""

__version__ = "1.0.0"
