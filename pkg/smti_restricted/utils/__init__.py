"""
Utility components for background subset evaluation
"""
