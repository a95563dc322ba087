"""
Controller components: the command-line entry point
"""
