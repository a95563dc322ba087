"""
Model components: instances, restrictions, matchings, master lists and formulas
"""
