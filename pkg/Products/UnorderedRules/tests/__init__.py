"""UnorderedRules test package.
"""
