"""Truly unordered probabilistic rule sets for multi-class classification.

Rules are learned with a two-phase diverse beam search, selected with an
approximate normalized maximum likelihood criterion and guided by a decision
tree surrogate score. See README.txt.
"""
