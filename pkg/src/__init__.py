"""
lstar-lab - parser, semantics, tableaux prover and checker for L* arithmetic
"""

__version__ = "0.1.0"
__description__ = "L* generalized arithmetic: Delta0 semantics, tableaux proofs, enrichment and self-justification experiments"
