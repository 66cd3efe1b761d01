"""
banach-qm: quantum mechanics on the finite-dimensional Banach spaces l_p^n
"""

__version__ = "1.0.0"
