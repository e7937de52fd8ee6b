"""
Exact modular-form bases on Gamma_0(24) and representation numbers of
octonary quadratic forms built from squares and x^2 + xy + y^2.
"""
