"""Desk-scale laboratory for quantum tamper detection.

Subpackages cover: exact prime-field arithmetic and the polynomial-tag
qudit code (`field`, `qamd`), generalized Pauli words (`pauli`),
symmetric-group combinatorics (`perm`), exact unitary Weingarten calculus
(`weingarten`), reproducible Haar sampling (`haar`), Haar-average moment
machinery (`moments`), and end-to-end tampering experiments (`tamper`).
"""

__version__ = "0.1.0"
