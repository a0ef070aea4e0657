"""Exact computations around Gopakumar-Vafa invariants.

Modules: :mod:`series` (truncated Laurent series), :mod:`sl2rep`
(sl2 x sl2 characters), :mod:`k3hilb` (K3 fiber class), :mod:`gvgw`
(GV <-> GW), :mod:`grr` (determinant-line parity) and :mod:`cech`
(Z/2 gluing obstructions).
"""
__version__ = "0.1.0"
