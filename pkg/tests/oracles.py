"""Frozen oracle values, produced by ``naive.py`` (independent carryless GF(2^n) counting)."""

# y^2 + y = x^3 over F_(4^m), m = 1..6
HERMITIAN_F4_TOTALS = [9, 9, 81, 225, 1089, 3969]
HERMITIAN_F4_L = (1, 4, 4)

# y^2 + y = x^5 over F_(16^m), m = 1..4; m = 5, 6 from the L-polynomial
GENUS2_F16_TOTALS = [33, 193, 4353, 64513]
GENUS2_F16_L = (1, 16, 96, 256, 256)

# y^2 + y = x^5 over F_(2^m), m = 1..8
GENUS2_F2_TOTALS = [3, 5, 9, 33, 33, 65, 129, 193]
GENUS2_F2_L = (1, 0, 0, 0, 4)
