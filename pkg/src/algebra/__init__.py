"""Exact algebra: Laurent polynomials, the shuffle algebra, the positive quantum group and phi."""
