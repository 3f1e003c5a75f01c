"""Numerical checks of KZ and dynamical operator families, their duality and integral solutions."""
