"""Darboux partners of the PT-symmetric Scarf II potential."""
