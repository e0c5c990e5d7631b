"""Ribbon graphs of the φ⁴ model: faces, genus, broken faces, orientability, power counting."""
