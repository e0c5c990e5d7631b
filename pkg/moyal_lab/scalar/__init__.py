"""Harmonic scalar model: action, propagators, vacua, duality."""
