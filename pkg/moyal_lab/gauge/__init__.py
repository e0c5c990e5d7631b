"""Induced gauge model: action forms, equation of motion, vacuum sequences and profiles."""
