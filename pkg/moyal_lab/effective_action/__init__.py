"""One-loop divergences of the gauge field induced by a harmonic complex scalar."""
