"""Numerical toolkit for Campanato-type oscillation in ball Banach function spaces."""
