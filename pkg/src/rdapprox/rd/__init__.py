"""Gaussian rate-distortion functions and their approximations."""
