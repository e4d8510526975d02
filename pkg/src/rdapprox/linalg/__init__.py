"""Covariance, spectra and PCA."""
