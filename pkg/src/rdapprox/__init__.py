"""Gaussian rate-distortion approximation and AR-ReduNet."""

from .constants import PACKAGE_VERSION

__all__ = ["PACKAGE_VERSION"]
