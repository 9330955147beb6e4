"""Affine homogeneous hypersurface verification lab."""
__version__ = "0.1.0"
