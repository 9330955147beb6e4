"""Published bases, transforms and hypersurfaces."""
