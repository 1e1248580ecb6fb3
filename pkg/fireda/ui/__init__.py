"""Terminal report browser."""
