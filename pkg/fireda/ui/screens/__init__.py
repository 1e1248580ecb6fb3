"""Report browser screens."""
