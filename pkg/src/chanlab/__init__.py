"""Online transaction acceptance on a single payment channel."""
