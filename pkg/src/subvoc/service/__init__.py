"""HTTP service exposing the toolkit's request-sized operations."""
