"""Dynamic planar graph isomorphism engine."""
