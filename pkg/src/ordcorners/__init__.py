"""Exact combinatorics of manifolds with ordered and fibered corners."""
