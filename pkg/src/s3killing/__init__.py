"""Killing tensors on S^3 through their algebraic curvature tensors."""
