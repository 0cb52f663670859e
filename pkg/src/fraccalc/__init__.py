"""Fractional calculus: special functions, differintegral engines, closed forms."""
