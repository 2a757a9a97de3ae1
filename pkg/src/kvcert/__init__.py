"""Certified counterexamples to a Kummer-Vandiver question for F_q[T]."""

__version__ = "0.1.0"
