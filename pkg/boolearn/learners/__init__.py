"""Learners that fit Boolean functions to care sets."""
