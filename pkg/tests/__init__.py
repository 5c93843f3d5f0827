"""Test package for Bifurcato."""
