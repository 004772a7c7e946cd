"""Test package for cheatsense."""
