"""Tests package for Quaternion Factor."""
