"""Tests for the command-line surface."""
